#pragma once

#include <vector>

#include "potlab/game/types.hpp"

namespace potlab::wild {

// Toy ad-profiling environment. Illustrative dynamics: the network serves
// each user the category with the best empirical click-through estimate
// (unseen categories first, then fewest impressions, then lowest index).
// Honest users click by true relevance; a protector clicks everything,
// which keeps every estimate saturated and forces the served categories to
// rotate, so the profile pins down no real interest.
struct AdConfig {
    int categories = 4;
    // users x categories true click relevance in [0, 1]
    std::vector<std::vector<double>> relevance = {
        {1.0, 0.05, 0.05, 0.05},
        {0.05, 0.05, 1.0, 0.05},
    };
    std::vector<int> protectors = {1};
    bool pot_enabled = true;

    void validate() const {
        if (categories < 2) throw InvalidArgumentError("adnauseam: need at least two categories");
        if (relevance.empty()) throw InvalidArgumentError("adnauseam: need at least one user");
        for (const auto& row : relevance) {
            if (static_cast<int>(row.size()) != categories)
                throw InvalidArgumentError("adnauseam: relevance row size mismatch");
            for (const double p : row)
                if (p < 0.0 || p > 1.0)
                    throw InvalidArgumentError("adnauseam: relevance must be in [0, 1]");
        }
        for (const int p : protectors)
            if (p < 0 || p >= static_cast<int>(relevance.size()))
                throw InvalidArgumentError("adnauseam: protector index out of range");
    }

    int true_top(int user) const {
        const auto& row = relevance[static_cast<std::size_t>(user)];
        int best = 0;
        for (int c = 1; c < categories; ++c)
            if (row[static_cast<std::size_t>(c)] > row[static_cast<std::size_t>(best)]) best = c;
        return best;
    }
};

struct AdState {
    std::vector<std::vector<int>> clicks;       // per user per category
    std::vector<std::vector<int>> impressions;  // per user per category
    int last_actor = -1;
    int last_served = -1;
    bool last_clicked = false;
    bool last_matched = false;  // served category == actor's true top interest

    bool operator==(const AdState&) const = default;
};

// every user has a single action: browse (0); reactions are ad categories
using AdGame = game::GameSpec<AdState, int, int>;

inline AdGame build_adnauseam_env(const AdConfig& cfg) {
    cfg.validate();
    AdGame g;
    const int U = static_cast<int>(cfg.relevance.size());
    g.n_agents = U;
    AdState init;
    init.clicks.assign(static_cast<std::size_t>(U),
                       std::vector<int>(static_cast<std::size_t>(cfg.categories), 0));
    init.impressions = init.clicks;
    g.initial_state = init;
    g.schedule = [U](int t) { return game::AgentId{(t - 1) % U}; };
    g.action_spaces.assign(static_cast<std::size_t>(U), {0});
    for (int u = 0; u < U; ++u)
        g.policies.push_back([](const game::StateHistory<AdState>&) {
            return Distribution<int>::point(0);
        });

    const auto acting_user = [U](std::size_t history_len) {
        return static_cast<int>((history_len - 1) % static_cast<std::size_t>(U));
    };

    // serve the category with the best empirical click rate; ties: fewest
    // impressions, then lowest index (unseen categories count as rate 2, so
    // each is explored once before the greedy regime starts)
    g.reaction = [cfg, acting_user](const game::StateHistory<AdState>& h, const int&) {
        const auto u = static_cast<std::size_t>(acting_user(h.size()));
        const auto& cl = h.current().clicks[u];
        const auto& im = h.current().impressions[u];
        int best = 0;
        auto rate = [&](int c) {
            const auto cc = static_cast<std::size_t>(c);
            return im[cc] == 0 ? 2.0
                               : static_cast<double>(cl[cc]) / static_cast<double>(im[cc]);
        };
        for (int c = 1; c < cfg.categories; ++c) {
            const double rc = rate(c), rb = rate(best);
            if (rc > rb ||
                (rc == rb && im[static_cast<std::size_t>(c)] < im[static_cast<std::size_t>(best)]))
                best = c;
        }
        return Distribution<int>::point(best);
    };

    std::vector<char> is_protector(static_cast<std::size_t>(U), 0);
    for (const int p : cfg.protectors) is_protector[static_cast<std::size_t>(p)] = 1;

    g.transition = [cfg, acting_user, is_protector](const game::StateHistory<AdState>& h,
                                                    const int&, const int& served) {
        const int user = acting_user(h.size());
        const auto u = static_cast<std::size_t>(user);
        const auto c = static_cast<std::size_t>(served);
        AdState base = h.current();
        base.last_actor = user;
        base.last_served = served;
        base.last_matched = served == cfg.true_top(user);
        base.impressions[u][c] += 1;

        const bool click_all = cfg.pot_enabled && is_protector[u];
        const double p_click = click_all ? 1.0 : cfg.relevance[u][c];
        AdState clicked = base;
        clicked.clicks[u][c] += 1;
        clicked.last_clicked = true;
        base.last_clicked = false;
        if (p_click >= 1.0) return Distribution<AdState>::point(clicked);
        if (p_click <= 0.0) return Distribution<AdState>::point(base);
        return Distribution<AdState>({{clicked, p_click}, {base, 1.0 - p_click}});
    };

    g.system_benefit = [](const AdState& s) { return s.last_clicked ? 1.0 : 0.0; };
    for (int u = 0; u < U; ++u)
        g.agent_benefits.push_back([u](const AdState& s) {
            // "useless profile" objective: negated profiling accuracy
            return s.last_actor == u ? -(s.last_matched ? 1.0 : 0.0) : 0.0;
        });

    auto protectors = cfg.protectors;
    g.population = [protectors](double, const std::vector<double>& agents) {
        double sum = 0.0;
        for (const int p : protectors) sum += agents[static_cast<std::size_t>(p)];
        return sum / static_cast<double>(protectors.size());
    };
    g.observe = [](game::AgentId, const game::StateHistory<AdState>& h) { return h.current(); };
    return g;
}

}  // namespace potlab::wild
