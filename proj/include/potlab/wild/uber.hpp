#pragma once

#include <cstdint>
#include <vector>

#include "potlab/game/types.hpp"

namespace potlab::wild {

// Toy ride-platform environment. Illustrative dynamics: invented at the
// minimum complexity that exposes the surge mechanism; not calibrated to
// any real marketplace.
//
// Agents: drivers 0..D-1 plus a rider-crowd agent (index D). Rounds of D+1
// steps: the crowd adds riders, then each driver acts (stay offline / be
// online and serve one waiting rider). The platform's reaction to a driver
// action is the price level: surge exactly when
// active_drivers / max(1, waiting) < threshold.
struct UberConfig {
    int drivers = 3;
    std::vector<int> protectors = {0, 1};       // driver indices running the POT
    std::vector<std::pair<int, double>> arrivals = {{1, 0.35}, {2, 0.45}, {3, 0.20}};
    double base_price = 10.0;
    double surge_multiplier = 4.0;              // m > 1
    double surge_threshold = 0.85;              // rho in (0, 1)
    int off_start_round = 2;                    // POT: offline rounds [start, start+duration)
    int off_duration_rounds = 6;                // w
    int max_waiting = 60;
    double commission = 0.25;
    bool pot_enabled = true;

    void validate() const {
        if (drivers < 1) throw InvalidArgumentError("uber: need at least one driver");
        if (surge_multiplier <= 1.0) throw InvalidArgumentError("uber: surge multiplier must be > 1");
        if (surge_threshold <= 0.0 || surge_threshold >= 1.0)
            throw InvalidArgumentError("uber: surge threshold must be in (0, 1)");
        if (arrivals.empty()) throw InvalidArgumentError("uber: arrival distribution required");
        for (const int p : protectors)
            if (p < 0 || p >= drivers) throw InvalidArgumentError("uber: protector index out of range");
    }
};

struct UberState {
    int waiting = 0;
    std::uint32_t active_mask = 0;
    int fare_driver = -1;  // driver paid in the step that produced this state
    bool fare_surged = false;

    bool operator==(const UberState&) const = default;
};

// actions: drivers 0 = offline, 1 = online; crowd 0 = arrive
using UberGame = game::GameSpec<UberState, int, int>;

inline UberGame build_uber_env(const UberConfig& cfg) {
    cfg.validate();
    UberGame g;
    const int D = cfg.drivers;
    g.n_agents = D + 1;
    UberState init;
    init.active_mask = (std::uint32_t{1} << D) - 1;  // everyone starts online
    g.initial_state = init;
    g.schedule = [D](int t) {
        const int slot = (t - 1) % (D + 1);
        return game::AgentId{slot == 0 ? D : slot - 1};
    };
    g.action_spaces.assign(static_cast<std::size_t>(D), {0, 1});
    g.action_spaces.push_back({0});  // crowd

    const auto round_of = [D](std::size_t history_len) {
        return static_cast<int>((history_len - 1) / static_cast<std::size_t>(D + 1));
    };

    std::vector<char> is_protector(static_cast<std::size_t>(D), 0);
    for (const int p : cfg.protectors) is_protector[static_cast<std::size_t>(p)] = 1;
    for (int d = 0; d < D; ++d) {
        const bool runs_pot = cfg.pot_enabled && is_protector[static_cast<std::size_t>(d)];
        g.policies.push_back([cfg, runs_pot, round_of](const game::StateHistory<UberState>& h) {
            if (runs_pot) {
                const int round = round_of(h.size());
                if (round >= cfg.off_start_round &&
                    round < cfg.off_start_round + cfg.off_duration_rounds)
                    return Distribution<int>::point(0);
            }
            return Distribution<int>::point(1);
        });
    }
    g.policies.push_back([](const game::StateHistory<UberState>&) {
        return Distribution<int>::point(0);
    });

    // price level: surge iff active/max(1, waiting) < rho after the action
    g.reaction = [cfg, D](const game::StateHistory<UberState>& h, const int& action) {
        const int slot = static_cast<int>((h.size() - 1) % static_cast<std::size_t>(D + 1));
        if (slot == 0) return Distribution<int>::point(0);  // crowd step: no pricing event
        const int driver = slot - 1;
        std::uint32_t active = h.current().active_mask;
        if (action == 1)
            active |= (std::uint32_t{1} << driver);
        else
            active &= ~(std::uint32_t{1} << driver);
        const int n_active = std::popcount(active);
        const double ratio =
            static_cast<double>(n_active) / static_cast<double>(std::max(1, h.current().waiting));
        return Distribution<int>::point(ratio < cfg.surge_threshold ? 1 : 0);
    };

    g.transition = [cfg, D](const game::StateHistory<UberState>& h, const int& action,
                            const int& reaction) {
        const int slot = static_cast<int>((h.size() - 1) % static_cast<std::size_t>(D + 1));
        UberState s = h.current();
        s.fare_driver = -1;
        s.fare_surged = false;
        if (slot == 0) {
            std::vector<std::pair<UberState, double>> outcomes;
            for (const auto& [count, p] : cfg.arrivals) {
                UberState next = s;
                next.waiting = std::min(cfg.max_waiting, next.waiting + count);
                outcomes.emplace_back(next, p);
            }
            return Distribution<UberState>(std::move(outcomes));
        }
        const int driver = slot - 1;
        if (action == 1) {
            s.active_mask |= (std::uint32_t{1} << driver);
            if (s.waiting > 0) {
                s.waiting -= 1;
                s.fare_driver = driver;
                s.fare_surged = reaction == 1;
            }
        } else {
            s.active_mask &= ~(std::uint32_t{1} << driver);
        }
        return Distribution<UberState>::point(s);
    };

    const auto fare = [cfg](const UberState& s) {
        if (s.fare_driver < 0) return 0.0;
        return s.fare_surged ? cfg.base_price * cfg.surge_multiplier : cfg.base_price;
    };
    g.system_benefit = [cfg, fare](const UberState& s) { return cfg.commission * fare(s); };
    for (int d = 0; d < D; ++d)
        g.agent_benefits.push_back([d, cfg, fare](const UberState& s) {
            return s.fare_driver == d ? (1.0 - cfg.commission) * fare(s) : 0.0;
        });
    g.agent_benefits.push_back([](const UberState& s) {
        return -static_cast<double>(s.waiting);  // crowd dislikes queueing
    });

    // population benefit: mean earnings of the protector drivers
    auto protectors = cfg.protectors;
    g.population = [protectors](double, const std::vector<double>& agents) {
        double sum = 0.0;
        for (const int p : protectors) sum += agents[static_cast<std::size_t>(p)];
        return sum / static_cast<double>(protectors.size());
    };
    g.observe = [](game::AgentId, const game::StateHistory<UberState>& h) { return h.current(); };
    return g;
}

inline int uber_steps_for_rounds(const UberConfig& cfg, int rounds) {
    return rounds * (cfg.drivers + 1);
}

}  // namespace potlab::wild
