#pragma once

#include <map>
#include <string>
#include <vector>

#include "potlab/game/search.hpp"
#include "potlab/game/types.hpp"
#include "potlab/game/value.hpp"
#include "potlab/io/config.hpp"

namespace potlab::io {

// A finite game described entirely in a config file: named states, named
// per-agent actions, named reactions, Markov policy / reaction / transition
// tables, benefit tables and optional deterministic candidate policies for
// the OPT/POT searches. States, actions and reactions are indices into the
// declared name lists.
struct ConfigGame {
    game::GameSpec<int, int, int> spec;
    std::vector<std::string> state_names;
    std::vector<std::string> reaction_names;
    std::vector<std::vector<std::string>> action_names;  // per agent

    game::ValueParams params;
    long mc_samples = 100000;
    std::uint64_t mc_seed = 1;

    std::vector<game::ReactionPolicy<int, int, int>> reaction_candidates;
    std::vector<std::string> reaction_candidate_names;
    std::vector<game::AgentPolicy<int, int>> protector_candidates;
    std::vector<std::string> protector_candidate_names;
    int protector = 0;
};

namespace detail {

inline int name_index(const std::vector<std::string>& names, const std::string& name,
                      const std::string& what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw ConfigError("unknown " + what + " name: `" + name + "`");
}

// "a:0.5, b:0.5" -> distribution over indices of `names`
inline Distribution<int> parse_dist(const Config& cfg, const std::string& raw,
                                    const std::vector<std::string>& names,
                                    const std::string& what) {
    std::vector<std::pair<int, double>> outcomes;
    std::size_t start = 0;
    while (start <= raw.size()) {
        auto comma = raw.find(',', start);
        auto piece = raw.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto colon = piece.find(':');
        if (colon == std::string::npos)
            throw ConfigError("expected `name:prob` entries in `" + raw + "`");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const auto name = trim(piece.substr(0, colon));
        const auto prob = std::stod(trim(piece.substr(colon + 1)));
        outcomes.emplace_back(name_index(names, name, what), prob);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    (void)cfg;
    return Distribution<int>(std::move(outcomes));
}

}  // namespace detail

inline ConfigGame load_config_game(const Config& cfg) {
    ConfigGame g;
    g.state_names = cfg.get_list("game", "states");
    g.reaction_names = cfg.get_list("game", "reactions");
    const int n_agents = static_cast<int>(cfg.get_int("game", "agents"));
    g.spec.n_agents = n_agents;
    g.spec.initial_state =
        detail::name_index(g.state_names, cfg.get_string("game", "initial"), "state");
    for (std::size_t s = 0; s < g.state_names.size(); ++s)
        g.spec.state_space.push_back(static_cast<int>(s));

    for (int a = 0; a < n_agents; ++a) {
        g.action_names.push_back(cfg.get_list("game", "actions." + std::to_string(a)));
        std::vector<int> space;
        for (std::size_t i = 0; i < g.action_names.back().size(); ++i)
            space.push_back(static_cast<int>(i));
        g.spec.action_spaces.push_back(std::move(space));
    }

    const auto pattern = cfg.get_int_list("game", "schedule");
    if (pattern.empty()) throw ConfigError("[game] schedule must not be empty");
    for (const auto a : pattern)
        if (a < 0 || a >= n_agents) throw ConfigError("[game] schedule references unknown agent");
    g.spec.schedule = [pattern](int t) {
        return game::AgentId{
            static_cast<int>(pattern[static_cast<std::size_t>(t - 1) % pattern.size()])};
    };

    // Markov tables: policies keyed by state name, reactions by
    // "state|action", transitions by "state|action|reaction"
    for (int a = 0; a < n_agents; ++a) {
        auto table = std::make_shared<std::map<int, Distribution<int>>>();
        for (std::size_t s = 0; s < g.state_names.size(); ++s) {
            const auto key = g.state_names[s];
            const auto section = "policy." + std::to_string(a);
            if (!cfg.has(section, key))
                throw ConfigError("missing [" + section + "] row for state " + key);
            (*table)[static_cast<int>(s)] = detail::parse_dist(
                cfg, cfg.get_string(section, key), g.action_names[static_cast<std::size_t>(a)],
                "action");
        }
        g.spec.policies.push_back(
            [table](const game::StateHistory<int>& h) { return table->at(h.current()); });
    }

    {
        // action indices are per-agent, so reaction/transition rows are
        // keyed by action NAME and resolved through the acting agent's
        // (schedule-derived) name table
        g.spec.reaction = [cfg_copy = cfg, g_states = g.state_names, g_reactions = g.reaction_names,
                           action_names = g.action_names, pattern](
                              const game::StateHistory<int>& h, const int& action) {
            const auto t = h.size();  // during step t the history has length t
            const auto agent = pattern[(t - 1) % pattern.size()];
            const auto& act_name =
                action_names[static_cast<std::size_t>(agent)][static_cast<std::size_t>(action)];
            const auto key = g_states[static_cast<std::size_t>(h.current())] + "|" + act_name;
            if (!cfg_copy.has("reaction", key))
                throw ConfigError("missing [reaction] row `" + key + "`");
            return detail::parse_dist(cfg_copy, cfg_copy.get_string("reaction", key), g_reactions,
                                      "reaction");
        };
        g.spec.transition = [cfg_copy = cfg, g_states = g.state_names,
                             g_reactions = g.reaction_names, action_names = g.action_names,
                             pattern](const game::StateHistory<int>& h, const int& action,
                                      const int& reaction) {
            const auto t = h.size();
            const auto agent = pattern[(t - 1) % pattern.size()];
            const auto& act_name =
                action_names[static_cast<std::size_t>(agent)][static_cast<std::size_t>(action)];
            const auto key = g_states[static_cast<std::size_t>(h.current())] + "|" + act_name + "|" +
                             g_reactions[static_cast<std::size_t>(reaction)];
            if (!cfg_copy.has("transition", key))
                throw ConfigError("missing [transition] row `" + key + "`");
            return detail::parse_dist(cfg_copy, cfg_copy.get_string("transition", key), g_states,
                                      "state");
        };
    }

    auto benefit_table = [&](const std::string& section) {
        auto values = std::make_shared<std::vector<double>>();
        for (const auto& s : g.state_names) values->push_back(cfg.get_double(section, s));
        return [values](const int& s) { return (*values)[static_cast<std::size_t>(s)]; };
    };
    g.spec.system_benefit = benefit_table("benefit.system");
    for (int a = 0; a < n_agents; ++a)
        g.spec.agent_benefits.push_back(benefit_table("benefit.agent." + std::to_string(a)));

    const auto sigma = cfg.get_string_or("population", "sigma", "mean_agents");
    if (sigma == "mean_agents") {
        g.spec.population = [](double, const std::vector<double>& agents) {
            double sum = 0.0;
            for (const double v : agents) sum += v;
            return sum / static_cast<double>(agents.size());
        };
    } else if (sigma == "system") {
        g.spec.population = [](double system, const std::vector<double>&) { return system; };
    } else if (sigma.rfind("agent:", 0) == 0) {
        const int idx = std::stoi(sigma.substr(6));
        if (idx < 0 || idx >= n_agents) throw ConfigError("[population] sigma agent out of range");
        g.spec.population = [idx](double, const std::vector<double>& agents) {
            return agents[static_cast<std::size_t>(idx)];
        };
    } else {
        throw ConfigError("[population] sigma must be mean_agents, system or agent:<i>");
    }

    g.spec.observe = [](game::AgentId, const game::StateHistory<int>& h) { return h.current(); };

    g.params.gamma = cfg.get_double("game", "gamma");
    g.params.horizon = static_cast<int>(cfg.get_int("game", "horizon"));
    g.params.start_time = static_cast<int>(cfg.get_int_or("game", "start_time", 0));
    g.params.validate();
    g.mc_samples = cfg.get_int_or("game", "mc_samples", 100000);
    g.mc_seed = static_cast<std::uint64_t>(cfg.get_int_or("game", "mc_seed", 1));

    // optional deterministic candidates: "state|action:reaction" lists and
    // "state:action" lists
    if (cfg.has("candidates", "reaction_names")) {
        for (const auto& cname : cfg.get_list("candidates", "reaction_names")) {
            auto table = std::make_shared<std::map<std::string, int>>();
            for (const auto& entry : cfg.get_list("candidates.reaction", cname)) {
                const auto colon = entry.rfind(':');
                if (colon == std::string::npos)
                    throw ConfigError("candidate " + cname + ": expected `state|action:reaction`");
                (*table)[entry.substr(0, colon)] =
                    detail::name_index(g.reaction_names, entry.substr(colon + 1), "reaction");
            }
            const auto pattern2 = cfg.get_int_list("game", "schedule");
            g.reaction_candidates.push_back(
                [table, g_states = g.state_names, action_names = g.action_names, pattern2](
                    const game::StateHistory<int>& h, const int& action) {
                    const auto t = h.size();
                    const auto agent = pattern2[(t - 1) % pattern2.size()];
                    const auto& act_name = action_names[static_cast<std::size_t>(agent)]
                                                       [static_cast<std::size_t>(action)];
                    const auto key = g_states[static_cast<std::size_t>(h.current())] + "|" + act_name;
                    const auto it = table->find(key);
                    if (it == table->end())
                        throw ConfigError("reaction candidate missing row `" + key + "`");
                    return Distribution<int>::point(it->second);
                });
            g.reaction_candidate_names.push_back(cname);
        }
    }
    if (cfg.has("candidates", "policy_names")) {
        g.protector = static_cast<int>(cfg.get_int("candidates", "protector"));
        if (g.protector < 0 || g.protector >= n_agents)
            throw ConfigError("[candidates] protector out of range");
        for (const auto& cname : cfg.get_list("candidates", "policy_names")) {
            auto table = std::make_shared<std::map<int, int>>();
            for (const auto& entry : cfg.get_list("candidates.policy", cname)) {
                const auto colon = entry.rfind(':');
                if (colon == std::string::npos)
                    throw ConfigError("candidate " + cname + ": expected `state:action`");
                (*table)[detail::name_index(g.state_names, entry.substr(0, colon), "state")] =
                    detail::name_index(
                        g.action_names[static_cast<std::size_t>(g.protector)],
                        entry.substr(colon + 1), "action");
            }
            g.protector_candidates.push_back([table](const game::StateHistory<int>& h) {
                const auto it = table->find(h.current());
                if (it == table->end())
                    throw ConfigError("policy candidate missing a row for the current state");
                return Distribution<int>::point(it->second);
            });
            g.protector_candidate_names.push_back(cname);
        }
    }

    g.spec.validate();
    return g;
}

}  // namespace potlab::io
