#pragma once

#include <numeric>
#include <vector>

#include "potlab/game/types.hpp"

namespace potlab::wild {

// Toy map-editing environment. Illustrative dynamics: spawn locations are
// drawn proportionally to per-cell map-feature mass; a protector spends an
// edit budget adding features near home.
struct PokemonConfig {
    int cells = 4;
    std::vector<int> initial_features = {6, 6, 6, 1};  // per cell
    double feature_weight = 1.0;
    int home_cell = 3;
    int edit_budget = 8;
    bool pot_enabled = true;

    void validate() const {
        if (cells < 1) throw InvalidArgumentError("pokemon: need at least one cell");
        if (static_cast<int>(initial_features.size()) != cells)
            throw InvalidArgumentError("pokemon: one initial feature count per cell");
        long total = 0;
        for (const int f : initial_features) {
            if (f < 0) throw InvalidArgumentError("pokemon: feature counts must be >= 0");
            total += f;
        }
        if (total == 0) throw InvalidArgumentError("pokemon: spawn weights must normalize (no features)");
        if (home_cell < 0 || home_cell >= cells)
            throw InvalidArgumentError("pokemon: home cell out of range");
        if (edit_budget < 0) throw InvalidArgumentError("pokemon: edit budget must be >= 0");
        if (feature_weight <= 0.0) throw InvalidArgumentError("pokemon: feature weight must be > 0");
    }
};

struct PokemonState {
    std::vector<int> features;
    int budget_left = 0;
    int last_spawn = -1;

    bool operator==(const PokemonState&) const = default;
};

// agents: 0 = protector/editor, 1 = scout. Editor actions: 0 = no-op,
// 1..cells = add one feature to cell (action - 1). Scout action: 0 = search.
using PokemonGame = game::GameSpec<PokemonState, int, int>;

inline PokemonGame build_pokemon_env(const PokemonConfig& cfg) {
    cfg.validate();
    PokemonGame g;
    g.n_agents = 2;
    PokemonState init;
    init.features = cfg.initial_features;
    init.budget_left = cfg.edit_budget;
    g.initial_state = init;
    g.schedule = [](int t) { return game::AgentId{(t - 1) % 2}; };
    std::vector<int> editor_actions(static_cast<std::size_t>(cfg.cells) + 1);
    std::iota(editor_actions.begin(), editor_actions.end(), 0);
    g.action_spaces = {editor_actions, {0}};

    g.policies.push_back([cfg](const game::StateHistory<PokemonState>& h) {
        if (cfg.pot_enabled && h.current().budget_left > 0)
            return Distribution<int>::point(cfg.home_cell + 1);  // spend budget at home
        return Distribution<int>::point(0);
    });
    g.policies.push_back([](const game::StateHistory<PokemonState>&) {
        return Distribution<int>::point(0);
    });

    // the system reacts to a search by picking the spawn cell, proportional
    // to per-cell feature mass; editor actions get a plain acknowledgement
    g.reaction = [cfg](const game::StateHistory<PokemonState>& h, const int&) {
        const bool scout_turn = h.size() % 2 == 0;  // schedule: odd t = editor, even t = scout
        if (!scout_turn) return Distribution<int>::point(-1);
        const auto& f = h.current().features;
        double total = 0.0;
        for (const int c : f) total += cfg.feature_weight * c;
        std::vector<std::pair<int, double>> outcomes;
        double partial = 0.0;
        for (int c = 0; c < cfg.cells; ++c) {
            double p = cfg.feature_weight * f[static_cast<std::size_t>(c)] / total;
            if (c + 1 == cfg.cells) p = 1.0 - partial;
            partial += p;
            outcomes.emplace_back(c, p);
        }
        return Distribution<int>(std::move(outcomes));
    };

    g.transition = [](const game::StateHistory<PokemonState>& h, const int& action,
                      const int& reaction) {
        PokemonState s = h.current();
        const bool scout_turn = h.size() % 2 == 0;
        if (scout_turn) {
            s.last_spawn = reaction;
        } else {
            s.last_spawn = -1;
            if (action > 0) {
                if (s.budget_left <= 0)
                    throw InvalidActionError("pokemon: edit attempted with no budget left");
                s.features[static_cast<std::size_t>(action - 1)] += 1;
                s.budget_left -= 1;
            }
        }
        return Distribution<PokemonState>::point(s);
    };

    g.system_benefit = [](const PokemonState& s) { return s.last_spawn >= 0 ? 1.0 : 0.0; };
    g.agent_benefits = {
        [cfg](const PokemonState& s) { return s.last_spawn == cfg.home_cell ? 1.0 : 0.0; },
        [](const PokemonState&) { return 0.0; },
    };
    g.population = [](double, const std::vector<double>& agents) { return agents[0]; };
    g.observe = [](game::AgentId, const game::StateHistory<PokemonState>& h) { return h.current(); };
    return g;
}

}  // namespace potlab::wild
