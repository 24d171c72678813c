#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "potlab/game/value.hpp"

namespace potlab::game {

struct PolicySearchResult {
    std::size_t index = 0;  // into the candidate list
    double value = 0.0;
    std::vector<double> all_values;
};

// kappa* = argmax over the supplied candidates of the system's exact
// discounted value. Ties break toward the lowest candidate index.
template <class State, class Action, class Reaction, class Obs>
PolicySearchResult best_reaction_policy(
    const GameSpec<State, Action, Reaction, Obs>& game,
    std::span<const ReactionPolicy<State, Action, Reaction>> candidates,
    const StateHistory<State>& history, const ValueParams& params) {
    if (candidates.empty()) throw InvalidArgumentError("best_reaction_policy: empty candidate set");
    GameSpec<State, Action, Reaction, Obs> variant = game;
    PolicySearchResult result;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        variant.reaction = candidates[i];
        const double v = discounted_value_exact(variant, system_value(variant), history, params);
        result.all_values.push_back(v);
        if (i == 0 || v > result.value) {
            result.index = i;
            result.value = v;
        }
    }
    return result;
}

// pi* = argmax over candidate policies for the protector agent of the exact
// discounted POPULATION value. Same tie rule.
template <class State, class Action, class Reaction, class Obs>
PolicySearchResult best_protector_policy(const GameSpec<State, Action, Reaction, Obs>& game,
                                         AgentId protector,
                                         std::span<const AgentPolicy<State, Action>> candidates,
                                         const StateHistory<State>& history,
                                         const ValueParams& params) {
    game.check_agent(protector);
    if (candidates.empty()) throw InvalidArgumentError("best_protector_policy: empty candidate set");
    GameSpec<State, Action, Reaction, Obs> variant = game;
    PolicySearchResult result;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        variant.policies[static_cast<std::size_t>(protector.index)] = candidates[i];
        const double v = discounted_value_exact(variant, population_value(variant), history, params);
        result.all_values.push_back(v);
        if (i == 0 || v > result.value) {
            result.index = i;
            result.value = v;
        }
    }
    return result;
}

}  // namespace potlab::game
