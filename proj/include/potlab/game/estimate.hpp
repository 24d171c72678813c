#pragma once

#include <span>
#include <vector>

#include "potlab/game/types.hpp"

namespace potlab::game {

// Unnormalized prior weight of a candidate history (oldest first), given the
// acting agent's own past actions.
template <class State, class Action>
using HistoryPrior = std::function<double(std::span<const State>, std::span<const Action>)>;

template <class State, class Action>
HistoryPrior<State, Action> uniform_history_prior() {
    return [](std::span<const State>, std::span<const Action>) { return 1.0; };
}

// Maximum a posteriori estimate of the state history given an agent's
// observation sequence (oldest first). Enumerates the full candidate space
// state_space^t; posterior(h) = prior(h) * prod_j Pr[obs_j | h_j]. Ties
// break toward the lexicographically smallest index sequence in declared
// state-space order.
template <class State, class Action, class Reaction, class Obs>
StateHistory<State> map_state_history(const GameSpec<State, Action, Reaction, Obs>& game,
                                      AgentId agent, std::span<const Obs> observations,
                                      std::span<const Action> actions,
                                      const HistoryPrior<State, Action>& prior) {
    game.check_agent(agent);
    if (observations.empty())
        throw InvalidArgumentError("map_state_history: need at least one observation");
    if (game.state_space.empty())
        throw UnsupportedSpaceError("map_state_history: game declares no finite state space");
    if (!game.observation_likelihood)
        throw UnsupportedSpaceError("map_state_history: game has no observation likelihood model");

    const std::size_t t = observations.size();
    const std::size_t m = game.state_space.size();
    // enumeration size guard: m^t candidates
    double count = 1.0;
    for (std::size_t i = 0; i < t; ++i) {
        count *= static_cast<double>(m);
        if (count > 2e7)
            throw UnsupportedSpaceError("map_state_history: history space too large to enumerate");
    }

    std::vector<std::size_t> idx(t, 0);     // odometer, oldest first
    std::vector<State> candidate(t);
    double best_posterior = -1.0;
    std::vector<std::size_t> best_idx;
    bool done = false;
    while (!done) {
        for (std::size_t j = 0; j < t; ++j) candidate[j] = game.state_space[idx[j]];
        double posterior = prior(std::span<const State>(candidate), actions);
        for (std::size_t j = 0; j < t && posterior > 0.0; ++j)
            posterior *= game.observation_likelihood(agent, observations[j], candidate[j]);
        if (posterior > best_posterior) {  // strict: first maximum wins => lexicographic tie rule
            best_posterior = posterior;
            best_idx = idx;
        }
        // advance odometer, most recent position fastest
        done = true;
        for (std::size_t j = t; j-- > 0;) {
            if (++idx[j] < m) {
                done = false;
                break;
            }
            idx[j] = 0;
        }
    }
    if (best_posterior <= 0.0)
        throw InconsistentObservationsError(
            "map_state_history: zero posterior mass on every candidate history");

    StateHistory<State> result(game.state_space[best_idx[0]]);
    for (std::size_t j = 1; j < t; ++j) result.push(game.state_space[best_idx[j]]);
    return result;
}

}  // namespace potlab::game
