#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "potlab/game/types.hpp"

namespace potlab::game {

template <class State, class Action, class Reaction>
struct TrajectoryStep {
    int time = 0;          // 1-based
    State state;           // state after the step (result of the transition)
    AgentId agent;
    Action action;
    Reaction reaction;
    double system_benefit = 0.0;
    std::vector<double> agent_benefits;  // evaluated at `state`
};

template <class State, class Action, class Reaction>
struct Trajectory {
    std::vector<TrajectoryStep<State, Action, Reaction>> steps;
    std::uint64_t seed = 0;
};

// One interaction: the system reacts to the agent's action, the world
// transitions, and the history is extended with the new state.
template <class State, class Action, class Reaction, class Obs>
std::pair<Reaction, State> step(const GameSpec<State, Action, Reaction, Obs>& game,
                                StateHistory<State>& history, AgentId agent, const Action& action,
                                rng::Engine& rng) {
    game.check_agent(agent);
    if (!game.action_spaces.empty()) {
        const auto& allowed = game.action_spaces[static_cast<std::size_t>(agent.index)];
        if (std::find(allowed.begin(), allowed.end(), action) == allowed.end())
            throw InvalidActionError("step: action not in the acting agent's action set");
    }
    const Reaction reaction = game.reaction(history, action).sample(rng);
    State next = game.transition(history, action, reaction).sample(rng);
    history.push(next);
    return {reaction, std::move(next)};
}

// Run the game for `horizon` steps from its initial state. Fully
// deterministic in (game, horizon, seed).
template <class State, class Action, class Reaction, class Obs>
Trajectory<State, Action, Reaction> simulate(const GameSpec<State, Action, Reaction, Obs>& game,
                                             int horizon, std::uint64_t seed) {
    game.validate();
    if (horizon < 1) throw InvalidArgumentError("simulate: horizon must be >= 1");
    rng::Engine rng(seed);
    Trajectory<State, Action, Reaction> traj;
    traj.seed = seed;
    traj.steps.reserve(static_cast<std::size_t>(horizon));
    StateHistory<State> history = game.initial_history();
    for (int t = 1; t <= horizon; ++t) {
        const AgentId agent = game.schedule(t);
        game.check_agent(agent);
        const auto dist = game.policies[static_cast<std::size_t>(agent.index)](history);
        if (dist.empty()) throw MalformedPolicyError("simulate: policy returned an empty distribution");
        const Action action = dist.sample(rng);
        auto [reaction, next] = step(game, history, agent, action, rng);
        TrajectoryStep<State, Action, Reaction> rec;
        rec.time = t;
        rec.state = next;
        rec.agent = agent;
        rec.action = action;
        rec.reaction = reaction;
        rec.system_benefit = game.system_benefit(rec.state);
        rec.agent_benefits.reserve(game.agent_benefits.size());
        for (const auto& b : game.agent_benefits) rec.agent_benefits.push_back(b(rec.state));
        traj.steps.push_back(std::move(rec));
    }
    return traj;
}

}  // namespace potlab::game
