#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "potlab/common/distribution.hpp"
#include "potlab/common/error.hpp"

namespace potlab::game {

namespace detail {
struct HistoryBacktrack;
}

struct AgentId {
    int index = 0;
    auto operator<=>(const AgentId&) const = default;
};

// Sequence of world states, one per elapsed time step. Internally stored
// oldest-first; the paper-facing view (most recent first) is available via
// at_age(). Append-only and never empty.
template <class State>
class StateHistory {
public:
    explicit StateHistory(State initial) { states_.push_back(std::move(initial)); }

    void push(State s) { states_.push_back(std::move(s)); }

    const State& current() const { return states_.back(); }

    // age 0 = most recent
    const State& at_age(std::size_t age) const { return states_[states_.size() - 1 - age]; }

    std::size_t size() const { return states_.size(); }

    const std::vector<State>& oldest_first() const { return states_; }

private:
    friend struct detail::HistoryBacktrack;  // exact-value enumeration backtracking
    std::vector<State> states_;
};

// theta(t): which agent acts at (1-based) time t.
using TurnSchedule = std::function<AgentId(int)>;

template <class State, class Action>
using AgentPolicy = std::function<Distribution<Action>(const StateHistory<State>&)>;

template <class State, class Action, class Reaction>
using ReactionPolicy = std::function<Distribution<Reaction>(const StateHistory<State>&, const Action&)>;

template <class State, class Action, class Reaction>
using TransitionModel =
    std::function<Distribution<State>(const StateHistory<State>&, const Action&, const Reaction&)>;

template <class State>
using BenefitFn = std::function<double(const State&)>;

// sigma: combines the system benefit and all agent benefits into one scalar.
using PopulationCombiner = std::function<double(double, const std::vector<double>&)>;

struct ValueParams {
    double gamma = 1.0;  // discount, in [0, 1]
    int horizon = 1;     // n >= 1 future steps
    int start_time = 0;  // k >= 0; discounting uses absolute time t = k+1..k+n

    void validate() const {
        if (gamma < 0.0 || gamma > 1.0) throw InvalidArgumentError("ValueParams: gamma must be in [0,1]");
        if (horizon < 1) throw InvalidArgumentError("ValueParams: horizon must be >= 1");
        if (start_time < 0) throw InvalidArgumentError("ValueParams: start_time must be >= 0");
    }
};

// A complete stochastic game between the optimization system and a set of
// agents. Policies, the reaction policy and the transition model all return
// explicit finite distributions, so exact evaluation never needs a separate
// space enumerator; the declared spaces below are used for action
// validation, history enumeration and candidate generation.
template <class State, class Action, class Reaction, class Obs = State>
struct GameSpec {
    int n_agents = 0;
    State initial_state{};

    TurnSchedule schedule;
    std::vector<AgentPolicy<State, Action>> policies;  // one per agent
    ReactionPolicy<State, Action, Reaction> reaction;
    TransitionModel<State, Action, Reaction> transition;

    std::function<Obs(AgentId, const StateHistory<State>&)> observe;
    // Pr[observation | true state], required by map_state_history.
    std::function<double(AgentId, const Obs&, const State&)> observation_likelihood;

    BenefitFn<State> system_benefit;                // B_o
    std::vector<BenefitFn<State>> agent_benefits;   // B_i
    PopulationCombiner population;                  // sigma

    // Declared finite spaces (optional): states for history enumeration,
    // per-agent action sets for step() validation.
    std::vector<State> state_space;
    std::vector<std::vector<Action>> action_spaces;

    StateHistory<State> initial_history() const { return StateHistory<State>(initial_state); }

    void validate() const {
        if (n_agents <= 0) throw InvalidArgumentError("GameSpec: need at least one agent");
        if (static_cast<int>(policies.size()) != n_agents)
            throw InvalidArgumentError("GameSpec: one policy per agent required");
        if (static_cast<int>(agent_benefits.size()) != n_agents)
            throw InvalidArgumentError("GameSpec: one benefit function per agent required");
        if (!schedule || !reaction || !transition || !system_benefit)
            throw InvalidArgumentError("GameSpec: schedule/reaction/transition/system benefit must be set");
        if (!action_spaces.empty() && static_cast<int>(action_spaces.size()) != n_agents)
            throw InvalidArgumentError("GameSpec: action_spaces must be empty or one set per agent");
    }

    void check_agent(AgentId id) const {
        if (id.index < 0 || id.index >= n_agents)
            throw InvalidArgumentError("GameSpec: agent index " + std::to_string(id.index) + " out of range");
    }
};

}  // namespace potlab::game
