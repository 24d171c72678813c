#pragma once

#include <cmath>
#include <cstdint>

#include "potlab/game/engine.hpp"
#include "potlab/game/types.hpp"

namespace potlab::game {

// Scalar benefit of a single world state; build one with the selectors below.
template <class State>
using StateValue = std::function<double(const State&)>;

template <class State, class Action, class Reaction, class Obs>
StateValue<State> system_value(const GameSpec<State, Action, Reaction, Obs>& game) {
    return game.system_benefit;
}

template <class State, class Action, class Reaction, class Obs>
StateValue<State> agent_value(const GameSpec<State, Action, Reaction, Obs>& game, AgentId agent) {
    game.check_agent(agent);
    return game.agent_benefits[static_cast<std::size_t>(agent.index)];
}

// B_pop(s) = sigma(B_o(s), {B_i(s)})
template <class State, class Action, class Reaction, class Obs>
StateValue<State> population_value(const GameSpec<State, Action, Reaction, Obs>& game) {
    if (!game.population) throw InvalidArgumentError("population_value: no population combiner configured");
    return [&game](const State& s) {
        std::vector<double> agent_vals;
        agent_vals.reserve(game.agent_benefits.size());
        for (const auto& b : game.agent_benefits) agent_vals.push_back(b(s));
        return game.population(game.system_benefit(s), agent_vals);
    };
}

// Expected benefit of performing `action` on `history`: the expectation of
// B over the reaction drawn from kappa and the next state drawn from tau.
template <class State, class Action, class Reaction, class Obs>
double expected_immediate_benefit(const GameSpec<State, Action, Reaction, Obs>& game,
                                  const StateValue<State>& benefit,
                                  const StateHistory<State>& history, const Action& action) {
    double total = 0.0;
    const auto reaction_dist = game.reaction(history, action);
    for (const auto& [reaction, p_r] : reaction_dist.outcomes()) {
        if (p_r <= 0.0) continue;
        double inner = 0.0;
        const auto next_dist = game.transition(history, action, reaction);
        for (const auto& [next, p_s] : next_dist.outcomes()) {
            if (p_s <= 0.0) continue;
            inner += p_s * benefit(next);
        }
        total += p_r * inner;
    }
    return total;
}

// Expansion budget for exact evaluation; enough for > 10^6 leaf paths.
inline constexpr std::uint64_t kExactNodeBudget = 80'000'000;

namespace detail {

struct HistoryBacktrack {
    template <class State>
    static void pop(StateHistory<State>& h) {
        h.states_.pop_back();
    }
};

template <class State, class Action, class Reaction, class Obs>
double exact_value_rec(const GameSpec<State, Action, Reaction, Obs>& game,
                       const StateValue<State>& benefit, StateHistory<State>& history, int t,
                       int last_t, double gamma, std::uint64_t& budget) {
    if (t > last_t) return 0.0;
    const AgentId agent = game.schedule(t);
    game.check_agent(agent);
    const auto action_dist = game.policies[static_cast<std::size_t>(agent.index)](history);
    if (action_dist.empty()) throw MalformedPolicyError("discounted_value: policy returned empty distribution");
    const double discount = std::pow(gamma, t);
    double total = 0.0;
    for (const auto& [action, p_a] : action_dist.outcomes()) {
        if (p_a <= 0.0) continue;
        total += p_a * discount * expected_immediate_benefit(game, benefit, history, action);
        if (t == last_t) continue;  // deeper levels contribute nothing
        const auto reaction_dist = game.reaction(history, action);
        for (const auto& [reaction, p_r] : reaction_dist.outcomes()) {
            if (p_r <= 0.0) continue;
            const auto next_dist = game.transition(history, action, reaction);
            for (const auto& [next, p_s] : next_dist.outcomes()) {
                if (p_s <= 0.0) continue;
                if (--budget == 0)
                    throw UnsupportedSpaceError(
                        "discounted_value(exact): enumeration budget exhausted; "
                        "use monte_carlo for this game");
                history.push(next);
                total += p_a * p_r * p_s *
                         exact_value_rec(game, benefit, history, t + 1, last_t, gamma, budget);
                HistoryBacktrack::pop(history);
            }
        }
    }
    return total;
}

}  // namespace detail

// V^{pi,kappa}(s_k) = E[ sum_{t=k+1}^{k+n} gamma^t B^kappa(s_t, a_{theta(t),t}) ].
//
// Note the discount is gamma^t with ABSOLUTE time t (t = start_time+1 ..
// start_time+n), not gamma^(t-k) as in the usual RL convention: the same
// game valued from a later start time is worth less.
template <class State, class Action, class Reaction, class Obs>
double discounted_value_exact(const GameSpec<State, Action, Reaction, Obs>& game,
                              const StateValue<State>& benefit, const StateHistory<State>& history,
                              const ValueParams& params) {
    params.validate();
    StateHistory<State> h = history;
    std::uint64_t budget = kExactNodeBudget;
    return detail::exact_value_rec(game, benefit, h, params.start_time + 1,
                                   params.start_time + params.horizon, params.gamma, budget);
}

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

// Plain-rollout Monte Carlo estimate of the same quantity: each sample draws
// a trajectory and accumulates gamma^t * B(next state).
template <class State, class Action, class Reaction, class Obs>
McEstimate discounted_value_mc(const GameSpec<State, Action, Reaction, Obs>& game,
                               const StateValue<State>& benefit, const StateHistory<State>& history,
                               const ValueParams& params, long samples, std::uint64_t seed) {
    params.validate();
    if (samples < 1) throw InvalidArgumentError("discounted_value_mc: samples must be >= 1");
    rng::Engine rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < samples; ++i) {
        StateHistory<State> h = history;
        double v = 0.0;
        for (int t = params.start_time + 1; t <= params.start_time + params.horizon; ++t) {
            const AgentId agent = game.schedule(t);
            game.check_agent(agent);
            const auto dist = game.policies[static_cast<std::size_t>(agent.index)](h);
            if (dist.empty()) throw MalformedPolicyError("discounted_value_mc: empty policy distribution");
            const Action action = dist.sample(rng);
            auto [reaction, next] = step(game, h, agent, action, rng);
            (void)reaction;
            v += std::pow(params.gamma, t) * benefit(next);
        }
        sum += v;
        sum_sq += v * v;
    }
    McEstimate est;
    est.samples = samples;
    est.mean = sum / static_cast<double>(samples);
    if (samples > 1) {
        const double var =
            (sum_sq - sum * sum / static_cast<double>(samples)) / static_cast<double>(samples - 1);
        est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
    }
    return est;
}

}  // namespace potlab::game
