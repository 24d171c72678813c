// Minimal end-to-end use of the game engine: declare a two-state game in
// code, evaluate it exactly and by Monte Carlo, then search a small policy
// set for the best protector strategy.
#include <cstdio>

#include "potlab/game/engine.hpp"
#include "potlab/game/search.hpp"
#include "potlab/game/value.hpp"

using namespace potlab;
using namespace potlab::game;

int main() {
    // states: 0 = quiet, 1 = congested; agent 0 is a resident who can
    // report (action 1) or do nothing (action 0); the routing system reacts
    // by sending traffic through (reaction 1) or around (reaction 0).
    GameSpec<int, int, int> g;
    g.n_agents = 1;
    g.initial_state = 1;
    g.state_space = {0, 1};
    g.action_spaces = {{0, 1}};
    g.schedule = [](int) { return AgentId{0}; };
    g.policies = {[](const StateHistory<int>&) {
        return Distribution<int>({{0, 0.5}, {1, 0.5}});
    }};
    g.reaction = [](const StateHistory<int>&, const int& action) {
        // reports make the router avoid the street most of the time
        return action == 1 ? Distribution<int>({{0, 0.8}, {1, 0.2}})
                           : Distribution<int>({{0, 0.3}, {1, 0.7}});
    };
    g.transition = [](const StateHistory<int>&, const int&, const int& routed_through) {
        if (routed_through == 1) return Distribution<int>({{1, 0.9}, {0, 0.1}});
        return Distribution<int>({{0, 0.7}, {1, 0.3}});
    };
    g.system_benefit = [](const int& s) { return s == 1 ? 1.0 : 0.3; };  // traffic served
    g.agent_benefits = {[](const int& s) { return s == 0 ? 1.0 : 0.0; }};  // quiet street
    g.population = [](double, const std::vector<double>& agents) { return agents[0]; };

    const ValueParams params{.gamma = 0.9, .horizon = 4, .start_time = 0};
    const auto h = g.initial_history();
    const double exact = discounted_value_exact(g, agent_value(g, AgentId{0}), h, params);
    const auto mc = discounted_value_mc(g, agent_value(g, AgentId{0}), h, params, 200000, 7);
    std::printf("resident value: exact %.6f, monte carlo %.6f +- %.6f\n", exact, mc.mean,
                mc.std_error);

    const std::vector<AgentPolicy<int, int>> candidates = {
        [](const StateHistory<int>&) { return Distribution<int>::point(0); },  // passive
        [](const StateHistory<int>&) { return Distribution<int>::point(1); },  // always report
        [](const StateHistory<int>& hist) {  // report only when congested
            return Distribution<int>::point(hist.current() == 1 ? 1 : 0);
        },
    };
    const auto best = best_protector_policy(
        g, AgentId{0}, std::span<const AgentPolicy<int, int>>(candidates), h, params);
    const char* names[] = {"passive", "always-report", "report-when-congested"};
    std::printf("best protector policy: %s (value %.6f)\n", names[best.index], best.value);
    return 0;
}
