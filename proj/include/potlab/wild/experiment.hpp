#pragma once

#include <cstdint>
#include <vector>

#include "potlab/game/engine.hpp"
#include "potlab/game/value.hpp"

namespace potlab::wild {

struct WildSummary {
    bool with_pot = false;
    int horizon = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> per_seed;  // mean per-step population benefit of each run
    double mean = 0.0;
};

// Runs the environment through the generic engine and reports the mean
// per-step population benefit per seeded run. Callers build the env twice
// (pot on / pot off) to compare.
template <class State, class Action, class Reaction, class Obs>
WildSummary run_wild_experiment(const game::GameSpec<State, Action, Reaction, Obs>& env,
                                bool with_pot, int horizon,
                                const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw InvalidArgumentError("run_wild_experiment: need at least one seed");
    const auto bpop = game::population_value(env);
    WildSummary summary;
    summary.with_pot = with_pot;
    summary.horizon = horizon;
    for (const auto seed : seeds) {
        const auto traj = game::simulate(env, horizon, seed);
        double total = 0.0;
        for (const auto& st : traj.steps) total += bpop(st.state);
        summary.seeds.push_back(seed);
        summary.per_seed.push_back(total / static_cast<double>(traj.steps.size()));
    }
    for (const double v : summary.per_seed) summary.mean += v;
    summary.mean /= static_cast<double>(summary.per_seed.size());
    return summary;
}

}  // namespace potlab::wild
