#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "potlab/wild/adnauseam.hpp"
#include "potlab/wild/experiment.hpp"
#include "potlab/wild/pokemon.hpp"
#include "potlab/wild/uber.hpp"

using namespace potlab;
using namespace potlab::wild;

TEST_CASE("uber: no surge while the driver/demand ratio stays above threshold", "[wild]") {
    UberConfig cfg;
    cfg.drivers = 3;
    cfg.protectors = {0};
    cfg.pot_enabled = false;
    cfg.arrivals = {{1, 1.0}};  // one rider per round, three drivers always on
    cfg.surge_threshold = 0.85;
    const auto env = build_uber_env(cfg);
    const auto traj = game::simulate(env, uber_steps_for_rounds(cfg, 20), 5);
    for (const auto& st : traj.steps) CHECK_FALSE(st.state.fare_surged);
}

TEST_CASE("uber: protectors going offline force a surge window", "[wild]") {
    UberConfig cfg;
    cfg.drivers = 3;
    cfg.protectors = {0, 1};
    cfg.pot_enabled = true;
    cfg.arrivals = {{2, 1.0}};  // demand outpaces the one remaining driver
    cfg.off_start_round = 1;
    cfg.off_duration_rounds = 5;
    const auto env = build_uber_env(cfg);
    const auto traj = game::simulate(env, uber_steps_for_rounds(cfg, 8), 5);
    bool surged_during_off = false;
    for (const auto& st : traj.steps) {
        const int round = (st.time - 1) / (cfg.drivers + 1);
        if (round >= 1 && round < 6 && st.state.fare_surged) surged_during_off = true;
    }
    CHECK(surged_during_off);
}

TEST_CASE("uber: the off/on strategy out-earns always-on over seeded runs", "[wild]") {
    UberConfig cfg;  // defaults are the calibrated demo dynamics
    const auto with_pot = build_uber_env(cfg);
    auto cfg_off = cfg;
    cfg_off.pot_enabled = false;
    const auto without_pot = build_uber_env(cfg_off);
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 1000; ++s) seeds.push_back(s);
    const int horizon = uber_steps_for_rounds(cfg, 30);
    const auto on = run_wild_experiment(with_pot, true, horizon, seeds);
    const auto off = run_wild_experiment(without_pot, false, horizon, seeds);
    CHECK(on.mean > off.mean);
}

TEST_CASE("pokemon: all features at home means all spawns at home", "[wild]") {
    PokemonConfig cfg;
    cfg.cells = 4;
    cfg.initial_features = {0, 0, 0, 9};
    cfg.home_cell = 3;
    cfg.pot_enabled = false;
    const auto env = build_pokemon_env(cfg);
    const auto traj = game::simulate(env, 60, 11);
    for (const auto& st : traj.steps)
        if (st.time % 2 == 0) CHECK(st.state.last_spawn == 3);  // scout steps
}

TEST_CASE("pokemon: edits beyond the budget are invalid actions", "[wild]") {
    PokemonConfig cfg;
    cfg.edit_budget = 1;
    const auto env = build_pokemon_env(cfg);
    auto h = env.initial_history();
    rng::Engine rng(3);
    game::step(env, h, game::AgentId{0}, cfg.home_cell + 1, rng);  // spend the budget
    CHECK(h.current().budget_left == 0);
    game::step(env, h, game::AgentId{1}, 0, rng);  // scout turn passes
    CHECK_THROWS_AS(game::step(env, h, game::AgentId{0}, 1, rng), InvalidActionError);
}

TEST_CASE("pokemon: adding features weakly increases the home spawn probability", "[wild]") {
    PokemonConfig cfg;
    cfg.initial_features = {5, 5, 5, 2};
    const auto env = build_pokemon_env(cfg);
    auto h = env.initial_history();
    auto spawn_prob = [&](const game::StateHistory<PokemonState>& hist) {
        // reaction distribution on a scout step gives the analytic law
        auto probe = hist;
        if (probe.size() % 2 == 1) probe.push(probe.current());  // align to a scout turn
        return env.reaction(probe, 0).probability_of(cfg.home_cell);
    };
    double prev = spawn_prob(h);
    rng::Engine rng(4);
    for (int k = 0; k < cfg.edit_budget; ++k) {
        game::step(env, h, game::AgentId{0}, cfg.home_cell + 1, rng);
        const double now = spawn_prob(h);
        CHECK(now >= prev);
        prev = now;
    }
}

TEST_CASE("pokemon: sampled spawn frequencies match the declared weights", "[wild]") {
    PokemonConfig cfg;
    cfg.initial_features = {1, 2, 3, 4};
    cfg.pot_enabled = false;
    const auto env = build_pokemon_env(cfg);
    // sample the reaction on a scout turn 1e5 times; chi-square-style band
    // check at +-0.01 per cell (well beyond the 3.9-sigma band for p=0.4)
    auto h = env.initial_history();
    h.push(h.current());
    rng::Engine rng(12);
    std::map<int, int> counts;
    const int n = 100000;
    const auto dist = env.reaction(h, 0);
    for (int i = 0; i < n; ++i) counts[dist.sample(rng)]++;
    for (int c = 0; c < 4; ++c) {
        const double want = (c + 1) / 10.0;
        CHECK(std::abs(counts[c] / double(n) - want) < 0.01);
    }
}

TEST_CASE("adnauseam: the network locks onto an honest user's dominant interest", "[wild]") {
    AdConfig cfg;
    cfg.relevance = {{1.0, 0.05, 0.05, 0.05}};
    cfg.protectors = {};
    cfg.pot_enabled = false;
    const auto env = build_adnauseam_env(cfg);
    const auto traj = game::simulate(env, 500, 21);
    int matches = 0;
    for (const auto& st : traj.steps) matches += st.state.last_matched ? 1 : 0;
    CHECK(matches / 500.0 > 0.9);
}

TEST_CASE("adnauseam: click-all keeps the protector profile flat", "[wild]") {
    AdConfig cfg;  // user 1 is the protector
    const auto env = build_adnauseam_env(cfg);
    const int steps = 400;  // 200 protector turns
    const auto traj = game::simulate(env, steps, 31);
    const auto& final_state = traj.steps.back().state;
    const auto& tallies = final_state.clicks[1];
    const int own_turns = steps / 2;
    const double expect = own_turns / double(cfg.categories);
    for (const int t : tallies) CHECK(std::abs(t - expect) <= 1.0);
}

TEST_CASE("adnauseam: the protector's profile-uselessness benefit beats the honest user's",
          "[wild]") {
    AdConfig cfg;
    const auto env = build_adnauseam_env(cfg);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto traj = game::simulate(env, 300, seed);
        double honest = 0.0, protector = 0.0;
        for (const auto& st : traj.steps) {
            honest += st.agent_benefits[0];
            protector += st.agent_benefits[1];
        }
        CHECK(protector >= honest);
    }
}

TEST_CASE("every wild environment runs through the generic engine and the POT pays off",
          "[wild]") {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 0; s < 120; ++s) seeds.push_back(s);

    {
        UberConfig cfg;
        auto off = cfg;
        off.pot_enabled = false;
        const int horizon = uber_steps_for_rounds(cfg, 30);
        const auto on = run_wild_experiment(build_uber_env(cfg), true, horizon, seeds);
        const auto base = run_wild_experiment(build_uber_env(off), false, horizon, seeds);
        CHECK(on.mean > base.mean);
    }
    {
        PokemonConfig cfg;
        auto off = cfg;
        off.pot_enabled = false;
        const auto on = run_wild_experiment(build_pokemon_env(cfg), true, 200, seeds);
        const auto base = run_wild_experiment(build_pokemon_env(off), false, 200, seeds);
        CHECK(on.mean > base.mean);
    }
    {
        AdConfig cfg;
        auto off = cfg;
        off.pot_enabled = false;
        const auto on = run_wild_experiment(build_adnauseam_env(cfg), true, 300, seeds);
        const auto base = run_wild_experiment(build_adnauseam_env(off), false, 300, seeds);
        CHECK(on.mean > base.mean);
    }
}

TEST_CASE("wild summaries equal recomputation from stored trajectories", "[wild]") {
    PokemonConfig cfg;
    const auto env = build_pokemon_env(cfg);
    const std::vector<std::uint64_t> seeds = {3, 4, 5};
    const auto summary = run_wild_experiment(env, true, 100, seeds);
    const auto bpop = game::population_value(env);
    double mean = 0.0;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        const auto traj = game::simulate(env, 100, seeds[k]);
        double total = 0.0;
        for (const auto& st : traj.steps) total += bpop(st.state);
        const double per_run = total / 100.0;
        CHECK(per_run == Catch::Approx(summary.per_seed[k]).margin(1e-15));
        mean += per_run;
    }
    CHECK(summary.mean == Catch::Approx(mean / 3.0).margin(1e-15));

    // identical seeds, identical summary
    const auto again = run_wild_experiment(env, true, 100, seeds);
    CHECK(again.per_seed == summary.per_seed);
}
