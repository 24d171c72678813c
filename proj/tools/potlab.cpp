// potlab command-line harness: prep | train | evade | poison | wild | value
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "potlab/credit/dataset.hpp"
#include "potlab/credit/target.hpp"
#include "potlab/io/config.hpp"
#include "potlab/io/csvout.hpp"
#include "potlab/io/game_config.hpp"
#include "potlab/io/manifest.hpp"
#include "potlab/pots/evasion.hpp"
#include "potlab/pots/poisoning.hpp"
#include "potlab/svm/cv.hpp"
#include "potlab/svm/metrics.hpp"
#include "potlab/svm/model_io.hpp"
#include "potlab/wild/adnauseam.hpp"
#include "potlab/wild/experiment.hpp"
#include "potlab/wild/pokemon.hpp"
#include "potlab/wild/uber.hpp"

namespace {

using namespace potlab;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<long long> seed_override;
};

struct LoadedDataset {
    std::vector<credit::ApplicantRecord> records;
    std::string dataset_hash;
};

LoadedDataset load_configured_dataset(const io::Config& cfg) {
    const auto path = cfg.get_string("dataset", "path");
    std::map<std::string, std::string> mapping;
    if (cfg.has("dataset", "mapping"))
        mapping = credit::load_schema_mapping(cfg.get_string("dataset", "mapping"));
    LoadedDataset out;
    out.records = credit::load_dataset(path, mapping);
    out.dataset_hash = io::hash_file(path);
    return out;
}

std::uint64_t require_seed(const io::Config& cfg, const std::string& section,
                           const std::string& key, const std::optional<long long>& override) {
    if (override) return static_cast<std::uint64_t>(*override);
    if (!cfg.has(section, key))
        throw ConfigError("missing [" + section + "] " + key +
                          " (all seeds must be explicit; there are no wall-clock defaults)");
    return static_cast<std::uint64_t>(cfg.get_int(section, key));
}

svm::TrainConfig base_train_config(const io::Config& cfg) {
    svm::TrainConfig base;
    base.tol = cfg.has("train", "smo_tol") ? cfg.get_double("train", "smo_tol") : 1e-3;
    base.max_passes = static_cast<int>(cfg.get_int_or("train", "smo_max_passes", 50));
    base.seed = static_cast<std::uint64_t>(cfg.get_int_or("train", "smo_seed", 3));
    return base;
}

std::vector<svm::GridPoint> configured_grid(const io::Config& cfg, int dimension) {
    std::vector<double> cs = {0.1, 1.0, 10.0, 100.0};
    if (cfg.has("train", "grid_c")) cs = cfg.get_double_list("train", "grid_c");
    std::vector<double> gammas;
    if (cfg.has("train", "grid_gamma")) {
        for (const auto& tok : cfg.get_list("train", "grid_gamma")) {
            if (tok == "1/d")
                gammas.push_back(1.0 / dimension);
            else
                gammas.push_back(std::stod(tok));
        }
    } else {
        gammas = {0.01, 0.05, 1.0 / dimension, 0.5};
    }
    std::vector<svm::GridPoint> grid;
    for (const double C : cs)
        for (const double g : gammas) grid.push_back({C, g});
    return grid;
}

std::string encoder_to_json(const credit::Encoder& enc) {
    nlohmann::json j;
    j["format"] = "potlab-encoder-v1";
    j["dimension"] = enc.dimension();
    for (const auto& g : enc.groups())
        j["groups"].push_back({{"name", g.name}, {"offset", g.offset}, {"size", g.size}});
    j["age_edges"] = enc.age_bins().edges();
    j["amount_edges"] = enc.amount_bins().edges();
    j["duration_edges"] = enc.duration_bins().edges();
    for (int b = 0; b < 5; ++b) {
        j["amount_representative"].push_back(enc.amount_representative(b));
        j["duration_representative"].push_back(enc.duration_representative(b));
        j["amount_witness"].push_back(enc.amount_witness(b));
        j["duration_witness"].push_back(enc.duration_witness(b));
    }
    j["purpose_table"] = enc.purpose_table();
    return j.dump(2) + "\n";
}

std::string encoded_csv(const svm::LabeledDataset& data, const std::vector<std::size_t>& row_ids) {
    io::CsvWriter csv({"row_id", "bits", "label"});
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::string bits;
        for (int b = 0; b < data.x[i].dimension(); ++b) bits += data.x[i].bit(b) ? '1' : '0';
        csv.row({std::to_string(row_ids[i]), bits, data.y[i] > 0 ? "default" : "repaid"});
    }
    return csv.content();
}

std::string raw_csv(const std::vector<credit::ApplicantRecord>& records,
                    const std::vector<std::size_t>& row_ids) {
    io::CsvWriter csv({"row_id", "age", "sex", "job", "housing", "saving_account",
                       "checking_account", "credit_amount", "duration", "purpose", "label"});
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        csv.row({std::to_string(row_ids[i]), std::to_string(r.age), r.sex, r.job, r.housing,
                 r.saving_account, r.checking_account, io::format_double(r.credit_amount),
                 std::to_string(r.duration), r.purpose, credit::to_string(r.label)});
    }
    return csv.content();
}

// shared pipeline stage: split + encoder for the configured split seed
struct Prepared {
    credit::DatasetSplit split;
    credit::Encoder encoder;
    svm::LabeledDataset train, test;
    std::uint64_t split_seed = 0;
};

Prepared prepare(const LoadedDataset& data, const io::Config& cfg,
                 const std::optional<long long>& seed_override, bool allow_override) {
    Prepared p;
    p.split_seed = require_seed(cfg, "prep", "split_seed", allow_override ? seed_override : std::nullopt);
    p.split = credit::split_dataset(data.records, p.split_seed);
    p.encoder = credit::Encoder::fit(p.split.train);
    p.train = svm::encode_dataset(p.encoder, p.split.train);
    p.test = svm::encode_dataset(p.encoder, p.split.test);
    return p;
}

void require_file(const std::string& path, const std::string& hint) {
    if (!std::filesystem::exists(path))
        throw IoError("required file missing: " + path + " (" + hint + ")");
}

int cmd_prep(const CommonArgs& args) {
    const auto cfg = io::Config::parse_file(args.config_path);
    io::RunManifest manifest("prep", io::hash_file(args.config_path), args.out_dir);
    std::filesystem::create_directories(args.out_dir);
    manifest.write_initial();
    const auto data = load_configured_dataset(cfg);
    manifest.set("dataset_hash", data.dataset_hash);
    const auto p = prepare(data, cfg, args.seed_override, true);
    manifest.set("split_seed", p.split_seed);
    manifest.set("encoder_dimension", p.encoder.dimension());
    manifest.stage_done("prepare");

    io::write_file_atomic(args.out_dir + "/train.csv", raw_csv(p.split.train, p.split.train_index));
    io::write_file_atomic(args.out_dir + "/test.csv", raw_csv(p.split.test, p.split.test_index));
    io::write_file_atomic(args.out_dir + "/train_encoded.csv",
                          encoded_csv(p.train, p.split.train_index));
    io::write_file_atomic(args.out_dir + "/test_encoded.csv",
                          encoded_csv(p.test, p.split.test_index));
    io::write_file_atomic(args.out_dir + "/encoder.json", encoder_to_json(p.encoder));
    manifest.stage_done("write");
    manifest.finalize();
    std::printf("prep: wrote train 900 / test 100 (dimension %d) to %s\n", p.encoder.dimension(),
                args.out_dir.c_str());
    return 0;
}

int cmd_train(const CommonArgs& args) {
    const auto cfg = io::Config::parse_file(args.config_path);
    io::RunManifest manifest("train", io::hash_file(args.config_path), args.out_dir);
    std::filesystem::create_directories(args.out_dir);
    manifest.write_initial();
    require_file(args.out_dir + "/encoder.json", "run `potlab prep` first");
    const auto data = load_configured_dataset(cfg);
    manifest.set("dataset_hash", data.dataset_hash);
    const auto p = prepare(data, cfg, std::nullopt, false);
    manifest.stage_done("prepare");

    const auto grid = configured_grid(cfg, p.encoder.dimension());
    const auto base = base_train_config(cfg);
    const auto cv_seed = args.seed_override
                             ? static_cast<std::uint64_t>(*args.seed_override)
                             : static_cast<std::uint64_t>(
                                   cfg.get_int_or("train", "cv_seed",
                                                  static_cast<long long>(p.split_seed)));
    const int folds = static_cast<int>(cfg.get_int_or("train", "folds", 5));
    const auto cv = svm::cross_validate(p.train, grid, folds, cv_seed, base);
    manifest.set("cv_seed", cv_seed);
    manifest.set("chosen_C", cv.best.C);
    manifest.set("chosen_gamma", cv.best.gamma);
    manifest.stage_done("cross_validate");

    svm::TrainConfig final_cfg = base;
    final_cfg.C = cv.best.C;
    final_cfg.gamma_rbf = cv.best.gamma;
    const auto model = svm::train_smo(p.train, final_cfg);
    const auto metrics = svm::evaluate(model, p.test);
    manifest.stage_done("train");

    svm::save_model(model, data.dataset_hash, args.out_dir + "/model.json");
    nlohmann::json mj;
    mj["accuracy"] = metrics.accuracy;
    mj["precision"] = metrics.precision;
    mj["recall"] = metrics.recall;
    mj["confusion"] = {{"tp", metrics.tp}, {"fp", metrics.fp}, {"fn", metrics.fn}, {"tn", metrics.tn}};
    mj["positive_class"] = "accept (repaid)";
    mj["chosen_C"] = cv.best.C;
    mj["chosen_gamma"] = cv.best.gamma;
    nlohmann::json grid_json = nlohmann::json::array();
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid_json.push_back({{"C", grid[i].C}, {"gamma", grid[i].gamma},
                             {"mean_fold_accuracy", cv.mean_accuracy[i]}});
    mj["grid"] = grid_json;
    io::write_file_atomic(args.out_dir + "/metrics.json", mj.dump(2) + "\n");
    manifest.stage_done("write");
    manifest.finalize();
    std::printf("train: C=%g gamma=%g accuracy=%.3f precision=%.3f recall=%.3f\n", cv.best.C,
                cv.best.gamma, metrics.accuracy, metrics.precision, metrics.recall);
    return 0;
}

int cmd_evade(const CommonArgs& args) {
    const auto cfg = io::Config::parse_file(args.config_path);
    io::RunManifest manifest("evade", io::hash_file(args.config_path), args.out_dir);
    std::filesystem::create_directories(args.out_dir);
    manifest.write_initial();
    require_file(args.out_dir + "/model.json", "run `potlab train` first");
    const auto data = load_configured_dataset(cfg);
    const auto p = prepare(data, cfg, std::nullopt, false);
    const auto model = svm::load_model(args.out_dir + "/model.json");
    manifest.set("dataset_hash", data.dataset_hash);
    manifest.stage_done("prepare");

    std::vector<int> budgets = {1, 2, 3};
    if (cfg.has("evade", "budgets")) {
        budgets.clear();
        for (const auto b : cfg.get_int_list("evade", "budgets")) budgets.push_back(static_cast<int>(b));
    }

    // denied test records only; others are reported implicitly with zero gain
    std::vector<credit::ApplicantRecord> denied;
    std::vector<std::size_t> denied_ids;
    for (std::size_t i = 0; i < p.split.test.size(); ++i) {
        if (model.predict(p.test.x[i]).label == svm::Decision::deny) {
            denied.push_back(p.split.test[i]);
            denied_ids.push_back(p.split.test_index[i]);
        }
    }
    const auto rows = pots::evade_cohort(model, p.encoder, denied, denied_ids, budgets);
    manifest.set("denied_records", denied.size());
    manifest.stage_done("search");

    io::CsvWriter csv({"record_id", "budget", "gain", "features_changed", "accepted"});
    for (const auto& row : rows)
        csv.row({std::to_string(row.record_id), std::to_string(row.budget),
                 io::format_double(row.gain), std::to_string(row.features_changed),
                 row.accepted ? "1" : "0"});
    // quartile summary rows appended per budget (record_id = summary:qK)
    for (const int budget : budgets) {
        std::vector<double> gains;
        for (const auto& row : rows)
            if (row.budget == budget) gains.push_back(row.gain);
        std::sort(gains.begin(), gains.end());
        if (gains.empty()) continue;
        for (const int q : {1, 2, 3}) {
            const double v = credit::QuantileBinner::quantile_sorted(gains, q / 4.0);
            csv.row({"summary:q" + std::to_string(q), std::to_string(budget), io::format_double(v),
                     "0", "1"});
        }
    }
    csv.save(args.out_dir + "/evasion_gains.csv");
    manifest.stage_done("write");
    manifest.finalize();
    std::printf("evade: %zu denied records, budgets", denied.size());
    for (const int b : budgets) std::printf(" %d", b);
    std::printf(" -> %s/evasion_gains.csv\n", args.out_dir.c_str());
    return 0;
}

int cmd_poison(const CommonArgs& args) {
    const auto cfg = io::Config::parse_file(args.config_path);
    io::RunManifest manifest("poison", io::hash_file(args.config_path), args.out_dir);
    std::filesystem::create_directories(args.out_dir);
    manifest.write_initial();
    require_file(args.out_dir + "/model.json", "run `potlab train` first");
    const auto data = load_configured_dataset(cfg);
    const auto p = prepare(data, cfg, std::nullopt, false);
    const auto model = svm::load_model(args.out_dir + "/model.json");
    manifest.set("dataset_hash", data.dataset_hash);

    const auto group = credit::select_target_group(data.records, model, p.encoder);
    if (group.members.empty())
        std::fprintf(stderr, "warning: target group is empty for this model\n");
    manifest.set("target_group_size", group.members.size());
    manifest.stage_done("prepare");

    pots::PoisonOptions opts;
    opts.n_protectors = static_cast<int>(cfg.get_int_or("poison", "protectors", 5));
    opts.batch_size = static_cast<int>(cfg.get_int_or("poison", "batch_size", 10));
    opts.max_changes = static_cast<int>(cfg.get_int_or("poison", "max_changes", 3));
    opts.retry_limit = static_cast<int>(cfg.get_int_or("poison", "retry_limit", 10));
    std::vector<std::uint64_t> seeds;
    if (args.seed_override) {
        const auto n = cfg.has("poison", "seeds")
                           ? cfg.get_int_list("poison", "seeds").size()
                           : std::size_t{10};
        for (std::size_t i = 0; i < n; ++i)
            seeds.push_back(static_cast<std::uint64_t>(*args.seed_override) + i);
    } else {
        if (!cfg.has("poison", "seeds"))
            throw ConfigError("missing [poison] seeds (explicit seed list required)");
        for (const auto s : cfg.get_int_list("poison", "seeds"))
            seeds.push_back(static_cast<std::uint64_t>(s));
    }

    const auto train_cfg = model.config();
    manifest.set("model_C", train_cfg.C);
    manifest.set("model_gamma", train_cfg.gamma_rbf);
    manifest.set("seeds", seeds);
    const auto curve = pots::poison_experiment(data.records, group.indices, p.split.train,
                                               p.encoder, train_cfg, opts, seeds);
    manifest.stage_done("poison");

    long total_retrains = 0;
    io::CsvWriter csv({"seed", "protectors", "target_rate", "other_rate"});
    for (std::size_t s = 0; s < curve.seeds.size(); ++s) {
        for (std::size_t k = 0; k < curve.target_per_seed[s].size(); ++k)
            csv.row({std::to_string(curve.seeds[s]), std::to_string(k),
                     io::format_double(curve.target_per_seed[s][k]),
                     io::format_double(curve.other_per_seed[s][k])});
    }
    for (std::size_t k = 0; k < curve.target_mean.size(); ++k)
        csv.row({"mean", std::to_string(k), io::format_double(curve.target_mean[k]),
                 io::format_double(curve.other_mean[k])});
    csv.save(args.out_dir + "/poison_curve.csv");

    for (const auto& plan : curve.plans) {
        total_retrains += plan.retrain_count;
        nlohmann::json pj;
        pj["seed"] = plan.seed;
        pj["target_rates"] = plan.target_rates;
        pj["other_rates"] = plan.other_rates;
        pj["stalled_steps"] = plan.stalled_steps;
        pj["retrain_count"] = plan.retrain_count;
        nlohmann::json recs = nlohmann::json::array();
        for (const auto& rec : plan.records) {
            recs.push_back({{"step", rec.step},
                            {"base_row", rec.base_index},
                            {"age", rec.record.age},
                            {"sex", rec.record.sex},
                            {"job", rec.record.job},
                            {"housing", rec.record.housing},
                            {"saving_account", rec.record.saving_account},
                            {"checking_account", rec.record.checking_account},
                            {"credit_amount", rec.record.credit_amount},
                            {"duration", rec.record.duration},
                            {"purpose", rec.record.purpose},
                            {"label", credit::to_string(rec.record.label)}});
        }
        pj["records"] = recs;
        io::write_file_atomic(args.out_dir + "/poison_plan_" + std::to_string(plan.seed) + ".json",
                              pj.dump(2) + "\n");
    }
    for (const auto& failure : curve.failures) std::fprintf(stderr, "poison: %s\n", failure.c_str());
    manifest.set("retrain_count", total_retrains);
    manifest.set("seeds_completed", curve.seeds.size());
    manifest.set("seeds_failed", curve.failures.size());
    manifest.stage_done("write");
    manifest.finalize();
    if (!curve.target_mean.empty())
        std::printf("poison: target rate %.3f -> %.3f (mean over %zu seeds) -> %s/poison_curve.csv\n",
                    curve.target_mean.front(), curve.target_mean.back(), curve.seeds.size(),
                    args.out_dir.c_str());
    return 0;
}

int cmd_wild(const CommonArgs& args) {
    const auto cfg = io::Config::parse_file(args.config_path);
    const auto env_name = cfg.get_string("wild", "env");
    if (env_name != "uber" && env_name != "pokemon" && env_name != "adnauseam")
        throw ConfigError("[wild] env must be one of {uber, pokemon, adnauseam}, got `" + env_name +
                          "`");
    io::RunManifest manifest("wild", io::hash_file(args.config_path), args.out_dir);
    std::filesystem::create_directories(args.out_dir);
    manifest.write_initial();

    const int runs = static_cast<int>(cfg.get_int_or("wild", "runs", 200));
    const auto seed_base = require_seed(cfg, "wild", "seed_base", args.seed_override);
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < runs; ++i) seeds.push_back(seed_base + static_cast<std::uint64_t>(i));

    wild::WildSummary on, off;
    int horizon = 0;
    if (env_name == "uber") {
        wild::UberConfig uc;
        uc.drivers = static_cast<int>(cfg.get_int_or("uber", "drivers", uc.drivers));
        if (cfg.has("uber", "protectors")) {
            uc.protectors.clear();
            for (const auto v : cfg.get_int_list("uber", "protectors"))
                uc.protectors.push_back(static_cast<int>(v));
        }
        if (cfg.has("uber", "arrivals")) {
            uc.arrivals.clear();
            for (const auto& entry : cfg.get_list("uber", "arrivals")) {
                const auto colon = entry.find(':');
                if (colon == std::string::npos)
                    throw ConfigError("[uber] arrivals entries must be count:prob");
                uc.arrivals.emplace_back(std::stoi(entry.substr(0, colon)),
                                         std::stod(entry.substr(colon + 1)));
            }
        }
        if (cfg.has("uber", "base_price")) uc.base_price = cfg.get_double("uber", "base_price");
        if (cfg.has("uber", "surge_multiplier"))
            uc.surge_multiplier = cfg.get_double("uber", "surge_multiplier");
        if (cfg.has("uber", "surge_threshold"))
            uc.surge_threshold = cfg.get_double("uber", "surge_threshold");
        uc.off_start_round = static_cast<int>(cfg.get_int_or("uber", "off_start_round", uc.off_start_round));
        uc.off_duration_rounds =
            static_cast<int>(cfg.get_int_or("uber", "off_duration_rounds", uc.off_duration_rounds));
        const int rounds = static_cast<int>(cfg.get_int_or("wild", "rounds", 30));
        horizon = wild::uber_steps_for_rounds(uc, rounds);
        uc.pot_enabled = true;
        on = wild::run_wild_experiment(wild::build_uber_env(uc), true, horizon, seeds);
        uc.pot_enabled = false;
        off = wild::run_wild_experiment(wild::build_uber_env(uc), false, horizon, seeds);
    } else if (env_name == "pokemon") {
        wild::PokemonConfig pc;
        pc.cells = static_cast<int>(cfg.get_int_or("pokemon", "cells", pc.cells));
        if (cfg.has("pokemon", "initial_features")) {
            pc.initial_features.clear();
            for (const auto v : cfg.get_int_list("pokemon", "initial_features"))
                pc.initial_features.push_back(static_cast<int>(v));
        }
        pc.home_cell = static_cast<int>(cfg.get_int_or("pokemon", "home_cell", pc.home_cell));
        pc.edit_budget = static_cast<int>(cfg.get_int_or("pokemon", "edit_budget", pc.edit_budget));
        horizon = static_cast<int>(cfg.get_int_or("wild", "steps", 200));
        pc.pot_enabled = true;
        on = wild::run_wild_experiment(wild::build_pokemon_env(pc), true, horizon, seeds);
        pc.pot_enabled = false;
        off = wild::run_wild_experiment(wild::build_pokemon_env(pc), false, horizon, seeds);
    } else {
        wild::AdConfig ac;
        ac.categories = static_cast<int>(cfg.get_int_or("adnauseam", "categories", ac.categories));
        if (cfg.has("adnauseam", "users")) {
            ac.relevance.clear();
            const int users = static_cast<int>(cfg.get_int("adnauseam", "users"));
            for (int u = 0; u < users; ++u)
                ac.relevance.push_back(
                    cfg.get_double_list("adnauseam", "relevance." + std::to_string(u)));
        }
        if (cfg.has("adnauseam", "protectors")) {
            ac.protectors.clear();
            for (const auto v : cfg.get_int_list("adnauseam", "protectors"))
                ac.protectors.push_back(static_cast<int>(v));
        }
        horizon = static_cast<int>(cfg.get_int_or("wild", "steps", 300));
        ac.pot_enabled = true;
        on = wild::run_wild_experiment(wild::build_adnauseam_env(ac), true, horizon, seeds);
        ac.pot_enabled = false;
        off = wild::run_wild_experiment(wild::build_adnauseam_env(ac), false, horizon, seeds);
    }
    manifest.set("env", env_name);
    manifest.set("horizon", horizon);
    manifest.set("runs", runs);
    manifest.stage_done("simulate");

    io::CsvWriter csv({"env", "with_pot", "seed", "mean_bpop"});
    for (std::size_t i = 0; i < on.per_seed.size(); ++i)
        csv.row({env_name, "1", std::to_string(on.seeds[i]), io::format_double(on.per_seed[i])});
    for (std::size_t i = 0; i < off.per_seed.size(); ++i)
        csv.row({env_name, "0", std::to_string(off.seeds[i]), io::format_double(off.per_seed[i])});
    csv.row({env_name, "1", "mean", io::format_double(on.mean)});
    csv.row({env_name, "0", "mean", io::format_double(off.mean)});
    csv.save(args.out_dir + "/wild_summary.csv");
    manifest.stage_done("write");
    manifest.finalize();
    std::printf("wild %s: mean population benefit %.4f with POT vs %.4f without (%d runs) -> "
                "%s/wild_summary.csv\n",
                env_name.c_str(), on.mean, off.mean, runs, args.out_dir.c_str());
    return 0;
}

int cmd_value(const CommonArgs& args) {
    const auto cfg = io::Config::parse_file(args.config_path);
    io::RunManifest manifest("value", io::hash_file(args.config_path), args.out_dir);
    std::filesystem::create_directories(args.out_dir);
    manifest.write_initial();
    auto game = io::load_config_game(cfg);
    if (args.seed_override) game.mc_seed = static_cast<std::uint64_t>(*args.seed_override);

    const auto history = game.spec.initial_history();
    nlohmann::json report;
    report["gamma"] = game.params.gamma;
    report["horizon"] = game.params.horizon;
    report["start_time"] = game.params.start_time;

    const double v_system = game::discounted_value_exact(game.spec, game::system_value(game.spec),
                                                         history, game.params);
    const auto mc = game::discounted_value_mc(game.spec, game::system_value(game.spec), history,
                                              game.params, game.mc_samples, game.mc_seed);
    const double v_pop = game::discounted_value_exact(game.spec, game::population_value(game.spec),
                                                      history, game.params);
    report["exact"] = {{"system", v_system}, {"population", v_pop}};
    for (int a = 0; a < game.spec.n_agents; ++a)
        report["exact"]["agent_" + std::to_string(a)] = game::discounted_value_exact(
            game.spec, game::agent_value(game.spec, game::AgentId{a}), history, game.params);
    report["monte_carlo"] = {{"mean", mc.mean}, {"std_error", mc.std_error}, {"samples", mc.samples},
                             {"seed", game.mc_seed}};
    std::printf("value: exact V_system = %.6f, monte carlo = %.6f +- %.6f (%ld samples)\n",
                v_system, mc.mean, mc.std_error, mc.samples);
    std::printf("value: exact V_population = %.6f\n", v_pop);
    manifest.stage_done("evaluate");

    if (!game.reaction_candidates.empty()) {
        const auto best = game::best_reaction_policy(
            game.spec,
            std::span<const game::ReactionPolicy<int, int, int>>(game.reaction_candidates), history,
            game.params);
        report["best_reaction_policy"] = {
            {"name", game.reaction_candidate_names[best.index]},
            {"index", best.index},
            {"value", best.value},
            {"all_values", best.all_values}};
        std::printf("value: best OPT reaction policy = %s (V_o = %.6f)\n",
                    game.reaction_candidate_names[best.index].c_str(), best.value);
    }
    if (!game.protector_candidates.empty()) {
        const auto best = game::best_protector_policy(
            game.spec, game::AgentId{game.protector},
            std::span<const game::AgentPolicy<int, int>>(game.protector_candidates), history,
            game.params);
        report["best_protector_policy"] = {
            {"name", game.protector_candidate_names[best.index]},
            {"index", best.index},
            {"value", best.value},
            {"all_values", best.all_values}};
        std::printf("value: best POT policy = %s (V_pop = %.6f)\n",
                    game.protector_candidate_names[best.index].c_str(), best.value);
    }
    io::write_file_atomic(args.out_dir + "/value_report.json", report.dump(2) + "\n");
    manifest.stage_done("write");
    manifest.finalize();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"potlab: optimization-system simulation and protective-strategy toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    const auto add_common = [&args](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "configuration file")->required();
        sub->add_option("--out", args.out_dir, "output directory (default: out)");
        sub->add_option("--seed-override", args.seed_override,
                        "override the command's primary seed");
    };

    int (*handler)(const CommonArgs&) = nullptr;
    for (const auto& [name, desc, fn] :
         {std::tuple{"prep", "load, split and encode the loan dataset", &cmd_prep},
          std::tuple{"train", "cross-validate and train the classifier", &cmd_train},
          std::tuple{"evade", "per-record evasion search over the denied test set", &cmd_evade},
          std::tuple{"poison", "greedy poisoning experiment over the configured seeds", &cmd_poison},
          std::tuple{"wild", "run a wild-environment POT comparison", &cmd_wild},
          std::tuple{"value", "exact and Monte Carlo values for a config-defined game", &cmd_value}}) {
        auto* sub = app.add_subcommand(name, desc);
        add_common(sub);
        sub->callback([&handler, fn]() { handler = fn; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors -> exit code 1
    }

    try {
        return handler(args);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const InvalidArgumentError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const EncodingError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
