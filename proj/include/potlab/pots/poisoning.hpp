#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "potlab/pots/evasion.hpp"
#include "potlab/svm/smo.hpp"

namespace potlab::pots {

struct PoisonOptions {
    int n_protectors = 5;
    int batch_size = 10;    // base records sampled per step
    int max_changes = 3;    // transformation budget for poison candidates
    int retry_limit = 10;   // fresh batches per step before recording a stall
    std::uint64_t seed = 0;
};

struct PoisonRecord {
    ApplicantRecord record;      // label forced to repaid when inserted
    std::size_t base_index = 0;  // dataset row the transformation started from
    int step = 0;                // 1-based protector step that inserted it
};

struct PoisonPlan {
    std::vector<PoisonRecord> records;      // in insertion order
    std::vector<double> target_rates;       // length = n_protectors + 1; [0] = baseline
    std::vector<double> other_rates;        // acceptance over dataset minus group
    std::vector<int> stalled_steps;         // steps that inserted nothing
    std::uint64_t seed = 0;
    long retrain_count = 0;                 // SMO solves spent on candidate evaluation
};

// Greedy probabilistic poisoning. Each protector step samples `batch_size`
// base records uniformly from the dataset minus the target group, enumerates
// their transformations, keeps candidates that (1) the original model
// accepts and (2) strictly raise the target group's acceptance rate after
// retraining on train + plan + candidate (labeled repaid), and inserts the
// candidate with the largest rate increase (ties: smallest candidate index
// in batch-draw x enumeration order). A step that exhausts its retries
// inserts nothing and the curve stays flat; an exhausted FIRST step is a
// hard no-progress error.
inline PoisonPlan greedy_poison(const std::vector<ApplicantRecord>& dataset,
                                const std::vector<std::size_t>& target_indices,
                                const std::vector<ApplicantRecord>& train_records,
                                const Encoder& encoder, const svm::TrainConfig& config,
                                const PoisonOptions& opts) {
    if (opts.n_protectors < 0) throw InvalidArgumentError("greedy_poison: n_protectors must be >= 0");
    if (opts.batch_size < 1) throw InvalidArgumentError("greedy_poison: batch_size must be >= 1");
    if (target_indices.empty()) throw InvalidArgumentError("greedy_poison: empty target group");

    std::vector<char> in_group(dataset.size(), 0);
    std::vector<credit::EncodedVector> group_x;
    for (const auto i : target_indices) {
        in_group[i] = 1;
        group_x.push_back(encoder.encode(dataset[i]));
    }
    std::vector<std::size_t> pool;  // dataset minus the target group
    std::vector<credit::EncodedVector> other_x;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (!in_group[i]) {
            pool.push_back(i);
            other_x.push_back(encoder.encode(dataset[i]));
        }
    }

    svm::LabeledDataset current = svm::encode_dataset(encoder, train_records);
    const svm::SvmModel original = svm::train_smo(current, config);
    svm::SvmModel model = original;

    PoisonPlan plan;
    plan.seed = opts.seed;
    plan.target_rates.push_back(acceptance_rate_encoded(model, group_x));
    plan.other_rates.push_back(acceptance_rate_encoded(model, other_x));

    rng::Engine rng(opts.seed);
    for (int step = 1; step <= opts.n_protectors; ++step) {
        bool inserted = false;
        for (int attempt = 0; attempt < opts.retry_limit && !inserted; ++attempt) {
            const auto batch = rng.sample_without_replacement(pool.size(), (std::size_t)opts.batch_size);

            // collect candidates passing condition (1) against the original model
            struct Candidate {
                TransformedRecord t;
                std::size_t base_index;
                credit::EncodedVector encoded;
            };
            std::vector<Candidate> candidates;
            for (const auto bi : batch) {
                const auto& base = dataset[pool[bi]];
                for (auto& t : credit::transformations(encoder, base, opts.max_changes)) {
                    auto encoded = encoder.encode(t.record);
                    if (original.predict(encoded).label != svm::Decision::accept) continue;
                    candidates.push_back({std::move(t), pool[bi], encoded});
                }
            }
            if (candidates.empty()) continue;

            // one kernel cache per step: fixed block = current training set,
            // last slot rewritten per candidate
            svm::LabeledDataset probe = current;
            probe.push(candidates[0].encoded, -1);  // slot for the candidate (repaid)
            svm::KernelCache kernel(probe.x, config.gamma_rbf);

            // error cache of the warm model over the fixed block; only the
            // candidate's own entry differs between retrains
            std::vector<double> base_errors(probe.size());
            for (std::size_t i = 0; i < current.size(); ++i)
                base_errors[i] = model.margin(current.x[i]) - current.y[i];

            const double current_rate = plan.target_rates.back();
            double best_rate = current_rate;
            std::ptrdiff_t best_index = -1;
            svm::SvmModel best_model;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                // a candidate already satisfying its KKT condition at alpha=0
                // leaves the converged solution - and the rate - unchanged
                const double m = model.margin(candidates[c].encoded);
                if (-m >= 1.0 - config.tol) continue;
                probe.x.back() = candidates[c].encoded;
                kernel.replace_last(current.x, candidates[c].encoded);
                base_errors.back() = m - (-1.0);  // E = f - y for the repaid-labeled candidate
                const auto retrained =
                    svm::train_smo_cached(probe, kernel, config, &model, base_errors);
                ++plan.retrain_count;
                const double rate = acceptance_rate_encoded(retrained, group_x);
                if (rate > best_rate) {  // strict increase and strict improvement: first max wins ties
                    best_rate = rate;
                    best_index = static_cast<std::ptrdiff_t>(c);
                    best_model = retrained;
                }
            }
            if (best_index < 0) continue;

            const auto& winner = candidates[static_cast<std::size_t>(best_index)];
            PoisonRecord rec;
            rec.record = winner.t.record;
            rec.record.label = credit::Label::repaid;
            rec.base_index = winner.base_index;
            rec.step = step;
            plan.records.push_back(rec);
            current.push(winner.encoded, -1);
            model = best_model;
            plan.target_rates.push_back(best_rate);
            plan.other_rates.push_back(acceptance_rate_encoded(model, other_x));
            inserted = true;
        }
        if (!inserted) {
            if (step == 1)
                throw NoProgressError("greedy_poison: no qualifying candidate after " +
                                      std::to_string(opts.retry_limit) + " batches at step 1");
            plan.stalled_steps.push_back(step);
            plan.target_rates.push_back(plan.target_rates.back());
            plan.other_rates.push_back(plan.other_rates.back());
        }
    }
    return plan;
}

struct AcceptanceCurve {
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<double>> target_per_seed;  // [seed][protectors 0..n]
    std::vector<std::vector<double>> other_per_seed;
    std::vector<double> target_mean;
    std::vector<double> other_mean;
    std::vector<PoisonPlan> plans;
    std::vector<std::string> failures;  // per-seed no-progress reports
};

// Runs greedy_poison once per seed and aggregates mean curves. A seed that
// makes no progress is recorded and skipped; it does not abort the others.
inline AcceptanceCurve poison_experiment(const std::vector<ApplicantRecord>& dataset,
                                         const std::vector<std::size_t>& target_indices,
                                         const std::vector<ApplicantRecord>& train_records,
                                         const Encoder& encoder, const svm::TrainConfig& config,
                                         PoisonOptions opts,
                                         const std::vector<std::uint64_t>& seeds) {
    AcceptanceCurve curve;
    for (const auto seed : seeds) {
        opts.seed = seed;
        try {
            auto plan = greedy_poison(dataset, target_indices, train_records, encoder, config, opts);
            curve.seeds.push_back(seed);
            curve.target_per_seed.push_back(plan.target_rates);
            curve.other_per_seed.push_back(plan.other_rates);
            curve.plans.push_back(std::move(plan));
        } catch (const NoProgressError& e) {
            curve.failures.push_back("seed " + std::to_string(seed) + ": " + e.what());
        }
    }
    if (!curve.target_per_seed.empty()) {
        const std::size_t len = curve.target_per_seed[0].size();
        curve.target_mean.assign(len, 0.0);
        curve.other_mean.assign(len, 0.0);
        for (std::size_t s = 0; s < curve.target_per_seed.size(); ++s) {
            for (std::size_t k = 0; k < len; ++k) {
                curve.target_mean[k] += curve.target_per_seed[s][k];
                curve.other_mean[k] += curve.other_per_seed[s][k];
            }
        }
        for (std::size_t k = 0; k < len; ++k) {
            curve.target_mean[k] /= static_cast<double>(curve.target_per_seed.size());
            curve.other_mean[k] /= static_cast<double>(curve.other_per_seed.size());
        }
    }
    return curve;
}

}  // namespace potlab::pots
