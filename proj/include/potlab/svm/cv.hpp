#pragma once

#include <tuple>
#include <vector>

#include "potlab/svm/metrics.hpp"
#include "potlab/svm/smo.hpp"

namespace potlab::svm {

// Stratified k-fold assignment: per-class index lists are shuffled by seed
// and dealt round-robin, so per-fold class counts differ from perfect
// proportionality by at most one example.
inline std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& labels,
                                                              int k, std::uint64_t seed) {
    if (k < 2) throw InvalidArgumentError("stratified_folds: need k >= 2");
    for (int attempt = 0; attempt < 5; ++attempt) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] > 0 ? pos : neg).push_back(i);
        rng::Engine rng(seed + static_cast<std::uint64_t>(attempt));
        rng.shuffle(pos);
        rng.shuffle(neg);
        std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < pos.size(); ++i) folds[i % k].push_back(pos[i]);
        for (std::size_t i = 0; i < neg.size(); ++i) folds[i % k].push_back(neg[i]);
        bool ok = true;
        for (const auto& fold : folds) {
            int np = 0, nn = 0;
            for (const auto i : fold) (labels[i] > 0 ? np : nn)++;
            if (np == 0 || nn == 0) ok = false;
        }
        if (ok) return folds;
    }
    throw DegenerateDataError("stratified_folds: could not build folds with both classes");
}

struct GridPoint {
    double C = 1.0;
    double gamma = 0.05;
};

struct CvResult {
    GridPoint best;
    std::vector<double> mean_accuracy;  // aligned with the grid argument
};

// 5-fold (by default) stratified grid search by mean fold accuracy. Ties
// break toward smaller C, then smaller gamma.
inline CvResult cross_validate(const LabeledDataset& train, const std::vector<GridPoint>& grid,
                               int folds, std::uint64_t seed, const TrainConfig& base_cfg = {}) {
    if (grid.empty()) throw InvalidArgumentError("cross_validate: empty grid");
    check_trainable(train);
    const auto fold_sets = stratified_folds(train.y, folds, seed);

    // fold datasets are fixed across the grid; distances are gamma-free so
    // one cache per fold serves every grid point
    struct FoldData {
        LabeledDataset fit, eval;
        KernelCache kernel;  // over fit set, gamma rewritten per grid point
    };
    std::vector<FoldData> fold_data;
    for (const auto& holdout : fold_sets) {
        std::vector<char> in_holdout(train.size(), 0);
        for (const auto i : holdout) in_holdout[i] = 1;
        FoldData fd;
        for (std::size_t i = 0; i < train.size(); ++i)
            (in_holdout[i] ? fd.eval : fd.fit).push(train.x[i], train.y[i]);
        fd.kernel = KernelCache(fd.fit.x, 1.0);
        fold_data.push_back(std::move(fd));
    }

    CvResult result;
    bool first = true;
    double best_acc = 0.0;
    for (const auto& point : grid) {
        TrainConfig cfg = base_cfg;
        cfg.C = point.C;
        cfg.gamma_rbf = point.gamma;
        double acc_sum = 0.0;
        for (auto& fd : fold_data) {
            fd.kernel.set_gamma(point.gamma);
            const auto model = train_smo_cached(fd.fit, fd.kernel, cfg);
            acc_sum += evaluate(model, fd.eval).accuracy;
        }
        const double mean = acc_sum / static_cast<double>(fold_data.size());
        result.mean_accuracy.push_back(mean);
        const bool better =
            first || mean > best_acc ||
            (mean == best_acc && (point.C < result.best.C ||
                                  (point.C == result.best.C && point.gamma < result.best.gamma)));
        if (better) {
            best_acc = mean;
            result.best = point;
            first = false;
        }
    }
    return result;
}

}  // namespace potlab::svm
