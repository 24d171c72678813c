#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "potlab/common/rng.hpp"
#include "potlab/credit/record.hpp"
#include "potlab/svm/kernel.hpp"

namespace potlab::svm {

// Labels: +1 = default (deny if predicted), -1 = repaid (accept).
struct LabeledDataset {
    std::vector<EncodedVector> x;
    std::vector<int> y;

    std::size_t size() const { return x.size(); }

    void push(EncodedVector v, int label) {
        x.push_back(v);
        y.push_back(label);
    }
};

inline LabeledDataset encode_dataset(const credit::Encoder& encoder,
                                     const std::vector<credit::ApplicantRecord>& records) {
    LabeledDataset d;
    d.x.reserve(records.size());
    d.y.reserve(records.size());
    for (const auto& r : records)
        d.push(encoder.encode(r), r.label == credit::Label::default_ ? +1 : -1);
    return d;
}

struct TrainConfig {
    double C = 1.0;
    double gamma_rbf = 0.05;
    double tol = 1e-3;     // KKT tolerance
    int max_passes = 50;   // cap on examine-all sweeps
    std::uint64_t seed = 0;
};

enum class Decision { accept, deny };

struct Prediction {
    Decision label = Decision::accept;
    double margin = 0.0;  // sum_i alpha_i y_i K(x_i, x) + b; deny iff margin > 0
};

class SvmModel {
public:
    SvmModel() = default;

    SvmModel(TrainConfig config, std::vector<int> sv_index, std::vector<EncodedVector> sv_x,
             std::vector<double> sv_coeff, double bias, int dim)
        : config_(config),
          sv_index_(std::move(sv_index)),
          sv_x_(std::move(sv_x)),
          sv_coeff_(std::move(sv_coeff)),
          bias_(bias),
          dim_(dim) {
        rebuild_lut();
    }

    const TrainConfig& config() const { return config_; }
    const std::vector<int>& support_indices() const { return sv_index_; }
    const std::vector<EncodedVector>& support_vectors() const { return sv_x_; }
    const std::vector<double>& dual_coefficients() const { return sv_coeff_; }  // alpha_i * y_i
    double bias() const { return bias_; }
    int dimension() const { return dim_; }

    double margin(const EncodedVector& x) const {
        if (x.dimension() != dim_)
            throw InvalidArgumentError("predict: input dimension " + std::to_string(x.dimension()) +
                                       " does not match model dimension " + std::to_string(dim_));
        double m = bias_;
        for (std::size_t i = 0; i < sv_x_.size(); ++i)
            m += sv_coeff_[i] * lut_[sv_x_[i].squared_distance_to(x)];
        return m;
    }

    Prediction predict(const EncodedVector& x) const {
        const double m = margin(x);
        return {m > 0.0 ? Decision::deny : Decision::accept, m};
    }

private:
    void rebuild_lut() {
        for (int d = 0; d <= 64; ++d)
            lut_[d] = std::exp(-config_.gamma_rbf * static_cast<double>(d));
    }

    TrainConfig config_;
    std::vector<int> sv_index_;          // positions in the training dataset
    std::vector<EncodedVector> sv_x_;
    std::vector<double> sv_coeff_;       // alpha_i * y_i
    double bias_ = 0.0;
    int dim_ = 0;
    double lut_[65] = {};
};

// Dual objective W(alpha) = sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
inline double dual_objective(const std::vector<double>& alpha, const std::vector<int>& y,
                             const KernelCache& kernel) {
    long double lin = 0.0L, quad = 0.0L;
    const std::size_t n = alpha.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0) continue;
        lin += alpha[i];
        const double ayi = alpha[i] * y[i];
        long double row = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0.0) continue;
            row += alpha[j] * y[j] * kernel.at(i, j);
        }
        quad += ayi * row;
    }
    return static_cast<double>(lin - 0.5L * quad);
}

namespace detail {

// Platt-style SMO working set. Keeps a full error cache (E_i = f(x_i) - y_i)
// so KKT checks are O(1) and each pair update costs O(n).
class SmoSolver {
public:
    SmoSolver(const LabeledDataset& data, const KernelCache& kernel, const TrainConfig& cfg,
              std::vector<double> warm_alpha, double warm_bias,
              std::vector<double> warm_errors = {})
        : data_(data),
          kernel_(kernel),
          cfg_(cfg),
          n_(data.size()),
          alpha_(std::move(warm_alpha)),
          b_(warm_bias),
          rng_(cfg.seed) {
        if (warm_errors.size() == n_) {
            errors_ = std::move(warm_errors);
        } else {
            errors_.resize(n_);
            for (std::size_t m = 0; m < n_; ++m) errors_[m] = f(m) - data_.y[m];
        }
    }

    void solve() {
        double prev_obj = dual_objective(alpha_, data_.y, kernel_);
        int examine_all_passes = 0;
        bool examine_all = true;
        std::size_t num_changed = 1;
        while (num_changed > 0 || examine_all) {
            num_changed = 0;
            if (examine_all) {
                if (++examine_all_passes > cfg_.max_passes)
                    throw NumericError("SMO: exceeded max_passes examine-all sweeps without convergence");
                for (std::size_t i = 0; i < n_; ++i) num_changed += examine(i);
                if (num_changed > 0) {
                    const double obj = dual_objective(alpha_, data_.y, kernel_);
                    if (obj < prev_obj - 1e-9)
                        throw NumericError("SMO: dual objective decreased by " +
                                           std::to_string(prev_obj - obj));
                    prev_obj = obj;
                }
            } else {
                for (std::size_t i = 0; i < n_; ++i)
                    if (alpha_[i] > 0.0 && alpha_[i] < cfg_.C) num_changed += examine(i);
            }
            if (examine_all)
                examine_all = false;
            else if (num_changed == 0)
                examine_all = true;
        }
    }

    const std::vector<double>& alpha() const { return alpha_; }
    double bias() const { return b_; }

private:
    double f(std::size_t m) const {
        double v = b_;
        for (std::size_t i = 0; i < n_; ++i)
            if (alpha_[i] > 0.0) v += alpha_[i] * data_.y[i] * kernel_.at(i, m);
        return v;
    }

    std::size_t examine(std::size_t i) {
        const double yi = data_.y[i];
        const double ei = errors_[i];
        const double r = ei * yi;
        const bool violates = (r < -cfg_.tol && alpha_[i] < cfg_.C) || (r > cfg_.tol && alpha_[i] > 0.0);
        if (!violates) return 0;

        // second choice heuristic: non-bound point maximizing |E_i - E_j|
        std::ptrdiff_t best = -1;
        double best_gap = -1.0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (j == i || alpha_[j] <= 0.0 || alpha_[j] >= cfg_.C) continue;
            const double gap = std::abs(ei - errors_[j]);
            if (gap > best_gap) {
                best_gap = gap;
                best = static_cast<std::ptrdiff_t>(j);
            }
        }
        if (best >= 0 && take_step(i, static_cast<std::size_t>(best))) return 1;

        // all non-bound points, then all points, from a random start
        const std::size_t start = static_cast<std::size_t>(rng_.below(n_));
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t j = (start + k) % n_;
            if (j == i || alpha_[j] <= 0.0 || alpha_[j] >= cfg_.C) continue;
            if (take_step(i, j)) return 1;
        }
        const std::size_t start2 = static_cast<std::size_t>(rng_.below(n_));
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t j = (start2 + k) % n_;
            if (j == i) continue;
            if (take_step(i, j)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i, std::size_t j) {
        if (i == j) return false;
        const double ai = alpha_[i], aj = alpha_[j];
        const double yi = data_.y[i], yj = data_.y[j];
        const double ei = errors_[i], ej = errors_[j];
        const double s = yi * yj;
        double lo, hi;
        if (s < 0) {
            lo = std::max(0.0, aj - ai);
            hi = std::min(cfg_.C, cfg_.C + aj - ai);
        } else {
            lo = std::max(0.0, ai + aj - cfg_.C);
            hi = std::min(cfg_.C, ai + aj);
        }
        if (lo >= hi) return false;
        const double kii = kernel_.at(i, i), kjj = kernel_.at(j, j), kij = kernel_.at(i, j);
        const double eta = kii + kjj - 2.0 * kij;
        double aj_new;
        if (eta > 1e-15) {
            aj_new = aj + yj * (ei - ej) / eta;
            aj_new = std::clamp(aj_new, lo, hi);
        } else {
            // flat direction (duplicate points): pick the better bound
            const double f1 = yi * (ei + b_) - ai * kii - s * aj * kij;
            const double f2 = yj * (ej + b_) - s * ai * kij - aj * kjj;
            const double l1 = ai + s * (aj - lo);
            const double h1 = ai + s * (aj - hi);
            const double lobj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * kii + 0.5 * lo * lo * kjj +
                                s * lo * l1 * kij;
            const double hobj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * kii + 0.5 * hi * hi * kjj +
                                s * hi * h1 * kij;
            if (lobj < hobj - 1e-12)
                aj_new = lo;
            else if (hobj < lobj - 1e-12)
                aj_new = hi;
            else
                return false;
        }
        if (std::abs(aj_new - aj) < 1e-10 * (aj_new + aj + 1e-10)) return false;
        const double ai_new = ai + s * (aj - aj_new);

        const double dai = ai_new - ai, daj = aj_new - aj;
        const double b1 = b_ - ei - yi * dai * kii - yj * daj * kij;
        const double b2 = b_ - ej - yi * dai * kij - yj * daj * kjj;
        double b_new;
        if (ai_new > 0.0 && ai_new < cfg_.C)
            b_new = b1;
        else if (aj_new > 0.0 && aj_new < cfg_.C)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);
        const double db = b_new - b_;

        alpha_[i] = ai_new;
        alpha_[j] = aj_new;
        b_ = b_new;
        for (std::size_t m = 0; m < n_; ++m)
            errors_[m] += yi * dai * kernel_.at(i, m) + yj * daj * kernel_.at(j, m) + db;
        return true;
    }

    const LabeledDataset& data_;
    const KernelCache& kernel_;
    TrainConfig cfg_;
    std::size_t n_;
    std::vector<double> alpha_;
    double b_;
    std::vector<double> errors_;
    rng::Engine rng_;
};

inline SvmModel finish_model(const LabeledDataset& data, const TrainConfig& cfg,
                             const std::vector<double>& alpha, double bias) {
    std::vector<int> sv_index;
    std::vector<EncodedVector> sv_x;
    std::vector<double> sv_coeff;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (alpha[i] > 0.0) {
            sv_index.push_back(static_cast<int>(i));
            sv_x.push_back(data.x[i]);
            sv_coeff.push_back(alpha[i] * data.y[i]);
        }
    }
    const int dim = data.x.empty() ? 0 : data.x[0].dimension();
    return SvmModel(cfg, std::move(sv_index), std::move(sv_x), std::move(sv_coeff), bias, dim);
}

}  // namespace detail

inline void check_trainable(const LabeledDataset& data) {
    if (data.size() < 2) throw DegenerateDataError("train_smo: need at least two examples");
    const bool has_pos = std::find(data.y.begin(), data.y.end(), +1) != data.y.end();
    const bool has_neg = std::find(data.y.begin(), data.y.end(), -1) != data.y.end();
    if (!has_pos || !has_neg) throw DegenerateDataError("train_smo: both classes must be present");
}

inline SvmModel train_smo(const LabeledDataset& data, const TrainConfig& cfg) {
    check_trainable(data);
    if (cfg.C <= 0.0 || cfg.tol <= 0.0 || cfg.gamma_rbf <= 0.0)
        throw InvalidArgumentError("train_smo: C, tol and gamma must be positive");
    KernelCache kernel(data.x, cfg.gamma_rbf);
    detail::SmoSolver solver(data, kernel, cfg, std::vector<double>(data.size(), 0.0), 0.0);
    solver.solve();
    return detail::finish_model(data, cfg, solver.alpha(), solver.bias());
}

// Same as train_smo but reusing a prepared kernel cache (used heavily by the
// poisoning loop) and optionally warm-starting from a previous solution on a
// prefix of `data`.
inline SvmModel train_smo_cached(const LabeledDataset& data, const KernelCache& kernel,
                                 const TrainConfig& cfg, const SvmModel* warm_from = nullptr,
                                 std::vector<double> warm_errors = {}) {
    check_trainable(data);
    std::vector<double> alpha(data.size(), 0.0);
    double bias = 0.0;
    if (warm_from != nullptr) {
        for (std::size_t k = 0; k < warm_from->support_indices().size(); ++k) {
            const auto idx = static_cast<std::size_t>(warm_from->support_indices()[k]);
            if (idx < alpha.size())
                alpha[idx] = warm_from->dual_coefficients()[k] *
                             static_cast<double>(data.y[idx]);  // alpha = coeff * y
        }
        bias = warm_from->bias();
    }
    detail::SmoSolver solver(data, kernel, cfg, std::move(alpha), bias, std::move(warm_errors));
    solver.solve();
    return detail::finish_model(data, cfg, solver.alpha(), solver.bias());
}

// Retrain on base + extra records with the configuration fixed (no new
// hyperparameter search). Warm-starting must not change the converged
// solution beyond the KKT tolerance; cold start is the default.
inline SvmModel retrain(const LabeledDataset& base, const LabeledDataset& extra,
                        const TrainConfig& cfg, const SvmModel* warm_from = nullptr) {
    LabeledDataset all = base;
    for (std::size_t i = 0; i < extra.size(); ++i) all.push(extra.x[i], extra.y[i]);
    KernelCache kernel(all.x, cfg.gamma_rbf);
    return train_smo_cached(all, kernel, cfg, warm_from);
}

}  // namespace potlab::svm
