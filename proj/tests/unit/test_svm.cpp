#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <vector>

#include "potlab/credit/dataset.hpp"
#include "potlab/credit/target.hpp"
#include "potlab/svm/cv.hpp"
#include "potlab/svm/metrics.hpp"
#include "potlab/svm/model_io.hpp"
#include "potlab/svm/smo.hpp"

using namespace potlab;
using namespace potlab::svm;
using credit::EncodedVector;

namespace {

const std::string kDataset = std::string(POTLAB_REPO_ROOT) + "/data/german_credit.csv";

EncodedVector vec(std::uint64_t mask, int dim = 8) { return EncodedVector(mask, dim); }

// Independent dual oracle: projected gradient ascent on
//   W(a) = sum a_i - 1/2 a^T Q a,  Q_ij = y_i y_j K_ij
// subject to 0 <= a <= C and sum_i y_i a_i = 0. The projection onto the
// box intersected with the hyperplane is computed by bisection on the
// Lagrange multiplier of the equality constraint.
struct DualOracle {
    std::vector<double> alpha;
    double objective = 0.0;
};

DualOracle pga_dual(const LabeledDataset& data, double C, double gamma, int iters = 300000) {
    const std::size_t n = data.size();
    std::vector<double> Q(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            Q[i * n + j] = data.y[i] * data.y[j] * rbf_kernel(data.x[i], data.x[j], gamma);

    auto project = [&](std::vector<double>& v) {
        auto constraint = [&](double lam) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += data.y[i] * std::clamp(v[i] - lam * data.y[i], 0.0, C);
            return s;
        };
        double lo = -1e6, hi = 1e6;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (constraint(mid) > 0.0 ? lo : hi) = mid;
        }
        const double lam = 0.5 * (lo + hi);
        for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i] - lam * data.y[i], 0.0, C);
    };

    std::vector<double> a(n, 0.0);
    const double step = 1.0 / static_cast<double>(n);
    for (int it = 0; it < iters; ++it) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            double g = 1.0;
            for (std::size_t j = 0; j < n; ++j) g -= Q[i * n + j] * a[j];
            v[i] = a[i] + step * g;
        }
        project(v);
        a = std::move(v);
    }
    DualOracle out;
    out.alpha = a;
    double lin = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lin += a[i];
        for (std::size_t j = 0; j < n; ++j) quad += a[i] * a[j] * Q[i * n + j];
    }
    out.objective = lin - 0.5 * quad;
    return out;
}

// reconstruct alpha over the training set from a model
std::vector<double> full_alpha(const SvmModel& model, const LabeledDataset& data) {
    std::vector<double> a(data.size(), 0.0);
    for (std::size_t k = 0; k < model.support_indices().size(); ++k) {
        const auto i = static_cast<std::size_t>(model.support_indices()[k]);
        a[i] = model.dual_coefficients()[k] * data.y[i];
    }
    return a;
}

void check_kkt(const SvmModel& model, const LabeledDataset& data, double tol) {
    const auto alpha = full_alpha(model, data);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double yf = data.y[i] * model.margin(data.x[i]);
        if (alpha[i] <= 0.0) {
            CHECK(yf >= 1.0 - tol);
        } else if (alpha[i] >= model.config().C) {
            CHECK(yf <= 1.0 + tol);
        } else {
            CHECK(std::abs(yf - 1.0) <= tol);
        }
    }
}

// Jacobi eigenvalue sweep for symmetric matrices (test-side oracle).
double min_eigenvalue(std::vector<double> m, std::size_t n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += m[p * n + q] * m[p * n + q];
        if (off < 1e-20) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(m[p * n + q]) < 1e-15) continue;
                const double theta = (m[q * n + q] - m[p * n + p]) / (2.0 * m[p * n + q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m[k * n + p], mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m[p * n + k], mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
            }
        }
    }
    double lo = m[0];
    for (std::size_t i = 1; i < n; ++i) lo = std::min(lo, m[i * n + i]);
    return lo;
}

LabeledDataset random_problem(rng::Engine& rng, std::size_t n, int dim = 10) {
    LabeledDataset d;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t mask = 0;
        for (int b = 0; b < dim; ++b)
            if (rng.uniform() < 0.5) mask |= std::uint64_t{1} << b;
        d.push(EncodedVector(mask, dim), rng.uniform() < 0.5 ? +1 : -1);
    }
    // ensure both classes
    d.y[0] = +1;
    d.y[n - 1] = -1;
    return d;
}

struct CanonicalFixture {
    LabeledDataset train, test;
    SvmModel model;
    credit::Encoder encoder;
    std::vector<credit::ApplicantRecord> records;

    CanonicalFixture() {
        records = credit::load_dataset(kDataset);
        const auto split = credit::split_dataset(records, 1);
        encoder = credit::Encoder::fit(split.train);
        train = encode_dataset(encoder, split.train);
        test = encode_dataset(encoder, split.test);
        TrainConfig cfg;
        cfg.C = 10.0;
        cfg.gamma_rbf = 1.0 / encoder.dimension();
        cfg.seed = 3;
        model = train_smo(train, cfg);
    }
};

const CanonicalFixture& canonical() {
    static const CanonicalFixture f;
    return f;
}

}  // namespace

TEST_CASE("rbf kernel basics", "[svm]") {
    const auto x = vec(0b10110101);
    CHECK(rbf_kernel(x, x, 0.3) == 1.0);

    // binary vectors differing in m positions: K = exp(-gamma m)
    const auto y = vec(0b10110110);  // differs in 2 bits
    CHECK(rbf_kernel(x, y, 0.3) == Catch::Approx(std::exp(-0.3 * 2)).epsilon(1e-12));

    rng::Engine rng(1);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = vec(rng.next_u64() & 0xFF), b = vec(rng.next_u64() & 0xFF);
        CHECK(rbf_kernel(a, b, 0.7) == rbf_kernel(b, a, 0.7));
        CHECK(rbf_kernel(a, b, 0.7) > 0.0);
        CHECK(rbf_kernel(a, b, 0.7) <= 1.0);
    }

    CHECK_THROWS_AS(rbf_kernel(vec(1, 8), vec(1, 9), 0.5), InvalidArgumentError);
}

TEST_CASE("separable pair trains to opposite-sign unit margins", "[svm]") {
    LabeledDataset d;
    d.push(vec(0b0001), +1);
    d.push(vec(0b1110), -1);
    TrainConfig cfg;
    cfg.C = 10.0;
    cfg.gamma_rbf = 0.5;
    const auto model = train_smo(d, cfg);
    const auto p0 = model.predict(d.x[0]);
    const auto p1 = model.predict(d.x[1]);
    CHECK(p0.label == Decision::deny);
    CHECK(p1.label == Decision::accept);
    CHECK(p0.margin > 0.0);
    CHECK(p1.margin < 0.0);
}

TEST_CASE("single-class data is rejected", "[svm]") {
    LabeledDataset d;
    d.push(vec(1), +1);
    d.push(vec(2), +1);
    CHECK_THROWS_AS(train_smo(d, {}), DegenerateDataError);
}

TEST_CASE("smo dual objective matches the projected-gradient oracle on small problems", "[svm]") {
    rng::Engine rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const auto n = static_cast<std::size_t>(3 + rng.below(6));  // 3..8 points
        auto d = random_problem(rng, n);
        TrainConfig cfg;
        cfg.C = (rep % 2) ? 1.0 : 5.0;
        cfg.gamma_rbf = (rep % 3) ? 0.25 : 0.05;
        cfg.seed = static_cast<std::uint64_t>(rep);
        const auto model = train_smo(d, cfg);
        const KernelCache kernel(d.x, cfg.gamma_rbf);
        const double smo_obj = dual_objective(full_alpha(model, d), d.y, kernel);
        const auto oracle = pga_dual(d, cfg.C, cfg.gamma_rbf);
        CHECK(smo_obj == Catch::Approx(oracle.objective).margin(1e-4));
    }
}

TEST_CASE("alphas respect the box constraint on canonical data", "[svm]") {
    const auto& f = canonical();
    for (const double coeff : f.model.dual_coefficients()) {
        CHECK(std::abs(coeff) > 0.0);
        CHECK(std::abs(coeff) <= f.model.config().C + 1e-12);
    }
}

TEST_CASE("KKT residuals hold within tolerance on the canonical training set", "[svm]") {
    const auto& f = canonical();
    check_kkt(f.model, f.train, f.model.config().tol + 1e-9);
}

TEST_CASE("free support vectors sit on the unit margin", "[svm]") {
    const auto& f = canonical();
    const auto alpha = full_alpha(f.model, f.train);
    int checked = 0;
    for (std::size_t i = 0; i < f.train.size(); ++i) {
        if (alpha[i] > 1e-9 && alpha[i] < f.model.config().C - 1e-9) {
            CHECK(std::abs(f.model.margin(f.train.x[i])) ==
                  Catch::Approx(1.0).margin(f.model.config().tol + 1e-9));
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("margin equals a direct kernel-expansion recomputation", "[svm]") {
    const auto& f = canonical();
    for (std::size_t i = 0; i < 20; ++i) {
        const auto& x = f.test.x[i];
        double m = f.model.bias();
        for (std::size_t k = 0; k < f.model.support_vectors().size(); ++k)
            m += f.model.dual_coefficients()[k] *
                 rbf_kernel(f.model.support_vectors()[k], x, f.model.config().gamma_rbf);
        CHECK(f.model.margin(x) == Catch::Approx(m).margin(1e-12));
    }
}

TEST_CASE("prediction is invariant to support-vector ordering", "[svm]") {
    const auto& f = canonical();
    auto idx = f.model.support_indices();
    auto svx = f.model.support_vectors();
    auto coeff = f.model.dual_coefficients();
    // reverse the support set
    std::reverse(idx.begin(), idx.end());
    std::reverse(svx.begin(), svx.end());
    std::reverse(coeff.begin(), coeff.end());
    const SvmModel reordered(f.model.config(), idx, svx, coeff, f.model.bias(),
                             f.model.dimension());
    for (std::size_t i = 0; i < 50; ++i)
        CHECK(reordered.predict(f.test.x[i]).label == f.model.predict(f.test.x[i]).label);
}

TEST_CASE("kernel matrices are positive semi-definite", "[svm]") {
    const auto& f = canonical();
    const std::size_t n = 50;
    std::vector<double> K(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            K[i * n + j] = rbf_kernel(f.train.x[i], f.train.x[j], 0.05);
    CHECK(min_eigenvalue(K, n) >= -1e-8);
}

TEST_CASE("stratified folds have balanced sizes and class counts", "[svm]") {
    const auto& f = canonical();
    const auto folds = stratified_folds(f.train.y, 5, 11);
    REQUIRE(folds.size() == 5);
    int total_defaults = 0;
    for (const int y : f.train.y) total_defaults += (y > 0) ? 1 : 0;
    for (const auto& fold : folds) {
        CHECK(fold.size() == 180);
        int defaults = 0;
        for (const auto i : fold) defaults += (f.train.y[i] > 0) ? 1 : 0;
        // per-fold counts within one example of proportional share
        CHECK(std::abs(defaults * 5 - total_defaults) <= 5);
    }
}

TEST_CASE("stratification fails cleanly when a class cannot reach every fold", "[svm]") {
    std::vector<int> labels(50, -1);
    labels[0] = +1;  // a single positive cannot appear in all 5 folds
    CHECK_THROWS_AS(stratified_folds(labels, 5, 1), DegenerateDataError);
}

TEST_CASE("grid of one point is returned without search", "[svm]") {
    const auto& f = canonical();
    LabeledDataset small;
    for (std::size_t i = 0; i < 60; ++i) small.push(f.train.x[i], f.train.y[i]);
    const auto res = cross_validate(small, {GridPoint{3.0, 0.07}}, 5, 1);
    CHECK(res.best.C == 3.0);
    CHECK(res.best.gamma == 0.07);
    CHECK(res.mean_accuracy.size() == 1);
}

TEST_CASE("cross-validation tie rule prefers smaller C then smaller gamma", "[svm]") {
    // a tiny perfectly-separable problem: every grid point reaches the same
    // fold accuracy, so the tie rule decides
    LabeledDataset d;
    for (int i = 0; i < 30; ++i) {
        d.push(vec(0b1111, 8), +1);
        d.push(vec(0b11110000, 8), -1);
    }
    const std::vector<GridPoint> grid = {{10.0, 0.5}, {1.0, 0.5}, {1.0, 0.1}, {10.0, 0.1}};
    const auto res = cross_validate(d, grid, 5, 3);
    CHECK(res.best.C == 1.0);
    CHECK(res.best.gamma == 0.1);
}

TEST_CASE("metrics: all-accept baseline on a 70/30 test set", "[svm]") {
    // a model that accepts everything: no support vectors, negative bias
    const SvmModel all_accept(TrainConfig{}, {}, {}, {}, -1.0, 8);
    LabeledDataset test;
    rng::Engine rng(5);
    for (int i = 0; i < 100; ++i) test.push(vec(rng.next_u64() & 0xFF), i < 30 ? +1 : -1);
    const auto m = evaluate(all_accept, test);
    CHECK(m.accuracy == Catch::Approx(0.70));
    CHECK(m.precision == Catch::Approx(0.70));
    CHECK(m.recall == Catch::Approx(1.0));
}

TEST_CASE("metrics are consistent with their confusion counts", "[svm]") {
    const auto& f = canonical();
    const auto m = evaluate(f.model, f.test);
    const int n = m.tp + m.fp + m.fn + m.tn;
    CHECK(n == 100);
    CHECK(m.accuracy == Catch::Approx(double(m.tp + m.tn) / n).margin(1e-12));
    CHECK(m.precision == Catch::Approx(double(m.tp) / (m.tp + m.fp)).margin(1e-12));
    CHECK(m.recall == Catch::Approx(double(m.tp) / (m.tp + m.fn)).margin(1e-12));
}

TEST_CASE("retrain with no extra records reproduces the base model", "[svm]") {
    const auto& f = canonical();
    const auto again = retrain(f.train, LabeledDataset{}, f.model.config(), &f.model);
    for (std::size_t i = 0; i < f.test.size(); ++i) {
        CHECK(again.predict(f.test.x[i]).label == f.model.predict(f.test.x[i]).label);
        CHECK(again.margin(f.test.x[i]) ==
              Catch::Approx(f.model.margin(f.test.x[i])).margin(2 * f.model.config().tol));
    }
}

TEST_CASE("duplicating a correctly-classified non-support point changes nothing", "[svm]") {
    const auto& f = canonical();
    const auto alpha = full_alpha(f.model, f.train);
    std::ptrdiff_t pick = -1;
    for (std::size_t i = 0; i < f.train.size(); ++i) {
        if (alpha[i] == 0.0 && f.train.y[i] * f.model.margin(f.train.x[i]) > 1.5) {
            pick = static_cast<std::ptrdiff_t>(i);
            break;
        }
    }
    REQUIRE(pick >= 0);
    LabeledDataset extra;
    extra.push(f.train.x[(std::size_t)pick], f.train.y[(std::size_t)pick]);
    const auto poisoned = retrain(f.train, extra, f.model.config(), &f.model);
    for (std::size_t i = 0; i < f.test.size(); ++i)
        CHECK(poisoned.predict(f.test.x[i]).label == f.model.predict(f.test.x[i]).label);
}

TEST_CASE("cold-start and warm-start retrains agree on all test labels", "[svm]") {
    const auto& f = canonical();
    LabeledDataset extra;
    extra.push(f.test.x[0], -1);
    extra.push(f.test.x[1], -1);
    const auto cold = retrain(f.train, extra, f.model.config(), nullptr);
    const auto warm = retrain(f.train, extra, f.model.config(), &f.model);
    for (std::size_t i = 0; i < f.test.size(); ++i)
        CHECK(cold.predict(f.test.x[i]).label == warm.predict(f.test.x[i]).label);
}

TEST_CASE("model JSON round-trips bit-exactly", "[svm]") {
    const auto& f = canonical();
    const auto path = (std::filesystem::temp_directory_path() / "potlab_model.json").string();
    save_model(f.model, "deadbeef", path);
    const auto loaded = load_model(path);
    CHECK(loaded.bias() == f.model.bias());
    CHECK(loaded.support_indices() == f.model.support_indices());
    CHECK(loaded.dual_coefficients() == f.model.dual_coefficients());
    for (std::size_t i = 0; i < f.test.size(); ++i)
        CHECK(loaded.margin(f.test.x[i]) == f.model.margin(f.test.x[i]));
}

TEST_CASE("target group selection matches its predicate", "[svm]") {
    const auto& f = canonical();
    const auto group = credit::select_target_group(f.records, f.model, f.encoder);
    CHECK(group.members.size() >= 15);
    CHECK(group.members.size() <= 30);
    for (const auto& r : group.members) {
        CHECK(r.checking_account == "little");
        CHECK(r.saving_account == "little");
        CHECK(r.label == credit::Label::repaid);
        CHECK(f.model.predict(f.encoder.encode(r)).label == Decision::deny);
    }

    const SvmModel all_accept(TrainConfig{}, {}, {}, {}, -1.0, f.encoder.dimension());
    CHECK(credit::select_target_group(f.records, all_accept, f.encoder).members.empty());
}
