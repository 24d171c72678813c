#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "potlab/common/error.hpp"
#include "potlab/common/rng.hpp"

namespace potlab {

inline constexpr double kProbabilitySumTol = 1e-9;

// Finite probability distribution over outcomes of type T.
// Probabilities must be non-negative and sum to 1 within 1e-9; anything
// else is a hard error at construction.
template <class T>
class Distribution {
public:
    using Outcome = std::pair<T, double>;

    Distribution() = default;

    explicit Distribution(std::vector<Outcome> outcomes) : outcomes_(std::move(outcomes)) {
        double sum = 0.0;
        for (const auto& [value, p] : outcomes_) {
            if (p < 0.0 || !std::isfinite(p))
                throw MalformedPolicyError("Distribution: negative or non-finite probability");
            sum += p;
        }
        if (outcomes_.empty() || std::abs(sum - 1.0) > kProbabilitySumTol)
            throw MalformedPolicyError("Distribution: probabilities sum to " + std::to_string(sum) +
                                       ", expected 1 within 1e-9");
    }

    static Distribution point(T value) { return Distribution({{std::move(value), 1.0}}); }

    static Distribution uniform(std::vector<T> values) {
        if (values.empty()) throw MalformedPolicyError("Distribution::uniform: empty support");
        std::vector<Outcome> out;
        out.reserve(values.size());
        const double p = 1.0 / static_cast<double>(values.size());
        for (auto& v : values) out.emplace_back(std::move(v), p);
        // make the sum exactly 1 regardless of rounding
        double partial = 0.0;
        for (std::size_t i = 0; i + 1 < out.size(); ++i) partial += out[i].second;
        out.back().second = 1.0 - partial;
        return Distribution(std::move(out));
    }

    const std::vector<Outcome>& outcomes() const { return outcomes_; }
    bool empty() const { return outcomes_.empty(); }

    // Inverse-CDF sampling in listed order; zero-probability outcomes are
    // never produced.
    const T& sample(rng::Engine& rng) const {
        const double u = rng.uniform();
        double acc = 0.0;
        const T* last_positive = nullptr;
        for (const auto& [value, p] : outcomes_) {
            if (p <= 0.0) continue;
            acc += p;
            last_positive = &value;
            if (u < acc) return value;
        }
        return *last_positive;  // u landed in the rounding tail
    }

    double probability_of(const T& value) const {
        double p = 0.0;
        for (const auto& [v, q] : outcomes_)
            if (v == value) p += q;
        return p;
    }

private:
    std::vector<Outcome> outcomes_;
};

}  // namespace potlab
