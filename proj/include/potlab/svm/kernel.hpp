#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "potlab/credit/encoder.hpp"

namespace potlab::svm {

using credit::EncodedVector;

// K(x, y) = exp(-gamma * ||x - y||^2); for binary vectors the squared
// distance is the Hamming distance.
inline double rbf_kernel(const EncodedVector& x, const EncodedVector& y, double gamma) {
    if (gamma <= 0.0) throw InvalidArgumentError("rbf_kernel: gamma must be positive");
    return std::exp(-gamma * static_cast<double>(x.squared_distance_to(y)));
}

// Gamma-independent pairwise Hamming distances plus a per-gamma lookup
// table: distances never exceed the dimension (<= 64), so kernel values
// take at most 65 distinct values.
class KernelCache {
public:
    KernelCache() = default;

    KernelCache(const std::vector<EncodedVector>& points, double gamma) : n_(points.size()) {
        dist_.resize(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            dist_[i * n_ + i] = 0;
            for (std::size_t j = i + 1; j < n_; ++j) {
                const auto d = static_cast<std::uint8_t>(points[i].squared_distance_to(points[j]));
                dist_[i * n_ + j] = d;
                dist_[j * n_ + i] = d;
            }
        }
        set_gamma(gamma);
    }

    void set_gamma(double gamma) {
        gamma_ = gamma;
        for (int d = 0; d <= 64; ++d) lut_[d] = std::exp(-gamma * static_cast<double>(d));
    }

    double gamma() const { return gamma_; }
    std::size_t size() const { return n_; }

    double at(std::size_t i, std::size_t j) const { return lut_[dist_[i * n_ + j]]; }
    std::uint8_t distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

    // Rewrite the last slot's distances for a new point (the first n-1
    // points must be unchanged). Lets a candidate-evaluation loop reuse the
    // big fixed block of the matrix.
    void replace_last(const std::vector<EncodedVector>& points, const EncodedVector& last) {
        const std::size_t m = n_ - 1;
        for (std::size_t i = 0; i < m; ++i) {
            const auto d = static_cast<std::uint8_t>(points[i].squared_distance_to(last));
            dist_[i * n_ + m] = d;
            dist_[m * n_ + i] = d;
        }
        dist_[m * n_ + m] = 0;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> dist_;
    double lut_[65] = {};
    double gamma_ = 0.0;
};

}  // namespace potlab::svm
