#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "potlab/common/error.hpp"
#include "potlab/credit/record.hpp"

namespace potlab::credit {

// k-quantile binner. Cut points sit at the empirical quantiles 1/k..(k-1)/k
// of the fitted values (linear-interpolation definition, the "type 7"
// convention); bin(v) = number of edges strictly below v.
class QuantileBinner {
public:
    QuantileBinner() = default;

    QuantileBinner(std::string feature, const std::vector<double>& values, int k = 5)
        : feature_(std::move(feature)), k_(k) {
        if (values.empty()) throw InvalidArgumentError("QuantileBinner: no values for " + feature_);
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        for (int j = 1; j < k_; ++j)
            edges_.push_back(quantile_sorted(sorted, static_cast<double>(j) / k_));
    }

    int bin(double v) const {
        int b = 0;
        for (const double e : edges_) b += (e < v) ? 1 : 0;
        return b;
    }

    int bin_count() const { return k_; }
    const std::vector<double>& edges() const { return edges_; }
    const std::string& feature() const { return feature_; }

    static double quantile_sorted(const std::vector<double>& sorted, double p) {
        const double h = p * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
    }

private:
    std::string feature_;
    int k_ = 5;
    std::vector<double> edges_;  // k-1 non-decreasing cut points
};

// Fixed-length binary feature vector; one bit set per one-hot group.
// Dimensions here never exceed 64, so the bits live in a single word and
// squared distances reduce to popcount.
class EncodedVector {
public:
    EncodedVector() = default;
    EncodedVector(std::uint64_t mask, int dim) : mask_(mask), dim_(dim) {}

    int dimension() const { return dim_; }
    std::uint64_t mask() const { return mask_; }
    bool bit(int i) const { return (mask_ >> i) & 1u; }

    std::vector<std::uint8_t> bits() const {
        std::vector<std::uint8_t> out(static_cast<std::size_t>(dim_));
        for (int i = 0; i < dim_; ++i) out[static_cast<std::size_t>(i)] = bit(i) ? 1 : 0;
        return out;
    }

    // ||x - y||^2 for binary vectors = Hamming distance
    int squared_distance_to(const EncodedVector& other) const {
        if (dim_ != other.dim_)
            throw InvalidArgumentError("EncodedVector: dimension mismatch (" + std::to_string(dim_) +
                                       " vs " + std::to_string(other.dim_) + ")");
        return std::popcount(mask_ ^ other.mask_);
    }

    bool operator==(const EncodedVector& o) const { return mask_ == o.mask_ && dim_ == o.dim_; }
    // lexicographic comparison of the bit sequence, bit 0 first
    bool lex_less(const EncodedVector& o) const {
        for (int i = 0; i < dim_; ++i) {
            const bool a = bit(i), b = o.bit(i);
            if (a != b) return !a;  // 0 < 1
        }
        return false;
    }

private:
    std::uint64_t mask_ = 0;
    int dim_ = 0;
};

struct FeatureGroup {
    std::string name;
    int offset = 0;
    int size = 0;
};

// One-hot encoder over quantile-binned continuous features (age, amount,
// duration) and the categorical columns. Fitted strictly on training
// records; category tables keep the canonical level order restricted to
// levels seen in training.
class Encoder {
public:
    static Encoder fit(const std::vector<ApplicantRecord>& train, int bins = 5) {
        if (train.empty()) throw InvalidArgumentError("Encoder::fit: empty training set");
        Encoder enc;
        std::vector<double> age, amount, duration;
        for (const auto& r : train) {
            age.push_back(static_cast<double>(r.age));
            amount.push_back(r.credit_amount);
            duration.push_back(static_cast<double>(r.duration));
        }
        enc.age_bins_ = QuantileBinner("age", age, bins);
        enc.amount_bins_ = QuantileBinner("credit_amount", amount, bins);
        enc.duration_bins_ = QuantileBinner("duration", duration, bins);

        auto seen_levels = [&train](auto member, const std::vector<std::string>& canonical) {
            std::set<std::string> seen;
            for (const auto& r : train) seen.insert(r.*member);
            std::vector<std::string> out;
            for (const auto& level : canonical)
                if (seen.count(level)) out.push_back(level);
            return out;
        };
        enc.sex_table_ = seen_levels(&ApplicantRecord::sex, sex_levels());
        enc.job_table_ = seen_levels(&ApplicantRecord::job, job_levels());
        enc.housing_table_ = seen_levels(&ApplicantRecord::housing, housing_levels());
        enc.saving_table_ = seen_levels(&ApplicantRecord::saving_account, saving_levels());
        enc.checking_table_ = seen_levels(&ApplicantRecord::checking_account, checking_levels());
        enc.purpose_table_ = seen_levels(&ApplicantRecord::purpose, purpose_levels());

        int offset = 0;
        auto add_group = [&enc, &offset](const std::string& name, int size) {
            enc.groups_.push_back({name, offset, size});
            offset += size;
        };
        add_group("age", bins);
        add_group("sex", static_cast<int>(enc.sex_table_.size()));
        add_group("job", static_cast<int>(enc.job_table_.size()));
        add_group("housing", static_cast<int>(enc.housing_table_.size()));
        add_group("saving", static_cast<int>(enc.saving_table_.size()));
        add_group("checking", static_cast<int>(enc.checking_table_.size()));
        add_group("amount", bins);
        add_group("duration", bins);
        add_group("purpose", static_cast<int>(enc.purpose_table_.size()));
        enc.dim_ = offset;
        if (enc.dim_ > 64)
            throw EncodingError("Encoder: dimension " + std::to_string(enc.dim_) + " exceeds 64");

        // representative value per amount bin: midpoint of the training
        // value range inside the bin (used as the scalar "loan amount" by
        // evasion/poisoning objectives)
        enc.amount_representative_ = representatives(enc.amount_bins_, amount);
        enc.duration_representative_ = representatives(enc.duration_bins_, duration);
        // witness value per bin: lower median of the training values in the
        // bin; an actual training value, so transformed records always
        // re-encode into the intended bin
        enc.amount_witness_ = witnesses(enc.amount_bins_, amount);
        enc.duration_witness_ = witnesses(enc.duration_bins_, duration);
        return enc;
    }

    int dimension() const { return dim_; }
    const std::vector<FeatureGroup>& groups() const { return groups_; }
    const QuantileBinner& amount_bins() const { return amount_bins_; }
    const QuantileBinner& duration_bins() const { return duration_bins_; }
    const QuantileBinner& age_bins() const { return age_bins_; }
    const std::vector<std::string>& purpose_table() const { return purpose_table_; }

    double amount_representative(int bin) const {
        return amount_representative_[static_cast<std::size_t>(bin)];
    }
    double duration_representative(int bin) const {
        return duration_representative_[static_cast<std::size_t>(bin)];
    }
    double amount_witness(int bin) const { return amount_witness_[static_cast<std::size_t>(bin)]; }
    double duration_witness(int bin) const {
        return duration_witness_[static_cast<std::size_t>(bin)];
    }

    EncodedVector encode(const ApplicantRecord& r) const {
        std::uint64_t mask = 0;
        int g = 0;
        auto set_bit = [&](int local) {
            mask |= std::uint64_t{1} << (groups_[static_cast<std::size_t>(g)].offset + local);
            ++g;
        };
        set_bit(age_bins_.bin(static_cast<double>(r.age)));
        set_bit(table_index(sex_table_, r.sex, "sex"));
        set_bit(table_index(job_table_, r.job, "job"));
        set_bit(table_index(housing_table_, r.housing, "housing"));
        set_bit(table_index(saving_table_, r.saving_account, "saving_account"));
        set_bit(table_index(checking_table_, r.checking_account, "checking_account"));
        set_bit(amount_bins_.bin(r.credit_amount));
        set_bit(duration_bins_.bin(static_cast<double>(r.duration)));
        set_bit(table_index(purpose_table_, r.purpose, "purpose"));
        return EncodedVector(mask, dim_);
    }

    struct Decoded {
        int age_bin = 0;
        std::string sex, job, housing, saving_account, checking_account;
        int amount_bin = 0;
        int duration_bin = 0;
        std::string purpose;
    };

    Decoded decode(const EncodedVector& v) const {
        if (v.dimension() != dim_) throw EncodingError("decode: dimension mismatch");
        Decoded d;
        d.age_bin = group_hot(v, 0);
        d.sex = sex_table_[static_cast<std::size_t>(group_hot(v, 1))];
        d.job = job_table_[static_cast<std::size_t>(group_hot(v, 2))];
        d.housing = housing_table_[static_cast<std::size_t>(group_hot(v, 3))];
        d.saving_account = saving_table_[static_cast<std::size_t>(group_hot(v, 4))];
        d.checking_account = checking_table_[static_cast<std::size_t>(group_hot(v, 5))];
        d.amount_bin = group_hot(v, 6);
        d.duration_bin = group_hot(v, 7);
        d.purpose = purpose_table_[static_cast<std::size_t>(group_hot(v, 8))];
        return d;
    }

    bool operator==(const Encoder& o) const {
        return dim_ == o.dim_ && sex_table_ == o.sex_table_ && job_table_ == o.job_table_ &&
               housing_table_ == o.housing_table_ && saving_table_ == o.saving_table_ &&
               checking_table_ == o.checking_table_ && purpose_table_ == o.purpose_table_ &&
               age_bins_.edges() == o.age_bins_.edges() &&
               amount_bins_.edges() == o.amount_bins_.edges() &&
               duration_bins_.edges() == o.duration_bins_.edges() &&
               amount_representative_ == o.amount_representative_ &&
               duration_representative_ == o.duration_representative_;
    }

private:
    static std::vector<double> representatives(const QuantileBinner& binner,
                                               const std::vector<double>& train_values) {
        std::vector<double> lo(static_cast<std::size_t>(binner.bin_count()),
                               std::numeric_limits<double>::infinity());
        std::vector<double> hi(static_cast<std::size_t>(binner.bin_count()),
                               -std::numeric_limits<double>::infinity());
        for (const double v : train_values) {
            const auto b = static_cast<std::size_t>(binner.bin(v));
            lo[b] = std::min(lo[b], v);
            hi[b] = std::max(hi[b], v);
        }
        std::vector<double> rep(lo.size());
        for (std::size_t b = 0; b < lo.size(); ++b) {
            if (lo[b] > hi[b]) {  // empty bin (degenerate training data): fall back to an edge
                const auto& e = binner.edges();
                rep[b] = e.empty() ? 0.0 : e[std::min(b, e.size() - 1)];
            } else {
                rep[b] = (lo[b] + hi[b]) / 2.0;
            }
        }
        return rep;
    }

    static std::vector<double> witnesses(const QuantileBinner& binner,
                                         const std::vector<double>& train_values) {
        std::vector<std::vector<double>> per_bin(static_cast<std::size_t>(binner.bin_count()));
        for (const double v : train_values) per_bin[static_cast<std::size_t>(binner.bin(v))].push_back(v);
        std::vector<double> out(per_bin.size());
        for (std::size_t b = 0; b < per_bin.size(); ++b) {
            auto& vals = per_bin[b];
            if (vals.empty()) {
                const auto& e = binner.edges();
                out[b] = e.empty() ? 0.0 : e[std::min(b, e.size() - 1)];
                continue;
            }
            std::sort(vals.begin(), vals.end());
            out[b] = vals[(vals.size() - 1) / 2];  // lower median
        }
        return out;
    }

    static int table_index(const std::vector<std::string>& table, const std::string& value,
                           const std::string& column) {
        const auto it = std::find(table.begin(), table.end(), value);
        if (it == table.end())
            throw EncodingError("encode: category `" + value + "` of column `" + column +
                                "` was not present in the training data");
        return static_cast<int>(it - table.begin());
    }

    int group_hot(const EncodedVector& v, std::size_t group) const {
        const auto& g = groups_[group];
        int hot = -1;
        for (int i = 0; i < g.size; ++i) {
            if (v.bit(g.offset + i)) {
                if (hot >= 0) throw EncodingError("decode: multiple bits set in group " + g.name);
                hot = i;
            }
        }
        if (hot < 0) throw EncodingError("decode: no bit set in group " + g.name);
        return hot;
    }

    QuantileBinner age_bins_, amount_bins_, duration_bins_;
    std::vector<std::string> sex_table_, job_table_, housing_table_, saving_table_,
        checking_table_, purpose_table_;
    std::vector<FeatureGroup> groups_;
    std::vector<double> amount_representative_, duration_representative_;
    std::vector<double> amount_witness_, duration_witness_;
    int dim_ = 0;
};

}  // namespace potlab::credit
