#pragma once

#include <cmath>
#include <vector>

#include "potlab/credit/encoder.hpp"

namespace potlab::credit {

// A loan application reachable from `origin` by editing the mutable
// features only: the amount bin, the duration bin, and the purpose.
struct TransformedRecord {
    ApplicantRecord record;
    int amount_bin = 0;
    int duration_bin = 0;
    int purpose_index = 0;
    int features_changed = 0;  // 0..3, counting mutable features that differ
};

// Every application differing from `origin` in 1..max_changes of the three
// mutable features, each taking any alternative value in its domain. The
// unchanged application is excluded; static attributes are never touched.
// Enumeration order (amount bin, then duration bin, then purpose, all in
// canonical order) is the documented candidate order for tie-breaking.
inline std::vector<TransformedRecord> transformations(const Encoder& encoder,
                                                      const ApplicantRecord& origin,
                                                      int max_changes) {
    if (max_changes < 1 || max_changes > 3)
        throw InvalidArgumentError("transformations: max_changes must be in 1..3");
    const int a0 = encoder.amount_bins().bin(origin.credit_amount);
    const int d0 = encoder.duration_bins().bin(static_cast<double>(origin.duration));
    const auto& purposes = encoder.purpose_table();
    int p0 = 0;
    for (std::size_t i = 0; i < purposes.size(); ++i)
        if (purposes[i] == origin.purpose) p0 = static_cast<int>(i);

    std::vector<TransformedRecord> out;
    for (int a = 0; a < encoder.amount_bins().bin_count(); ++a) {
        for (int d = 0; d < encoder.duration_bins().bin_count(); ++d) {
            for (int p = 0; p < static_cast<int>(purposes.size()); ++p) {
                const int changed = (a != a0) + (d != d0) + (p != p0);
                if (changed == 0 || changed > max_changes) continue;
                TransformedRecord t;
                t.record = origin;
                if (a != a0) t.record.credit_amount = encoder.amount_witness(a);
                if (d != d0)
                    t.record.duration =
                        static_cast<int>(std::llround(encoder.duration_witness(d)));
                if (p != p0) t.record.purpose = purposes[static_cast<std::size_t>(p)];
                t.amount_bin = a;
                t.duration_bin = d;
                t.purpose_index = p;
                t.features_changed = changed;
                out.push_back(std::move(t));
            }
        }
    }
    return out;
}

}  // namespace potlab::credit
