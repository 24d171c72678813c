#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "potlab/credit/transform.hpp"
#include "potlab/svm/smo.hpp"

namespace potlab::pots {

using credit::ApplicantRecord;
using credit::Encoder;
using credit::TransformedRecord;
using svm::Decision;
using svm::SvmModel;

struct EvasionResult {
    ApplicantRecord original;
    ApplicantRecord chosen;        // equals original when no change helps
    int features_changed = 0;      // mutable-feature differences only
    double amount_gain = 0.0;      // representative-amount delta vs the original bin
    bool accepted = false;         // decision for `chosen`
    bool original_accepted = false;
};

// Exhaustive search over transformations(record, max_changes) for the
// accepted application with the largest representative loan amount. Ties
// break toward fewer features changed, then the lexicographically smaller
// encoding. If the original is accepted and no accepted transformation
// carries a strictly larger amount, the original is returned unchanged; if
// nothing is accepted at all, the original is returned with accepted=false.
inline EvasionResult evade(const SvmModel& model, const Encoder& encoder,
                           const ApplicantRecord& record, int max_changes) {
    EvasionResult res;
    res.original = record;
    res.chosen = record;
    const auto original_encoded = encoder.encode(record);
    res.original_accepted = model.predict(original_encoded).label == Decision::accept;
    const int original_bin = encoder.amount_bins().bin(record.credit_amount);
    const double original_amount = encoder.amount_representative(original_bin);

    struct Best {
        double amount = 0.0;
        int changes = 0;
        credit::EncodedVector encoded;
        const TransformedRecord* t = nullptr;
    };
    std::optional<Best> best;

    const auto candidates = credit::transformations(encoder, record, max_changes);
    for (const auto& t : candidates) {
        const auto encoded = encoder.encode(t.record);
        if (model.predict(encoded).label != Decision::accept) continue;
        const double amount = encoder.amount_representative(t.amount_bin);
        const bool better =
            !best || amount > best->amount ||
            (amount == best->amount &&
             (t.features_changed < best->changes ||
              (t.features_changed == best->changes && encoded.lex_less(best->encoded))));
        if (better) best = Best{amount, t.features_changed, encoded, &t};
    }

    if (res.original_accepted && (!best || best->amount <= original_amount)) {
        res.accepted = true;  // keep the original application
        return res;
    }
    if (!best) return res;  // denied and nothing flips: accepted = false, gain 0

    res.chosen = best->t->record;
    res.features_changed = best->changes;
    res.amount_gain = best->amount - original_amount;
    res.accepted = true;
    return res;
}

struct CohortRow {
    std::size_t record_id = 0;  // caller-supplied index
    int budget = 0;
    double gain = 0.0;          // improvement in granted representative amount, floored at 0
    int features_changed = 0;
    bool accepted = false;      // an accepting application exists within the budget
};

// Per-record, per-budget evasion table. The tabulated gain is the
// improvement of the granted amount over the original application
// (clamped at zero), which is non-decreasing in the budget because the
// search neighborhoods nest.
inline std::vector<CohortRow> evade_cohort(const SvmModel& model, const Encoder& encoder,
                                           const std::vector<ApplicantRecord>& records,
                                           const std::vector<std::size_t>& record_ids,
                                           const std::vector<int>& budgets) {
    std::vector<CohortRow> rows;
    for (std::size_t i = 0; i < records.size(); ++i) {
        for (const int budget : budgets) {
            const auto r = evade(model, encoder, records[i], budget);
            CohortRow row;
            row.record_id = record_ids.empty() ? i : record_ids[i];
            row.budget = budget;
            row.features_changed = r.features_changed;
            row.accepted = r.accepted;
            row.gain = r.accepted ? std::max(0.0, r.amount_gain) : 0.0;
            rows.push_back(row);
        }
    }
    return rows;
}

// Fraction of the group's applications the model accepts.
inline double acceptance_rate(const SvmModel& model, const Encoder& encoder,
                              const std::vector<ApplicantRecord>& group) {
    if (group.empty()) throw InvalidArgumentError("acceptance_rate: empty group");
    std::size_t accepted = 0;
    for (const auto& r : group)
        accepted += model.predict(encoder.encode(r)).label == Decision::accept ? 1 : 0;
    return static_cast<double>(accepted) / static_cast<double>(group.size());
}

inline double acceptance_rate_encoded(const SvmModel& model,
                                      const std::vector<credit::EncodedVector>& group) {
    if (group.empty()) throw InvalidArgumentError("acceptance_rate: empty group");
    std::size_t accepted = 0;
    for (const auto& x : group) accepted += model.predict(x).label == Decision::accept ? 1 : 0;
    return static_cast<double>(accepted) / static_cast<double>(group.size());
}

}  // namespace potlab::pots
