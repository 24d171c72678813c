#pragma once

#include "potlab/svm/smo.hpp"

namespace potlab::svm {

// Positive class for precision/recall is the accept (repaid) side: an
// "accepted" prediction is a positive call, a repaid label is a positive
// truth. This keeps the all-accept baseline legible (precision = base
// rate, recall = 1).
struct Metrics {
    int tp = 0;  // predicted accept, actually repaid
    int fp = 0;  // predicted accept, actually default
    int fn = 0;  // predicted deny, actually repaid
    int tn = 0;  // predicted deny, actually default
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

inline Metrics evaluate(const SvmModel& model, const LabeledDataset& test) {
    if (test.size() == 0) throw InvalidArgumentError("evaluate: empty test set");
    Metrics m;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const bool accept = model.predict(test.x[i]).label == Decision::accept;
        const bool repaid = test.y[i] == -1;
        if (accept && repaid)
            ++m.tp;
        else if (accept && !repaid)
            ++m.fp;
        else if (!accept && repaid)
            ++m.fn;
        else
            ++m.tn;
    }
    const int n = m.tp + m.fp + m.fn + m.tn;
    m.accuracy = static_cast<double>(m.tp + m.tn) / n;
    m.precision = (m.tp + m.fp) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) > 0 ? static_cast<double>(m.tp) / (m.tp + m.fn) : 0.0;
    return m;
}

}  // namespace potlab::svm
