#pragma once

#include <vector>

#include "potlab/credit/dataset.hpp"
#include "potlab/svm/smo.hpp"

namespace potlab::credit {

struct TargetGroup {
    std::vector<std::size_t> indices;  // positions in the source record list
    std::vector<ApplicantRecord> members;
};

// The poisoning beneficiaries: applicants with little funds in both
// accounts who repaid in reality but are denied by the model. May be empty
// (that is a property of the model, not an error).
inline TargetGroup select_target_group(const std::vector<ApplicantRecord>& records,
                                       const svm::SvmModel& model, const Encoder& encoder) {
    TargetGroup g;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (r.checking_account != "little" || r.saving_account != "little") continue;
        if (r.label != Label::repaid) continue;
        if (model.predict(encoder.encode(r)).label != svm::Decision::deny) continue;
        g.indices.push_back(i);
        g.members.push_back(r);
    }
    return g;
}

}  // namespace potlab::credit
