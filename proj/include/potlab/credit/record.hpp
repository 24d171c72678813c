#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "potlab/common/error.hpp"

namespace potlab::credit {

// Closed category sets for the loan-application schema. Order is canonical
// and used everywhere (encoding, transformation enumeration, tie-breaking).
inline const std::vector<std::string>& sex_levels() {
    static const std::vector<std::string> v = {"male", "female"};
    return v;
}
inline const std::vector<std::string>& job_levels() {
    static const std::vector<std::string> v = {"unskilled_nonresident", "unskilled_resident",
                                               "skilled", "highly_skilled"};
    return v;
}
inline const std::vector<std::string>& housing_levels() {
    static const std::vector<std::string> v = {"own", "rent", "free"};
    return v;
}
inline const std::vector<std::string>& saving_levels() {
    static const std::vector<std::string> v = {"little", "moderate", "quite_rich", "rich",
                                               "unknown"};
    return v;
}
inline const std::vector<std::string>& checking_levels() {
    static const std::vector<std::string> v = {"little", "moderate", "rich", "unknown"};
    return v;
}
inline const std::vector<std::string>& purpose_levels() {
    static const std::vector<std::string> v = {"car",     "radio_tv",  "furniture_equipment",
                                               "business", "education", "repairs",
                                               "domestic_appliances", "vacation_others"};
    return v;
}

enum class Label { repaid, default_ };

struct ApplicantRecord {
    int age = 0;
    std::string sex;
    std::string job;
    std::string housing;
    std::string saving_account;
    std::string checking_account;
    double credit_amount = 0.0;
    int duration = 0;  // months
    std::string purpose;
    Label label = Label::repaid;

    bool operator==(const ApplicantRecord&) const = default;
};

inline std::string to_string(Label l) { return l == Label::repaid ? "repaid" : "default"; }

inline Label label_from_string(std::string_view s) {
    if (s == "repaid") return Label::repaid;
    if (s == "default") return Label::default_;
    throw SchemaError("unknown label value: " + std::string(s));
}

}  // namespace potlab::credit
