#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "potlab/common/rng.hpp"
#include "potlab/credit/record.hpp"

namespace potlab::credit {

inline const std::vector<std::string>& canonical_columns() {
    static const std::vector<std::string> v = {
        "age",           "sex",           "job",           "housing", "saving_account",
        "checking_account", "credit_amount", "duration",   "purpose", "label"};
    return v;
}

// Optional column-rename map read from a plain text file of
// `source_name = canonical_name` lines (# comments, blank lines allowed).
inline std::map<std::string, std::string> load_schema_mapping(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open schema mapping file: " + path);
    std::map<std::string, std::string> mapping;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaError("schema mapping line " + std::to_string(line_no) +
                              ": expected `source = canonical`");
        mapping[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return mapping;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    // comma-separated; double quotes may wrap a field ("" escapes a quote)
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(std::move(field));
    return out;
}

inline void check_category(const std::string& value, const std::vector<std::string>& levels,
                           const std::string& column, int row) {
    if (std::find(levels.begin(), levels.end(), value) == levels.end())
        throw SchemaError("row " + std::to_string(row) + ", column `" + column +
                          "`: unknown category value `" + value + "`");
}

template <class T>
T parse_number(const std::string& s, const std::string& column, int row) {
    T value{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw SchemaError("row " + std::to_string(row) + ", column `" + column +
                          "`: cannot parse numeric value `" + s + "`");
    return value;
}

}  // namespace detail

// Parses a loan-application CSV (no row-count requirement). Missing
// saving/checking values ("", "NA", "na") become the explicit `unknown`
// level. Every schema violation names the offending row and column.
inline std::vector<ApplicantRecord> parse_records(
    const std::string& path, const std::map<std::string, std::string>& mapping = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw SchemaError(path + ": empty file");
    auto columns = detail::split_csv_line(header);
    for (auto& c : columns)
        if (auto it = mapping.find(c); it != mapping.end()) c = it->second;

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < columns.size(); ++i) index[columns[i]] = i;
    for (const auto& want : canonical_columns())
        if (!index.count(want)) throw SchemaError(path + ": missing column `" + want + "`");

    auto normalize_missing = [](std::string v) {
        if (v.empty() || v == "NA" || v == "na" || v == "n/a") return std::string("unknown");
        return v;
    };

    std::vector<ApplicantRecord> records;
    std::string line;
    int row = 1;  // header = row 0
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) {
            ++row;
            continue;
        }
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != columns.size())
            throw SchemaError("row " + std::to_string(row) + ": expected " +
                              std::to_string(columns.size()) + " fields, got " +
                              std::to_string(fields.size()));
        auto get = [&](const std::string& col) { return fields[index.at(col)]; };

        ApplicantRecord r;
        r.age = detail::parse_number<int>(get("age"), "age", row);
        if (r.age <= 0) throw SchemaError("row " + std::to_string(row) + ", column `age`: must be positive");
        r.sex = get("sex");
        detail::check_category(r.sex, sex_levels(), "sex", row);
        r.job = get("job");
        detail::check_category(r.job, job_levels(), "job", row);
        r.housing = get("housing");
        detail::check_category(r.housing, housing_levels(), "housing", row);
        r.saving_account = normalize_missing(get("saving_account"));
        detail::check_category(r.saving_account, saving_levels(), "saving_account", row);
        r.checking_account = normalize_missing(get("checking_account"));
        detail::check_category(r.checking_account, checking_levels(), "checking_account", row);
        r.credit_amount = detail::parse_number<double>(get("credit_amount"), "credit_amount", row);
        if (r.credit_amount <= 0)
            throw SchemaError("row " + std::to_string(row) + ", column `credit_amount`: must be positive");
        r.duration = detail::parse_number<int>(get("duration"), "duration", row);
        if (r.duration <= 0)
            throw SchemaError("row " + std::to_string(row) + ", column `duration`: must be positive");
        r.purpose = get("purpose");
        detail::check_category(r.purpose, purpose_levels(), "purpose", row);
        r.label = label_from_string(get("label"));
        records.push_back(std::move(r));
        ++row;
    }
    return records;
}

// Canonical loader: the bundled dataset must hold exactly 1000 applications
// with both labels present.
inline std::vector<ApplicantRecord> load_dataset(
    const std::string& path, const std::map<std::string, std::string>& mapping = {}) {
    auto records = parse_records(path, mapping);
    if (records.size() != 1000)
        throw SchemaError(path + ": expected 1000 records, got " + std::to_string(records.size()));
    const auto defaults = static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(),
                      [](const ApplicantRecord& r) { return r.label == Label::default_; }));
    if (defaults == 0 || defaults == records.size())
        throw SchemaError(path + ": dataset must contain both labels");
    return records;
}

struct DatasetSplit {
    std::vector<ApplicantRecord> train;  // 900
    std::vector<ApplicantRecord> test;   // 100
    std::vector<std::size_t> train_index;  // positions in the source dataset
    std::vector<std::size_t> test_index;
    std::uint64_t seed = 0;
};

// Uniform random permutation by seed; first 900 train, last 100 test.
inline DatasetSplit split_dataset(const std::vector<ApplicantRecord>& records, std::uint64_t seed) {
    if (records.size() != 1000)
        throw InvalidArgumentError("split_dataset: expected 1000 records, got " +
                                   std::to_string(records.size()));
    std::vector<std::size_t> perm(records.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    rng::Engine rng(seed);
    rng.shuffle(perm);
    DatasetSplit split;
    split.seed = seed;
    for (std::size_t i = 0; i < 900; ++i) {
        split.train.push_back(records[perm[i]]);
        split.train_index.push_back(perm[i]);
    }
    for (std::size_t i = 900; i < 1000; ++i) {
        split.test.push_back(records[perm[i]]);
        split.test_index.push_back(perm[i]);
    }
    return split;
}

}  // namespace potlab::credit
