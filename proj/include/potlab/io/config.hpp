#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "potlab/common/error.hpp"

namespace potlab::io {

// Sectioned key = value configuration:
//
//   # comment
//   [section]
//   key = value
//   list_key = a, b, c
//
// Values are stored verbatim (trimmed); typed getters parse on demand.
class Config {
public:
    static Config parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        Config cfg;
        cfg.path_ = path;
        std::string line, section;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto text = trim(line);
            if (text.empty()) continue;
            if (text.front() == '[') {
                if (text.back() != ']')
                    throw ConfigError(where(path, line_no) + ": malformed section header");
                section = trim(text.substr(1, text.size() - 2));
                if (section.empty()) throw ConfigError(where(path, line_no) + ": empty section name");
                cfg.values_[section];  // section may be empty but must exist
                continue;
            }
            const auto eq = text.find('=');
            if (eq == std::string::npos)
                throw ConfigError(where(path, line_no) + ": expected `key = value`");
            const auto key = trim(text.substr(0, eq));
            const auto value = trim(text.substr(eq + 1));
            if (key.empty()) throw ConfigError(where(path, line_no) + ": empty key");
            if (section.empty())
                throw ConfigError(where(path, line_no) + ": key outside any [section]");
            cfg.values_[section][key] = value;
        }
        return cfg;
    }

    bool has(const std::string& section, const std::string& key) const {
        const auto s = values_.find(section);
        return s != values_.end() && s->second.count(key) > 0;
    }

    std::string get_string(const std::string& section, const std::string& key) const {
        const auto s = values_.find(section);
        if (s == values_.end() || !s->second.count(key))
            throw ConfigError(path_ + ": missing required key [" + section + "] " + key);
        return s->second.at(key);
    }

    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
        return has(section, key) ? get_string(section, key) : fallback;
    }

    long long get_int(const std::string& section, const std::string& key) const {
        return parse_int(get_string(section, key), section, key);
    }

    long long get_int_or(const std::string& section, const std::string& key, long long fallback) const {
        return has(section, key) ? get_int(section, key) : fallback;
    }

    double get_double(const std::string& section, const std::string& key) const {
        return parse_double(get_string(section, key), section, key);
    }

    bool get_bool(const std::string& section, const std::string& key) const {
        const auto v = get_string(section, key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError(path_ + ": [" + section + "] " + key + ": expected a boolean, got `" + v + "`");
    }

    bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const {
        return has(section, key) ? get_bool(section, key) : fallback;
    }

    std::vector<std::string> get_list(const std::string& section, const std::string& key) const {
        const auto raw = get_string(section, key);
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= raw.size()) {
            const auto comma = raw.find(',', start);
            const auto piece = trim(raw.substr(start, comma == std::string::npos
                                                          ? std::string::npos
                                                          : comma - start));
            if (!piece.empty()) out.push_back(piece);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    }

    std::vector<long long> get_int_list(const std::string& section, const std::string& key) const {
        std::vector<long long> out;
        for (const auto& piece : get_list(section, key)) out.push_back(parse_int(piece, section, key));
        return out;
    }

    std::vector<double> get_double_list(const std::string& section, const std::string& key) const {
        std::vector<double> out;
        for (const auto& piece : get_list(section, key))
            out.push_back(parse_double(piece, section, key));
        return out;
    }

    const std::string& path() const { return path_; }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }

    static std::string where(const std::string& path, int line) {
        return path + ":" + std::to_string(line);
    }

    long long parse_int(const std::string& v, const std::string& section,
                        const std::string& key) const {
        long long out{};
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size())
            throw ConfigError(path_ + ": [" + section + "] " + key + ": expected an integer, got `" +
                              v + "`");
        return out;
    }

    double parse_double(const std::string& v, const std::string& section,
                        const std::string& key) const {
        try {
            std::size_t used = 0;
            const double out = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return out;
        } catch (const std::exception&) {
            throw ConfigError(path_ + ": [" + section + "] " + key + ": expected a number, got `" +
                              v + "`");
        }
    }

    std::string path_;
    std::map<std::string, std::map<std::string, std::string>> values_;
};

}  // namespace potlab::io
