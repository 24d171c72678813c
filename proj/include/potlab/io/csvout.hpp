#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "potlab/common/error.hpp"

namespace potlab::io {

// Shortest round-trip decimal form; '.' decimal point, no locale, so output
// bytes depend only on the double values themselves.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Write-temp-then-rename so partially written outputs never appear.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const auto target = std::filesystem::path(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const auto tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write file: " + tmp);
        out << content;
        if (!out.good()) throw IoError("short write: " + tmp);
    }
    std::filesystem::rename(tmp, target);
}

// Fixed-column CSV accumulator with LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns) : n_columns_(columns.size()) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) buffer_ += ',';
            buffer_ += columns[i];
        }
        buffer_ += '\n';
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != n_columns_)
            throw InvalidArgumentError("CsvWriter: expected " + std::to_string(n_columns_) +
                                       " cells, got " + std::to_string(cells.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) buffer_ += ',';
            buffer_ += cells[i];
        }
        buffer_ += '\n';
    }

    const std::string& content() const { return buffer_; }

    void save(const std::string& path) const { write_file_atomic(path, buffer_); }

private:
    std::size_t n_columns_;
    std::string buffer_;
};

// FNV-1a 64-bit content hash, reported as fixed-width hex.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return std::string(buf);
}

inline std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot hash file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fnv1a_hex(bytes);
}

}  // namespace potlab::io
