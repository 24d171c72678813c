#pragma once

#include <chrono>
#include <string>

#include <json.hpp>

#include "potlab/io/csvout.hpp"
#include "potlab/version.hpp"

namespace potlab::io {

// Per-run provenance record. Written (status: running) before any work and
// finalized (status: complete, wall times filled) afterwards. Manifests
// carry timing and are the one output excluded from the bit-exactness
// contract; all data outputs are byte-stable for a given config.
class RunManifest {
public:
    RunManifest(std::string command, std::string config_hash, std::string out_dir)
        : out_dir_(std::move(out_dir)), start_(std::chrono::steady_clock::now()) {
        j_["tool"] = "potlab";
        j_["version"] = kVersion;
        j_["command"] = std::move(command);
        j_["config_hash"] = std::move(config_hash);
        j_["status"] = "running";
        j_["stages"] = nlohmann::json::object();
    }

    void set(const std::string& key, const nlohmann::json& value) { j_[key] = value; }

    void stage_done(const std::string& stage) {
        const auto now = std::chrono::steady_clock::now();
        j_["stages"][stage] =
            std::chrono::duration<double>(now - last_stage_end_.value_or(start_)).count();
        last_stage_end_ = now;
    }

    std::string path() const { return out_dir_ + "/manifest_" + j_["command"].get<std::string>() + ".json"; }

    void write_initial() const { write_file_atomic(path(), j_.dump(2) + "\n"); }

    void finalize() {
        j_["status"] = "complete";
        j_["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        write_file_atomic(path(), j_.dump(2) + "\n");
    }

private:
    nlohmann::json j_;
    std::string out_dir_;
    std::chrono::steady_clock::time_point start_;
    std::optional<std::chrono::steady_clock::time_point> last_stage_end_;
};

}  // namespace potlab::io
