#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "potlab/svm/smo.hpp"

namespace potlab::svm {

// JSON layout for reproducible reloads: hyperparameters, support-vector
// indices into the referenced training dataset (identified by its content
// hash), the encoded support vectors themselves, dual coefficients and bias.
inline nlohmann::json model_to_json(const SvmModel& model, const std::string& dataset_hash) {
    nlohmann::json j;
    j["format"] = "potlab-svm-v1";
    j["config"] = {{"C", model.config().C},
                   {"gamma_rbf", model.config().gamma_rbf},
                   {"tol", model.config().tol},
                   {"max_passes", model.config().max_passes},
                   {"seed", model.config().seed}};
    j["dataset_hash"] = dataset_hash;
    j["dimension"] = model.dimension();
    j["support_index"] = model.support_indices();
    nlohmann::json masks = nlohmann::json::array();
    for (const auto& v : model.support_vectors()) masks.push_back(v.mask());
    j["support_masks"] = masks;
    j["dual_coeff"] = model.dual_coefficients();
    j["bias"] = model.bias();
    return j;
}

inline SvmModel model_from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j["format"] != "potlab-svm-v1")
        throw SchemaError("model file: unknown or missing format tag");
    TrainConfig cfg;
    cfg.C = j.at("config").at("C").get<double>();
    cfg.gamma_rbf = j.at("config").at("gamma_rbf").get<double>();
    cfg.tol = j.at("config").at("tol").get<double>();
    cfg.max_passes = j.at("config").at("max_passes").get<int>();
    cfg.seed = j.at("config").at("seed").get<std::uint64_t>();
    const int dim = j.at("dimension").get<int>();
    auto sv_index = j.at("support_index").get<std::vector<int>>();
    std::vector<EncodedVector> sv_x;
    for (const auto& m : j.at("support_masks")) sv_x.emplace_back(m.get<std::uint64_t>(), dim);
    auto coeff = j.at("dual_coeff").get<std::vector<double>>();
    const double bias = j.at("bias").get<double>();
    if (sv_index.size() != sv_x.size() || sv_x.size() != coeff.size())
        throw SchemaError("model file: inconsistent support vector arrays");
    return SvmModel(cfg, std::move(sv_index), std::move(sv_x), std::move(coeff), bias, dim);
}

inline void save_model(const SvmModel& model, const std::string& dataset_hash,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file: " + path);
    out << model_to_json(model, dataset_hash).dump(2) << "\n";
}

inline SvmModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    nlohmann::json j;
    in >> j;
    return model_from_json(j);
}

}  // namespace potlab::svm
