// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <string>

#include <json.hpp>

#include "otk/nn/param_store.hpp"

namespace otk::nn {

struct CheckpointMeta {
    std::string model;        // reid-motion | reid-map | completion
    std::string config_hash;  // hash of the model-relevant config section
    int epoch = 0;
    double val_loss = 0.0;
};

/// Single-document JSON checkpoint: parameter tensors (flat row-major decimal
/// arrays), AdamW moments, and metadata. Serialization is canonical (sorted
/// keys, shortest-round-trip floats) so save -> load -> save is byte-identical.
template <class S>
nlohmann::json checkpoint_to_json(const ParamStore<S>& store, const CheckpointMeta& meta) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["meta"] = {{"model", meta.model},
                 {"config_hash", meta.config_hash},
                 {"epoch", meta.epoch},
                 {"val_loss", meta.val_loss}};
    j["step"] = store.step;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json adam = nlohmann::json::object();
    auto flat = [](const DenseMat<S>& m) {
        nlohmann::json arr = nlohmann::json::array();
        for (long r = 0; r < m.rows(); ++r)
            for (long c = 0; c < m.cols(); ++c) arr.push_back(static_cast<double>(m(r, c)));
        return arr;
    };
    for (const auto& [name, e] : store) {
        params[name] = {{"shape", {e.value.rows(), e.value.cols()}}, {"data", flat(e.value)}};
        adam[name] = {{"m", flat(e.m)}, {"v", flat(e.v)}};
    }
    j["params"] = std::move(params);
    j["adam"] = std::move(adam);
    return j;
}

template <class S>
void checkpoint_from_json(const nlohmann::json& j, ParamStore<S>& store, CheckpointMeta* meta) {
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
        throw std::runtime_error("checkpoint: unsupported schema");
    if (meta) {
        meta->model = j["meta"]["model"].get<std::string>();
        meta->config_hash = j["meta"]["config_hash"].get<std::string>();
        meta->epoch = j["meta"]["epoch"].get<int>();
        meta->val_loss = j["meta"]["val_loss"].get<double>();
    }
    store.step = j["step"].get<long>();
    auto unflat = [](const nlohmann::json& data, long rows, long cols) {
        DenseMat<S> m(rows, cols);
        if (static_cast<long>(data.size()) != rows * cols)
            throw std::runtime_error("checkpoint: tensor size mismatch");
        long k = 0;
        for (long r = 0; r < rows; ++r)
            for (long c = 0; c < cols; ++c) m(r, c) = static_cast<S>(data[k++].get<double>());
        return m;
    };
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
        auto& e = store.entry(it.key());
        const long rows = it.value()["shape"][0].get<long>();
        const long cols = it.value()["shape"][1].get<long>();
        if (rows != e.value.rows() || cols != e.value.cols())
            throw std::runtime_error("checkpoint: shape mismatch for " + it.key());
        e.value = unflat(it.value()["data"], rows, cols);
        e.m = unflat(j["adam"][it.key()]["m"], rows, cols);
        e.v = unflat(j["adam"][it.key()]["v"], rows, cols);
    }
}

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

template <class S>
void save_checkpoint(const ParamStore<S>& store, const CheckpointMeta& meta,
                     const std::string& path) {
    write_text_file(path, checkpoint_to_json(store, meta).dump() + "\n");
}

template <class S>
CheckpointMeta load_checkpoint(ParamStore<S>& store, const std::string& path) {
    CheckpointMeta meta;
    checkpoint_from_json(nlohmann::json::parse(read_text_file(path)), store, &meta);
    return meta;
}

}  // namespace otk::nn
