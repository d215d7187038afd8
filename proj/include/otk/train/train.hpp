// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "otk/config.hpp"
#include "otk/synth/scene.hpp"

namespace otk::train {

struct TrainLogEntry {
    int epoch = 0;
    double lr = 0.0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_error = 0.0;  // association error (re-id) or ADE in m (completion)
};

struct TrainResult {
    std::vector<TrainLogEntry> log;
    int best_epoch = -1;
    double best_val = 0.0;        // lowest validation error seen
    std::string checkpoint_path;  // best-validation checkpoint
    std::string last_path;        // state after the final epoch (resume point)
};

/// Trains one model ("reid-motion" | "reid-map" | "completion") on the given
/// scenes. Deterministic given (config, seed): masks, shuffles, augmentation,
/// and frame jitter all derive per-epoch streams from the config seed, so a
/// run resumed from `<out>.last.json` reproduces the original epochs bit for
/// bit. The best-validation checkpoint is written to `out_path`.
TrainResult train_model(const RunConfig& cfg, const std::string& model,
                        const std::vector<synth::SceneRecord>& scenes,
                        const std::string& out_path, const std::string& resume_path,
                        std::ostream& log);

}  // namespace otk::train
