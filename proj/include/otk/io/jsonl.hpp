// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "otk/synth/scene.hpp"

namespace otk::io {

inline constexpr int kSchemaVersion = 1;

/// Completed-track output record: the merged track, per-observation source
/// tags ("obs" | "model" | "linear"), and the fragments it was merged from.
struct TrackSegment {
    std::string id;      // fragment tracklet id
    std::string src_id;  // provenance (GT track id) when known
    int n_obs = 0;       // observations the fragment contributed
};

struct CompletedTrack {
    Tracklet track;
    std::vector<std::string> sources;  // one per observation
    std::vector<TrackSegment> segments;
};

struct CompletedScene {
    std::string scene_id;
    double sample_rate = 2.0;
    LaneGraph lane_graph;  // echoed from the input so outputs stay scene-shaped
    std::vector<CompletedTrack> tracks;
};

nlohmann::json scene_to_json(const synth::SceneRecord& scene);
synth::SceneRecord scene_from_json(const nlohmann::json& j);

nlohmann::json completed_to_json(const CompletedScene& scene);
CompletedScene completed_from_json(const nlohmann::json& j);

/// JSON-lines scene files: one scene per line, schema_version checked.
void write_scenes_jsonl(const std::string& path, const std::vector<synth::SceneRecord>& scenes);
std::vector<synth::SceneRecord> read_scenes_jsonl(const std::string& path);

void write_completed_jsonl(const std::string& path, const std::vector<CompletedScene>& scenes);
std::vector<CompletedScene> read_completed_jsonl(const std::string& path);

}  // namespace otk::io
