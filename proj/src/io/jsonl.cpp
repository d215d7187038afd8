// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/io/jsonl.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace otk::io {
namespace {

nlohmann::json lanelet_to_json(const Lanelet& l) {
    nlohmann::json poses = nlohmann::json::array();
    for (const LanePose& p : l.poses)
        poses.push_back({p.x, p.y, p.theta, p.end_flag, p.on_stop_line, p.on_crosswalk});
    return {{"id", l.id},
            {"successors", l.successors},
            {"predecessors", l.predecessors},
            {"poses", std::move(poses)}};
}

Lanelet lanelet_from_json(const nlohmann::json& j) {
    Lanelet l;
    l.id = j.at("id").get<int>();
    l.successors = j.at("successors").get<std::vector<int>>();
    l.predecessors = j.at("predecessors").get<std::vector<int>>();
    for (const auto& row : j.at("poses")) {
        if (row.size() != 6) throw std::runtime_error("lane pose row must have 6 fields");
        LanePose p;
        p.x = row[0].get<double>();
        p.y = row[1].get<double>();
        p.theta = row[2].get<double>();
        p.end_flag = row[3].get<int>();
        p.on_stop_line = row[4].get<int>();
        p.on_crosswalk = row[5].get<int>();
        l.poses.push_back(p);
    }
    return l;
}

nlohmann::json track_to_json(const Tracklet& t) {
    nlohmann::json obs = nlohmann::json::array();
    for (const Observation& o : t.obs)
        obs.push_back({o.t, o.x, o.y, o.theta, o.l, o.w, o.h, o.s, o.vx, o.vy});
    return {{"id", t.id}, {"class", t.cls}, {"obs", std::move(obs)}};
}

Tracklet track_from_json(const nlohmann::json& j) {
    Tracklet t;
    t.id = j.at("id").get<std::string>();
    t.cls = j.at("class").get<std::string>();
    for (const auto& row : j.at("obs")) {
        if (row.size() != 10) throw std::runtime_error("observation row must have 10 fields");
        Observation o;
        o.t = row[0].get<double>();
        o.x = row[1].get<double>();
        o.y = row[2].get<double>();
        o.theta = row[3].get<double>();
        o.l = row[4].get<double>();
        o.w = row[5].get<double>();
        o.h = row[6].get<double>();
        o.s = row[7].get<double>();
        o.vx = row[8].get<double>();
        o.vy = row[9].get<double>();
        t.obs.push_back(o);
    }
    return t;
}

void check_schema(const nlohmann::json& j, const char* what) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kSchemaVersion)
        throw std::runtime_error(std::string(what) + ": unsupported or missing schema_version");
}

std::vector<nlohmann::json> read_lines(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::vector<nlohmann::json> out;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        out.push_back(nlohmann::json::parse(line));
    }
    return out;
}

void write_lines(const std::string& path, const std::vector<nlohmann::json>& lines) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& j : lines) f << j.dump() << "\n";
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace

nlohmann::json scene_to_json(const synth::SceneRecord& scene) {
    nlohmann::json lanelets = nlohmann::json::array();
    for (const Lanelet& l : scene.lane_graph.lanelets) lanelets.push_back(lanelet_to_json(l));
    nlohmann::json tracks = nlohmann::json::array();
    for (const Tracklet& t : scene.gt_tracks) {
        nlohmann::json tj = track_to_json(t);
        auto it = scene.provenance.find(t.id);
        if (it != scene.provenance.end()) tj["src_id"] = it->second;
        tracks.push_back(std::move(tj));
    }
    return {{"schema_version", kSchemaVersion},
            {"scene_id", scene.scene_id},
            {"sample_rate", scene.sample_rate},
            {"lane_graph", {{"warnings", scene.lane_graph.warnings}, {"lanelets", std::move(lanelets)}}},
            {"tracks", std::move(tracks)}};
}

synth::SceneRecord scene_from_json(const nlohmann::json& j) {
    check_schema(j, "scene");
    synth::SceneRecord scene;
    scene.scene_id = j.at("scene_id").get<std::string>();
    scene.sample_rate = j.at("sample_rate").get<double>();
    scene.lane_graph.warnings = j.at("lane_graph").at("warnings").get<int>();
    for (const auto& lj : j.at("lane_graph").at("lanelets"))
        scene.lane_graph.lanelets.push_back(lanelet_from_json(lj));
    for (const auto& tj : j.at("tracks")) {
        Tracklet t = track_from_json(tj);
        if (tj.contains("src_id")) scene.provenance[t.id] = tj.at("src_id").get<std::string>();
        scene.gt_tracks.push_back(std::move(t));
    }
    return scene;
}

nlohmann::json completed_to_json(const CompletedScene& scene) {
    nlohmann::json lanelets = nlohmann::json::array();
    for (const Lanelet& l : scene.lane_graph.lanelets) lanelets.push_back(lanelet_to_json(l));
    nlohmann::json tracks = nlohmann::json::array();
    for (const CompletedTrack& ct : scene.tracks) {
        nlohmann::json tj = track_to_json(ct.track);
        tj["sources"] = ct.sources;
        nlohmann::json segs = nlohmann::json::array();
        for (const TrackSegment& s : ct.segments) segs.push_back({s.id, s.src_id, s.n_obs});
        tj["segments"] = std::move(segs);
        tracks.push_back(std::move(tj));
    }
    return {{"schema_version", kSchemaVersion},
            {"scene_id", scene.scene_id},
            {"sample_rate", scene.sample_rate},
            {"lane_graph", {{"warnings", scene.lane_graph.warnings}, {"lanelets", std::move(lanelets)}}},
            {"tracks", std::move(tracks)}};
}

CompletedScene completed_from_json(const nlohmann::json& j) {
    check_schema(j, "completed scene");
    CompletedScene scene;
    scene.scene_id = j.at("scene_id").get<std::string>();
    scene.sample_rate = j.at("sample_rate").get<double>();
    if (j.contains("lane_graph")) {
        scene.lane_graph.warnings = j.at("lane_graph").at("warnings").get<int>();
        for (const auto& lj : j.at("lane_graph").at("lanelets"))
            scene.lane_graph.lanelets.push_back(lanelet_from_json(lj));
    }
    for (const auto& tj : j.at("tracks")) {
        CompletedTrack ct;
        ct.track = track_from_json(tj);
        if (tj.contains("sources")) ct.sources = tj.at("sources").get<std::vector<std::string>>();
        else ct.sources.assign(ct.track.obs.size(), "obs");
        if (tj.contains("segments"))
            for (const auto& s : tj.at("segments"))
                ct.segments.push_back(
                    {s[0].get<std::string>(), s[1].get<std::string>(), s[2].get<int>()});
        if (ct.sources.size() != ct.track.obs.size())
            throw std::runtime_error("completed track: sources/obs length mismatch");
        scene.tracks.push_back(std::move(ct));
    }
    return scene;
}

void write_scenes_jsonl(const std::string& path, const std::vector<synth::SceneRecord>& scenes) {
    std::vector<nlohmann::json> lines;
    lines.reserve(scenes.size());
    for (const auto& s : scenes) lines.push_back(scene_to_json(s));
    write_lines(path, lines);
}

std::vector<synth::SceneRecord> read_scenes_jsonl(const std::string& path) {
    std::vector<synth::SceneRecord> out;
    for (const auto& j : read_lines(path)) out.push_back(scene_from_json(j));
    return out;
}

void write_completed_jsonl(const std::string& path, const std::vector<CompletedScene>& scenes) {
    std::vector<nlohmann::json> lines;
    lines.reserve(scenes.size());
    for (const auto& s : scenes) lines.push_back(completed_to_json(s));
    write_lines(path, lines);
}

std::vector<CompletedScene> read_completed_jsonl(const std::string& path) {
    std::vector<CompletedScene> out;
    for (const auto& j : read_lines(path)) out.push_back(completed_from_json(j));
    return out;
}

}  // namespace otk::io
