// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/config.hpp"

#include <fstream>
#include <stdexcept>

namespace otk {
namespace {

using nlohmann::json;

json noise_to_json(const synth::NoiseConfig& n) {
    return {{"sigma_xy", n.sigma_xy}, {"sigma_theta", n.sigma_theta}, {"sigma_v", n.sigma_v}};
}

synth::NoiseConfig noise_from_json(const json& j) {
    synth::NoiseConfig n;
    n.sigma_xy = j.value("sigma_xy", n.sigma_xy);
    n.sigma_theta = j.value("sigma_theta", n.sigma_theta);
    n.sigma_v = j.value("sigma_v", n.sigma_v);
    return n;
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
    json j;
    j["schema_version"] = 1;
    j["seed"] = seed;
    j["paths"] = {{"scenes", paths.scenes},
                  {"checkpoints", paths.checkpoints},
                  {"reports", paths.reports}};
    j["generator"] = {{"map_template", synth::to_string(generator.map_template)},
                      {"n_scenes", generator.n_scenes},
                      {"vehicle_count", generator.vehicle_count},
                      {"duration_s", generator.duration_s},
                      {"sample_rate_hz", generator.sample_rate_hz},
                      {"noise", noise_to_json(generator.noise)},
                      {"speed",
                       {{"v_min", generator.speed.v_min},
                        {"v_max", generator.speed.v_max},
                        {"v_floor", generator.speed.v_floor},
                        {"v_ceil", generator.speed.v_ceil},
                        {"accel_min", generator.speed.accel_min},
                        {"accel_max", generator.speed.accel_max}}},
                      {"maneuver_fraction", generator.maneuver_fraction},
                      {"truck_fraction", generator.truck_fraction},
                      {"fragmentation",
                       {{"enabled", generator.fragmentation.enabled},
                        {"fraction", generator.fragmentation.fraction},
                        {"min_gap_s", generator.fragmentation.min_gap_s},
                        {"max_gap_s", generator.fragmentation.max_gap_s}}}};
    j["occlusion"] = {{"min_duration_s", occlusion.min_duration_s},
                      {"max_duration_s", occlusion.max_duration_s},
                      {"max_history_s", occlusion.max_history_s},
                      {"candidates_min", occlusion.candidates_min},
                      {"candidates_max", occlusion.candidates_max}};
    j["model"] = {{"hidden", model.hidden},
                  {"attention_radius", model.attention_radius},
                  {"node_radius", model.node_radius},
                  {"crop_radius", model.crop_radius},
                  {"scale_pos", model.scale_pos},
                  {"scale_time", model.scale_time},
                  {"scale_vel", model.scale_vel}};
    j["training"] = {{"epochs", training.epochs},
                     {"batch_size", training.batch_size},
                     {"lr", training.lr},
                     {"decay_reid", training.decay_reid},
                     {"decay_completion", training.decay_completion},
                     {"decay_every", training.decay_every},
                     {"weight_decay", training.weight_decay},
                     {"val_fraction", training.val_fraction},
                     {"rot_range", training.rot_range},
                     {"frame_jitter", training.frame_jitter},
                     {"noise",
                      {{"sigma_xy", training.noise.sigma_xy},
                       {"sigma_theta", training.noise.sigma_theta},
                       {"sigma_v", training.noise.sigma_v}}},
                     {"max_train_samples", training.max_train_samples}};
    j["thresholds"] = {{"tau", thresholds.tau},
                       {"association", thresholds.association},
                       {"fusion_w", thresholds.fusion_w},
                       {"gap_dist", thresholds.gap_dist},
                       {"gap_time", thresholds.gap_time}};
    j["eval"] = {{"match_radius", eval.match_radius}, {"miss_threshold", eval.miss_threshold}};
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("schema_version") && j["schema_version"].get<int>() != 1)
        throw std::invalid_argument("config: unsupported schema_version");
    c.seed = j.value("seed", c.seed);
    if (j.contains("paths")) {
        const auto& p = j["paths"];
        c.paths.scenes = p.value("scenes", c.paths.scenes);
        c.paths.checkpoints = p.value("checkpoints", c.paths.checkpoints);
        c.paths.reports = p.value("reports", c.paths.reports);
    }
    if (j.contains("generator")) {
        const auto& g = j["generator"];
        if (g.contains("map_template"))
            c.generator.map_template = synth::map_kind_from_string(g["map_template"].get<std::string>());
        c.generator.n_scenes = g.value("n_scenes", c.generator.n_scenes);
        c.generator.vehicle_count = g.value("vehicle_count", c.generator.vehicle_count);
        c.generator.duration_s = g.value("duration_s", c.generator.duration_s);
        c.generator.sample_rate_hz = g.value("sample_rate_hz", c.generator.sample_rate_hz);
        if (g.contains("noise")) c.generator.noise = noise_from_json(g["noise"]);
        if (g.contains("speed")) {
            const auto& s = g["speed"];
            c.generator.speed.v_min = s.value("v_min", c.generator.speed.v_min);
            c.generator.speed.v_max = s.value("v_max", c.generator.speed.v_max);
            c.generator.speed.v_floor = s.value("v_floor", c.generator.speed.v_floor);
            c.generator.speed.v_ceil = s.value("v_ceil", c.generator.speed.v_ceil);
            c.generator.speed.accel_min = s.value("accel_min", c.generator.speed.accel_min);
            c.generator.speed.accel_max = s.value("accel_max", c.generator.speed.accel_max);
        }
        c.generator.maneuver_fraction = g.value("maneuver_fraction", c.generator.maneuver_fraction);
        c.generator.truck_fraction = g.value("truck_fraction", c.generator.truck_fraction);
        if (g.contains("fragmentation")) {
            const auto& f = g["fragmentation"];
            c.generator.fragmentation.enabled = f.value("enabled", false);
            c.generator.fragmentation.fraction = f.value("fraction", c.generator.fragmentation.fraction);
            c.generator.fragmentation.min_gap_s = f.value("min_gap_s", c.generator.fragmentation.min_gap_s);
            c.generator.fragmentation.max_gap_s = f.value("max_gap_s", c.generator.fragmentation.max_gap_s);
        }
    }
    if (j.contains("occlusion")) {
        const auto& o = j["occlusion"];
        c.occlusion.min_duration_s = o.value("min_duration_s", c.occlusion.min_duration_s);
        c.occlusion.max_duration_s = o.value("max_duration_s", c.occlusion.max_duration_s);
        c.occlusion.max_history_s = o.value("max_history_s", c.occlusion.max_history_s);
        c.occlusion.candidates_min = o.value("candidates_min", c.occlusion.candidates_min);
        c.occlusion.candidates_max = o.value("candidates_max", c.occlusion.candidates_max);
    }
    if (j.contains("model")) {
        const auto& m = j["model"];
        c.model.hidden = m.value("hidden", c.model.hidden);
        c.model.attention_radius = m.value("attention_radius", c.model.attention_radius);
        c.model.node_radius = m.value("node_radius", c.model.node_radius);
        c.model.crop_radius = m.value("crop_radius", c.model.crop_radius);
        c.model.scale_pos = m.value("scale_pos", c.model.scale_pos);
        c.model.scale_time = m.value("scale_time", c.model.scale_time);
        c.model.scale_vel = m.value("scale_vel", c.model.scale_vel);
    }
    if (j.contains("training")) {
        const auto& t = j["training"];
        c.training.epochs = t.value("epochs", c.training.epochs);
        c.training.batch_size = t.value("batch_size", c.training.batch_size);
        c.training.lr = t.value("lr", c.training.lr);
        c.training.decay_reid = t.value("decay_reid", c.training.decay_reid);
        c.training.decay_completion = t.value("decay_completion", c.training.decay_completion);
        c.training.decay_every = t.value("decay_every", c.training.decay_every);
        c.training.weight_decay = t.value("weight_decay", c.training.weight_decay);
        c.training.val_fraction = t.value("val_fraction", c.training.val_fraction);
        c.training.rot_range = t.value("rot_range", c.training.rot_range);
        c.training.frame_jitter = t.value("frame_jitter", c.training.frame_jitter);
        if (t.contains("noise")) {
            const auto& n = t["noise"];
            c.training.noise.sigma_xy = n.value("sigma_xy", c.training.noise.sigma_xy);
            c.training.noise.sigma_theta = n.value("sigma_theta", c.training.noise.sigma_theta);
            c.training.noise.sigma_v = n.value("sigma_v", c.training.noise.sigma_v);
        }
        c.training.max_train_samples = t.value("max_train_samples", c.training.max_train_samples);
    }
    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        c.thresholds.tau = t.value("tau", c.thresholds.tau);
        c.thresholds.association = t.value("association", c.thresholds.association);
        c.thresholds.fusion_w = t.value("fusion_w", c.thresholds.fusion_w);
        c.thresholds.gap_dist = t.value("gap_dist", c.thresholds.gap_dist);
        c.thresholds.gap_time = t.value("gap_time", c.thresholds.gap_time);
    }
    if (j.contains("eval")) {
        const auto& e = j["eval"];
        c.eval.match_radius = e.value("match_radius", c.eval.match_radius);
        c.eval.miss_threshold = e.value("miss_threshold", c.eval.miss_threshold);
    }
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

void RunConfig::validate() const {
    auto bad = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
    if (generator.n_scenes < 1) bad("generator.n_scenes must be >= 1");
    if (generator.vehicle_count < 1) bad("generator.vehicle_count must be >= 1");
    if (generator.sample_rate_hz <= 0) bad("generator.sample_rate_hz must be > 0");
    if (generator.duration_s <= 0) bad("generator.duration_s must be > 0");
    if (occlusion.min_duration_s <= 0 || occlusion.max_duration_s < occlusion.min_duration_s)
        bad("occlusion durations must satisfy 0 < min <= max");
    if (occlusion.candidates_min < 1 || occlusion.candidates_max < occlusion.candidates_min)
        bad("occlusion candidate band must satisfy 1 <= min <= max");
    if (model.hidden < 1) bad("model.hidden must be >= 1");
    if (training.epochs < 1) bad("training.epochs must be >= 1");
    if (training.batch_size < 1) bad("training.batch_size must be >= 1");
    if (training.lr <= 0) bad("training.lr must be > 0");
    if (training.val_fraction < 0 || training.val_fraction >= 1)
        bad("training.val_fraction must be in [0,1)");
    if (thresholds.fusion_w < 0 || thresholds.fusion_w > 1) bad("thresholds.fusion_w outside [0,1]");
    if (thresholds.tau < 0) bad("thresholds.tau must be >= 0");
    if (eval.match_radius <= 0) bad("eval.match_radius must be > 0");
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunConfig::model_hash() const { return fnv1a_hex(to_json()["model"].dump()); }

}  // namespace otk
