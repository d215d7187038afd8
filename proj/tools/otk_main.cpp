// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>

#include "otk/common/rng.hpp"
#include "otk/io/jsonl.hpp"
#include "otk/nn/checkpoint.hpp"
#include "otk/pipeline/pipeline.hpp"
#include "otk/synth/fragment.hpp"
#include "otk/synth/generator.hpp"
#include "otk/train/train.hpp"

namespace {

using namespace otk;

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    std::string out;
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg = args.config_path.empty() ? RunConfig{} : RunConfig::load(args.config_path);
    if (args.seed_set) cfg.seed = args.seed;
    cfg.validate();
    return cfg;
}

std::string stem_of(const std::string& path) {
    const auto dot = path.rfind(".jsonl");
    return dot == std::string::npos ? path : path.substr(0, dot);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    nn::write_text_file(path, j.dump(2) + "\n");
}

int cmd_generate(const CommonArgs& args) {
    const RunConfig cfg = load_config(args);
    const std::string out = args.out.empty() ? cfg.paths.scenes : args.out;
    const int n = cfg.generator.n_scenes;
    std::vector<synth::SceneRecord> scenes(static_cast<std::size_t>(n));
    pipeline::parallel_for(n, args.jobs, [&](int i) {
        scenes[static_cast<std::size_t>(i)] =
            synth::generate_scene(Rng::derive(cfg.seed, static_cast<std::uint64_t>(i)), cfg.generator);
    });
    io::write_scenes_jsonl(out, scenes);

    const pipeline::GenerateStats stats =
        pipeline::collect_stats(scenes, cfg.occlusion, Rng::derive(cfg.seed, 0x57A7));
    nlohmann::json sidecar = stats.to_json();
    sidecar["config"] = cfg.to_json();
    write_json_file(stem_of(out) + ".stats.json", sidecar);

    if (cfg.generator.fragmentation.enabled) {
        std::vector<synth::SceneRecord> fragged(scenes.size());
        pipeline::parallel_for(n, args.jobs, [&](int i) {
            fragged[static_cast<std::size_t>(i)] =
                synth::fragment_scene(scenes[static_cast<std::size_t>(i)],
                                      Rng::derive(cfg.seed, 0xF4A6 + static_cast<std::uint64_t>(i)),
                                      cfg.generator.fragmentation);
        });
        io::write_scenes_jsonl(stem_of(out) + ".frag.jsonl", fragged);
    }
    std::cout << "wrote " << n << " scenes to " << out << " (" << stats.n_samples
              << " pseudo-occlusion samples in sidecar)\n";
    return 0;
}

int cmd_train(const CommonArgs& args, const std::string& model, const std::string& scenes_path,
              const std::string& resume) {
    const RunConfig cfg = load_config(args);
    const std::string scenes_file = scenes_path.empty() ? cfg.paths.scenes : scenes_path;
    const std::vector<synth::SceneRecord> scenes = io::read_scenes_jsonl(scenes_file);
    const std::string out = args.out.empty() ? (model + ".ckpt.json") : args.out;
    const train::TrainResult result =
        train::train_model(cfg, model, scenes, out, resume, std::cout);
    std::cout << "best epoch " << result.best_epoch << " val_loss " << result.best_val
              << " -> " << result.checkpoint_path << "\n";
    return 0;
}

struct LoadedModels {
    std::unique_ptr<reid::MotionNet<float>> motion;
    std::unique_ptr<reid::MapNet<float>> map;
    std::unique_ptr<completion::CompletionNet<float>> completion;
    nn::ParamStore<float> motion_params, map_params, completion_params;
    pipeline::InferModels view;
};

void load_model_checkpoint(const RunConfig& cfg, const std::string& path,
                           const std::string& expect_model, nn::ParamStore<float>& store) {
    const nlohmann::json j = nlohmann::json::parse(nn::read_text_file(path));
    const std::string got_model = j.at("meta").at("model").get<std::string>();
    const std::string got_hash = j.at("meta").at("config_hash").get<std::string>();
    if (got_model != expect_model)
        throw std::invalid_argument("checkpoint " + path + " holds model '" + got_model +
                                    "', expected '" + expect_model + "'");
    if (got_hash != cfg.model_hash())
        throw std::invalid_argument("checkpoint " + path +
                                    " was trained with a different model config (hash " +
                                    got_hash + " vs " + cfg.model_hash() + ")");
    nn::checkpoint_from_json(j, store, nullptr);
}

LoadedModels load_models(const RunConfig& cfg, const std::string& motion_ckpt,
                         const std::string& map_ckpt, const std::string& completion_ckpt) {
    LoadedModels m;
    Rng init(Rng::derive(cfg.seed, 0x1217));
    m.motion = std::make_unique<reid::MotionNet<float>>(cfg.model);
    m.map = std::make_unique<reid::MapNet<float>>(cfg.model);
    m.completion = std::make_unique<completion::CompletionNet<float>>(cfg.model);
    m.motion->register_params(m.motion_params, init);
    m.map->register_params(m.map_params, init);
    m.completion->register_params(m.completion_params, init);
    load_model_checkpoint(cfg, motion_ckpt, "reid-motion", m.motion_params);
    load_model_checkpoint(cfg, map_ckpt, "reid-map", m.map_params);
    load_model_checkpoint(cfg, completion_ckpt, "completion", m.completion_params);
    m.view = {m.motion.get(),     &m.motion_params, m.map.get(),
              &m.map_params,      m.completion.get(), &m.completion_params};
    return m;
}

int cmd_infer(const CommonArgs& args, const std::string& scenes_path,
              const std::string& motion_ckpt, const std::string& map_ckpt,
              const std::string& completion_ckpt) {
    const RunConfig cfg = load_config(args);
    const std::vector<synth::SceneRecord> scenes = io::read_scenes_jsonl(scenes_path);
    const LoadedModels models = load_models(cfg, motion_ckpt, map_ckpt, completion_ckpt);
    std::vector<io::CompletedScene> out(scenes.size());
    pipeline::parallel_for(static_cast<int>(scenes.size()), args.jobs, [&](int i) {
        out[static_cast<std::size_t>(i)] =
            pipeline::infer_scene(scenes[static_cast<std::size_t>(i)], models.view, cfg);
    });
    const std::string path = args.out.empty() ? "completed.jsonl" : args.out;
    io::write_completed_jsonl(path, out);
    std::cout << "completed " << scenes.size() << " scenes -> " << path << "\n";
    return 0;
}

int cmd_baseline(const CommonArgs& args, const std::string& scenes_path) {
    const RunConfig cfg = load_config(args);
    const std::vector<synth::SceneRecord> scenes = io::read_scenes_jsonl(scenes_path);
    std::vector<io::CompletedScene> out(scenes.size());
    pipeline::parallel_for(static_cast<int>(scenes.size()), args.jobs, [&](int i) {
        out[static_cast<std::size_t>(i)] =
            pipeline::baseline_scene(scenes[static_cast<std::size_t>(i)], cfg);
    });
    const std::string path = args.out.empty() ? "baseline.jsonl" : args.out;
    io::write_completed_jsonl(path, out);
    std::cout << "baseline completed " << scenes.size() << " scenes -> " << path << "\n";
    return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& pred_path, const std::string& gt_path) {
    const RunConfig cfg = load_config(args);
    const std::vector<io::CompletedScene> preds = io::read_completed_jsonl(pred_path);
    const std::vector<synth::SceneRecord> gts = io::read_scenes_jsonl(gt_path);
    const eval::EvalReport report = pipeline::evaluate_scenes(preds, gts, cfg.eval);
    nlohmann::json j = report.to_json();
    j["config"] = cfg.to_json();
    if (!args.out.empty()) {
        write_json_file(args.out, j);
        nn::write_text_file(args.out + ".txt", report.to_text());
    }
    std::cout << report.to_text();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"otk - offline vehicle tracking: tracklet re-identification and "
                 "occlusion-aware track completion on synthetic scenes"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string scenes_path, model, resume, motion_ckpt, map_ckpt, completion_ckpt;
    std::string pred_path, gt_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "run configuration JSON");
        sub->add_option("--seed", common.seed, "seed override")->each([&](const std::string&) {
            common.seed_set = true;
        });
        sub->add_option("--jobs", common.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", common.out, "output path");
    };

    CLI::App* generate = app.add_subcommand("generate", "synthesize scenes (plus fragmented "
                                                        "companion when enabled) and stats sidecar");
    add_common(generate);

    CLI::App* train = app.add_subcommand("train", "train one model on generated scenes");
    add_common(train);
    train->add_option("--model", model, "reid-motion | reid-map | completion")->required();
    train->add_option("--scenes", scenes_path, "scenes.jsonl (default: config paths.scenes)");
    train->add_option("--resume", resume, "checkpoint to resume from (.last.json)");

    CLI::App* infer = app.add_subcommand("infer", "re-identify and complete fragmented tracks");
    add_common(infer);
    infer->add_option("--scenes", scenes_path, "input tracklet scenes")->required();
    infer->add_option("--motion-ckpt", motion_ckpt, "reid-motion checkpoint")->required();
    infer->add_option("--map-ckpt", map_ckpt, "reid-map checkpoint")->required();
    infer->add_option("--completion-ckpt", completion_ckpt, "completion checkpoint")->required();

    CLI::App* baseline = app.add_subcommand("baseline", "constant-velocity association with "
                                                        "linear gap interpolation");
    add_common(baseline);
    baseline->add_option("--scenes", scenes_path, "input tracklet scenes")->required();

    CLI::App* eval_cmd = app.add_subcommand("eval", "score predictions against ground truth");
    add_common(eval_cmd);
    eval_cmd->add_option("--pred", pred_path, "completed.jsonl")->required();
    eval_cmd->add_option("--gt", gt_path, "ground-truth scenes.jsonl")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) return cmd_generate(common);
        if (train->parsed()) return cmd_train(common, model, scenes_path, resume);
        if (infer->parsed())
            return cmd_infer(common, scenes_path, motion_ckpt, map_ckpt, completion_ckpt);
        if (baseline->parsed()) return cmd_baseline(common, scenes_path);
        if (eval_cmd->parsed()) return cmd_eval(common, pred_path, gt_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
