// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/train/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "otk/completion/losses.hpp"
#include "otk/completion/network.hpp"
#include "otk/nn/adamw.hpp"
#include "otk/nn/checkpoint.hpp"
#include "otk/reid/losses.hpp"
#include "otk/reid/nets.hpp"
#include "otk/synth/occlusion.hpp"

namespace otk::train {
namespace {

constexpr std::uint64_t kValSalt = 0x5641;
constexpr std::uint64_t kEpochSalt = 0xE000;
constexpr std::uint64_t kInitSalt = 0x1217;

struct Sample {
    synth::PseudoOcclusionSample s;
    const synth::SceneRecord* scene = nullptr;
};

std::vector<Sample> make_samples(const std::vector<const synth::SceneRecord*>& scenes,
                                 const synth::OcclusionConfig& occ, std::uint64_t seed,
                                 bool completion_only) {
    std::vector<Sample> out;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        for (auto& s : synth::build_samples(*scenes[i], Rng::derive(seed, i), occ)) {
            if (completion_only && s.masked_gt.empty()) continue;
            out.push_back({std::move(s), scenes[i]});
        }
    }
    return out;
}

/// Supervision targets in the gap-local frame.
std::vector<Pose2D> local_targets(const std::vector<Pose2D>& masked_gt, const Pose2D& frame) {
    return to_local_frame(masked_gt, frame);
}

class Trainer {
public:
    Trainer(const RunConfig& cfg, std::string model) : cfg_(cfg), model_(std::move(model)) {
        Rng init(Rng::derive(cfg_.seed, kInitSalt));
        if (model_ == "reid-motion") {
            motion_ = std::make_unique<reid::MotionNet<float>>(cfg_.model);
            motion_->register_params(store_, init);
        } else if (model_ == "reid-map") {
            map_ = std::make_unique<reid::MapNet<float>>(cfg_.model);
            map_->register_params(store_, init);
        } else if (model_ == "completion") {
            completion_ = std::make_unique<completion::CompletionNet<float>>(cfg_.model);
            completion_->register_params(store_, init);
        } else {
            throw std::invalid_argument("train: unknown model " + model_);
        }
    }

    bool is_completion() const { return completion_ != nullptr; }
    bool needs_lanes() const { return map_ || completion_; }
    nn::ParamStore<float>& store() { return store_; }

    /// Validation error in the paper's sense: association error for the Re-ID
    /// branches, ADE (meters, refined head) for completion.
    double val_error(const Sample& sample) const {
        nn::Graph<float> g;
        nn::Binder<float> p(g, const_cast<Trainer*>(this)->store_, false);
        if (!is_completion()) {
            const LaneGraph* graph = map_ ? &sample.scene->lane_graph : nullptr;
            const reid::ReidInputs in = reid::build_reid_inputs(sample.s, graph, cfg_.model, 0.0);
            if (in.futures.empty()) return std::numeric_limits<double>::quiet_NaN();
            nn::Var<float> scores = motion_ ? motion_->forward(p, in) : map_->forward(p, in);
            const auto& v = scores.value();
            long best = 0;
            for (long r = 1; r < v.rows(); ++r)
                if (v(r, 0) > v(best, 0)) best = r;
            return best == sample.s.gt_match_index ? 0.0 : 1.0;
        }
        if (sample.s.masked_gt.empty()) return std::numeric_limits<double>::quiet_NaN();
        const completion::CompletionInputs in = completion::build_completion_inputs(
            sample.s.history, sample.s.gt_future(), &sample.scene->lane_graph, cfg_.model,
            sample.s.sample_rate, 0.0);
        if (in.queries.rows() != static_cast<long>(sample.s.masked_gt.size()))
            return std::numeric_limits<double>::quiet_NaN();
        const auto initial = completion_->decode_initial(p, in);
        const auto refined = completion_->refine(p, in, initial);
        const std::vector<Pose2D> gt = local_targets(sample.s.masked_gt, in.frame);
        const auto& xy = refined.xy.value();
        double sum = 0.0;
        for (long r = 0; r < xy.rows(); ++r)
            sum += std::hypot(static_cast<double>(xy(r, 0)) - gt[static_cast<std::size_t>(r)].x,
                              static_cast<double>(xy(r, 1)) - gt[static_cast<std::size_t>(r)].y);
        return sum / static_cast<double>(xy.rows());
    }

    /// Loss of one sample; returns an invalid Var for degenerate samples.
    nn::Var<float> sample_loss(nn::Binder<float>& p, const Sample& sample, double jitter) const {
        if (!is_completion()) {
            const LaneGraph* graph = map_ ? &sample.scene->lane_graph : nullptr;
            const reid::ReidInputs in = reid::build_reid_inputs(sample.s, graph, cfg_.model, jitter);
            if (in.futures.empty()) return {};
            nn::Var<float> scores = motion_ ? motion_->forward(p, in) : map_->forward(p, in);
            std::vector<int> labels(sample.s.future_candidates.size(), 0);
            labels[static_cast<std::size_t>(sample.s.gt_match_index)] = 1;
            return reid::focal_loss(scores, labels, 0.5f, 2.0f);
        }
        if (sample.s.masked_gt.empty()) return {};
        const completion::CompletionInputs in = completion::build_completion_inputs(
            sample.s.history, sample.s.gt_future(), &sample.scene->lane_graph, cfg_.model,
            sample.s.sample_rate, jitter);
        if (in.queries.rows() != static_cast<long>(sample.s.masked_gt.size())) return {};
        const auto initial = completion_->decode_initial(p, in);
        const auto refined = completion_->refine(p, in, initial);
        const std::vector<Pose2D> gt = local_targets(sample.s.masked_gt, in.frame);
        return completion::completion_loss(initial.xy, initial.theta, refined.xy, refined.theta,
                                           gt);
    }

private:
    const RunConfig& cfg_;
    std::string model_;
    nn::ParamStore<float> store_;
    std::unique_ptr<reid::MotionNet<float>> motion_;
    std::unique_ptr<reid::MapNet<float>> map_;
    std::unique_ptr<completion::CompletionNet<float>> completion_;
};

double mean_val_loss(const Trainer& trainer, nn::ParamStore<float>& store,
                     const std::vector<Sample>& val) {
    double sum = 0.0;
    long n = 0;
    for (const Sample& s : val) {
        nn::Graph<float> g;
        nn::Binder<float> p(g, store, false);
        nn::Var<float> loss = trainer.sample_loss(p, s, 0.0);
        if (!loss.valid()) continue;
        sum += static_cast<double>(loss.value()(0, 0));
        ++n;
    }
    return n > 0 ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

double mean_val_error(const Trainer& trainer, const std::vector<Sample>& val) {
    double sum = 0.0;
    long n = 0;
    for (const Sample& s : val) {
        const double e = trainer.val_error(s);
        if (!std::isfinite(e)) continue;
        sum += e;
        ++n;
    }
    return n > 0 ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

TrainResult train_model(const RunConfig& cfg, const std::string& model,
                        const std::vector<synth::SceneRecord>& scenes,
                        const std::string& out_path, const std::string& resume_path,
                        std::ostream& log) {
    if (scenes.empty()) throw std::invalid_argument("train: no scenes");
    Trainer trainer(cfg, model);

    int start_epoch = 0;
    if (!resume_path.empty()) {
        const nn::CheckpointMeta meta = nn::load_checkpoint(trainer.store(), resume_path);
        if (meta.model != model)
            throw std::invalid_argument("train: resume checkpoint is for model " + meta.model);
        if (meta.config_hash != cfg.model_hash())
            throw std::invalid_argument("train: resume checkpoint/config hash mismatch");
        start_epoch = meta.epoch + 1;
    }

    // deterministic scene split: tail fraction is validation
    const int n_val = std::min<int>(static_cast<int>(scenes.size()) - 1,
                                    std::max(1, static_cast<int>(std::lround(
                                                    scenes.size() * cfg.training.val_fraction))));
    std::vector<const synth::SceneRecord*> train_scenes, val_scenes;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        if (i + static_cast<std::size_t>(n_val) >= scenes.size())
            val_scenes.push_back(&scenes[i]);
        else
            train_scenes.push_back(&scenes[i]);
    }

    const std::vector<Sample> val =
        make_samples(val_scenes, cfg.occlusion, Rng::derive(cfg.seed, kValSalt),
                     trainer.is_completion());

    TrainResult result;
    result.checkpoint_path = out_path;
    result.last_path = out_path + ".last.json";
    result.best_val = std::numeric_limits<double>::infinity();

    for (int epoch = start_epoch; epoch < cfg.training.epochs; ++epoch) {
        const std::uint64_t epoch_seed = Rng::derive(cfg.seed, kEpochSalt + static_cast<std::uint64_t>(epoch));
        std::vector<Sample> samples =
            make_samples(train_scenes, cfg.occlusion, epoch_seed, trainer.is_completion());
        Rng shuffle(Rng::derive(epoch_seed, 0x5EED));
        for (std::size_t i = samples.size(); i > 1; --i)
            std::swap(samples[i - 1],
                      samples[static_cast<std::size_t>(shuffle.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
        if (cfg.training.max_train_samples > 0 &&
            static_cast<int>(samples.size()) > cfg.training.max_train_samples)
            samples.resize(static_cast<std::size_t>(cfg.training.max_train_samples));

        nn::AdamWConfig opt;
        opt.lr = nn::decayed_lr(cfg.training.lr, cfg.training.decay_factor(model),
                                cfg.training.decay_every, epoch);
        opt.weight_decay = cfg.training.weight_decay;

        double epoch_loss = 0.0;
        long epoch_n = 0;
        std::size_t i = 0;
        int batch_idx = 0;
        while (i < samples.size()) {
            const std::size_t end = std::min(samples.size(), i + static_cast<std::size_t>(cfg.training.batch_size));
            std::map<std::string, nn::DenseMat<float>> grad_sum;
            double batch_loss = 0.0;
            int batch_n = 0;
            for (std::size_t k = i; k < end; ++k) {
                Sample aug = samples[k];
                aug.s = synth::augment_sample(samples[k].s, Rng::derive(epoch_seed, 0xA000 + k),
                                              cfg.training.rot_range, cfg.training.noise);
                Rng jr(Rng::derive(epoch_seed, 0xF000 + k));
                const double jitter = jr.uniform(-cfg.training.frame_jitter, cfg.training.frame_jitter);

                nn::Graph<float> g;
                nn::Binder<float> p(g, trainer.store(), true);
                nn::Var<float> loss = trainer.sample_loss(p, aug, jitter);
                if (!loss.valid()) continue;
                const double lv = static_cast<double>(loss.value()(0, 0));
                if (!std::isfinite(lv))
                    throw std::runtime_error("train: non-finite loss in epoch " +
                                             std::to_string(epoch) + " batch " +
                                             std::to_string(batch_idx) + " (" + model + ")");
                g.backward(loss);
                for (auto& [name, grad] : p.grads()) {
                    auto it = grad_sum.find(name);
                    if (it == grad_sum.end())
                        grad_sum.emplace(name, grad);
                    else
                        it->second += grad;
                }
                batch_loss += lv;
                ++batch_n;
            }
            if (batch_n > 0) {
                const float inv = 1.0f / static_cast<float>(batch_n);
                for (auto& [name, grad] : grad_sum) grad *= inv;
                nn::adamw_step(trainer.store(), grad_sum, opt);
                epoch_loss += batch_loss;
                epoch_n += batch_n;
            }
            i = end;
            ++batch_idx;
        }

        const double train_loss = epoch_n > 0 ? epoch_loss / static_cast<double>(epoch_n)
                                              : std::numeric_limits<double>::quiet_NaN();
        const double val_loss = mean_val_loss(trainer, trainer.store(), val);
        const double val_error = mean_val_error(trainer, val);
        result.log.push_back({epoch, opt.lr, train_loss, val_loss, val_error});
        log << "epoch " << epoch << " lr " << opt.lr << " train_loss " << train_loss
            << " val_loss " << val_loss << " val_error " << val_error << " samples " << epoch_n
            << "\n";
        log.flush();

        nn::CheckpointMeta meta{model, cfg.model_hash(), epoch, val_loss};
        if (std::isfinite(val_error) && val_error < result.best_val) {
            result.best_val = val_error;
            result.best_epoch = epoch;
            nn::save_checkpoint(trainer.store(), meta, out_path);
        }
        nn::save_checkpoint(trainer.store(), meta, result.last_path);
    }
    if (result.best_epoch < 0) {
        // no finite validation loss ever seen; persist the last state
        nn::CheckpointMeta meta{model, cfg.model_hash(), cfg.training.epochs - 1, 0.0};
        nn::save_checkpoint(trainer.store(), meta, out_path);
    }
    return result;
}

}  // namespace otk::train
