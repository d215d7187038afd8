// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 otk contributors

#include "otk/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "otk/core/geometry.hpp"

namespace otk::eval {
namespace {

void require_aligned(const std::vector<std::vector<Pose2D>>& pred,
                     const std::vector<std::vector<Pose2D>>& gt, const char* what) {
    if (pred.size() != gt.size())
        throw std::invalid_argument(std::string(what) + ": sample count mismatch");
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (pred[i].size() != gt[i].size())
            throw std::invalid_argument(std::string(what) + ": trajectory length mismatch");
}

long time_key(double t) { return std::llround(t * 1000.0); }

}  // namespace

double association_accuracy(const std::vector<std::optional<int>>& predictions,
                            const std::vector<int>& gt_indices) {
    if (predictions.size() != gt_indices.size())
        throw std::invalid_argument("association_accuracy: size mismatch");
    if (predictions.empty()) throw std::invalid_argument("association_accuracy: empty input");
    int correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions[i].has_value() && *predictions[i] == gt_indices[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double ade(const std::vector<std::vector<Pose2D>>& pred,
           const std::vector<std::vector<Pose2D>>& gt) {
    require_aligned(pred, gt, "ade");
    double sum = 0.0;
    long n = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        for (std::size_t k = 0; k < pred[i].size(); ++k) {
            sum += std::hypot(pred[i][k].x - gt[i][k].x, pred[i][k].y - gt[i][k].y);
            ++n;
        }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

double yaw_error_deg(const std::vector<std::vector<Pose2D>>& pred,
                     const std::vector<std::vector<Pose2D>>& gt) {
    require_aligned(pred, gt, "yaw_error");
    double sum = 0.0;
    long n = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        for (std::size_t k = 0; k < pred[i].size(); ++k) {
            sum += std::abs(wrap_angle(pred[i][k].theta - gt[i][k].theta));
            ++n;
        }
    return n > 0 ? (sum / static_cast<double>(n)) * 180.0 / kPi : 0.0;
}

double miss_rate(const std::vector<std::vector<Pose2D>>& pred,
                 const std::vector<std::vector<Pose2D>>& gt, double threshold) {
    require_aligned(pred, gt, "miss_rate");
    if (pred.empty()) return 0.0;
    int missed = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double worst = 0.0;
        for (std::size_t k = 0; k < pred[i].size(); ++k)
            worst = std::max(worst,
                             std::hypot(pred[i][k].x - gt[i][k].x, pred[i][k].y - gt[i][k].y));
        if (worst > threshold) ++missed;
    }
    return static_cast<double>(missed) / static_cast<double>(pred.size());
}

TrackingQuality ids_and_recall(const std::vector<Tracklet>& pred_tracks,
                               const std::vector<Tracklet>& gt_tracks, double match_radius) {
    struct Box {
        int track;
        double x, y;
    };
    std::map<long, std::vector<Box>> gt_frames, pred_frames;
    for (int i = 0; i < static_cast<int>(gt_tracks.size()); ++i)
        for (const Observation& o : gt_tracks[static_cast<std::size_t>(i)].obs)
            gt_frames[time_key(o.t)].push_back({i, o.x, o.y});
    for (int i = 0; i < static_cast<int>(pred_tracks.size()); ++i)
        for (const Observation& o : pred_tracks[static_cast<std::size_t>(i)].obs)
            pred_frames[time_key(o.t)].push_back({i, o.x, o.y});

    TrackingQuality q;
    // per GT track: time-ordered matched predicted ids
    std::map<int, std::vector<int>> matched_ids;
    for (const auto& [t, gts] : gt_frames) {
        q.total_gt_boxes += static_cast<int>(gts.size());
        auto it = pred_frames.find(t);
        if (it == pred_frames.end()) continue;
        const auto& preds = it->second;

        struct Cand {
            double d;
            int gi, pi;
        };
        std::vector<Cand> cands;
        for (int gi = 0; gi < static_cast<int>(gts.size()); ++gi)
            for (int pi = 0; pi < static_cast<int>(preds.size()); ++pi) {
                const double d = std::hypot(gts[static_cast<std::size_t>(gi)].x - preds[static_cast<std::size_t>(pi)].x,
                                            gts[static_cast<std::size_t>(gi)].y - preds[static_cast<std::size_t>(pi)].y);
                if (d < match_radius) cands.push_back({d, gi, pi});
            }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.d != b.d) return a.d < b.d;
            if (a.gi != b.gi) return a.gi < b.gi;
            return a.pi < b.pi;
        });
        std::vector<bool> g_used(gts.size(), false), p_used(preds.size(), false);
        for (const Cand& c : cands) {
            if (g_used[static_cast<std::size_t>(c.gi)] || p_used[static_cast<std::size_t>(c.pi)])
                continue;
            g_used[static_cast<std::size_t>(c.gi)] = true;
            p_used[static_cast<std::size_t>(c.pi)] = true;
            ++q.matched_gt_boxes;
            matched_ids[gts[static_cast<std::size_t>(c.gi)].track].push_back(
                preds[static_cast<std::size_t>(c.pi)].track);
        }
    }
    for (const auto& [track, ids] : matched_ids)
        for (std::size_t k = 1; k < ids.size(); ++k)
            if (ids[k] != ids[k - 1]) ++q.ids;
    q.recall = q.total_gt_boxes > 0
                   ? static_cast<double>(q.matched_gt_boxes) / static_cast<double>(q.total_gt_boxes)
                   : 0.0;
    return q;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j{{"schema_version", 1},
                     {"ade_m", ade},
                     {"yaw_error_deg", yaw_error_deg},
                     {"miss_rate", miss_rate},
                     {"ids", ids},
                     {"recall", recall},
                     {"n_samples", n_samples},
                     {"n_association", n_association},
                     {"n_recovered_segments", n_recovered_segments},
                     {"n_gt_boxes", n_gt_boxes}};
    if (association_accuracy.has_value())
        j["association_accuracy"] = *association_accuracy;
    else
        j["association_accuracy"] = nullptr;
    return j;
}

std::string EvalReport::to_text() const {
    std::ostringstream os;
    os << "metric                 value\n";
    os << "---------------------  ----------\n";
    char buf[64];
    auto line = [&](const char* name, double v) {
        std::snprintf(buf, sizeof(buf), "%-22s %.6g\n", name, v);
        os << buf;
    };
    if (association_accuracy.has_value())
        line("association_accuracy", *association_accuracy);
    else
        os << "association_accuracy   n/a\n";
    line("ade_m", ade);
    line("yaw_error_deg", yaw_error_deg);
    line("miss_rate", miss_rate);
    line("ids", static_cast<double>(ids));
    line("recall", recall);
    line("n_samples", static_cast<double>(n_samples));
    line("n_association", static_cast<double>(n_association));
    line("n_recovered_segments", static_cast<double>(n_recovered_segments));
    line("n_gt_boxes", static_cast<double>(n_gt_boxes));
    return os.str();
}

}  // namespace otk::eval
