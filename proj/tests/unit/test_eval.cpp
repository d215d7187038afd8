#include <doctest.h>

#include <cmath>

#include "otk/common/rng.hpp"
#include "otk/core/geometry.hpp"
#include "otk/eval/metrics.hpp"

using namespace otk;
using namespace otk::eval;

namespace {
Tracklet line_track(const std::string& id, double t0, double t1, double y, double v = 10.0) {
    Tracklet trk;
    trk.id = id;
    for (double t = t0; t <= t1 + 1e-9; t += 0.5) {
        Observation o;
        o.t = t;
        o.x = v * t;
        o.y = y;
        trk.obs.push_back(o);
    }
    return trk;
}
}  // namespace

TEST_CASE("association accuracy counts exact matches; none counts as wrong") {
    CHECK(association_accuracy({0, 1, 2}, {0, 1, 2}) == doctest::Approx(1.0));
    CHECK(association_accuracy({0, 9}, {0, 1}) == doctest::Approx(0.5));
    CHECK(association_accuracy({std::nullopt, 1}, {0, 1}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(association_accuracy({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(association_accuracy({1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("ade basics") {
    const std::vector<std::vector<Pose2D>> gt = {{{0, 0, 0}, {1, 0, 0}}, {{5, 5, 0}}};
    CHECK(ade(gt, gt) == doctest::Approx(0.0));
    std::vector<std::vector<Pose2D>> off = gt;
    for (auto& trk : off)
        for (auto& p : trk) p.y += 1.0;
    CHECK(ade(off, gt) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ade({{{0, 0, 0}}}, gt), std::invalid_argument);
}

TEST_CASE("yaw error in degrees with wrapping") {
    const std::vector<std::vector<Pose2D>> gt = {{{0, 0, 0.1}, {0, 0, -3.1}}};
    CHECK(yaw_error_deg(gt, gt) == doctest::Approx(0.0));
    std::vector<std::vector<Pose2D>> off = gt;
    for (auto& p : off[0]) p.theta = wrap_angle(p.theta + kPi / 2.0);
    CHECK(yaw_error_deg(off, gt) == doctest::Approx(90.0).epsilon(1e-9));
}

TEST_CASE("miss rate counts trajectories with excursions beyond the threshold") {
    std::vector<std::vector<Pose2D>> gt(4, std::vector<Pose2D>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    std::vector<std::vector<Pose2D>> pred = gt;
    pred[2][1].y = 3.0;  // one 3 m excursion
    CHECK(miss_rate(pred, gt, 2.0) == doctest::Approx(0.25));
    CHECK(miss_rate(gt, gt, 2.0) == doctest::Approx(0.0));
    // monotone non-increasing in the threshold
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::vector<Pose2D>> p2 = gt, g2 = gt;
        for (auto& trk : p2)
            for (auto& q : trk) {
                q.x += rng.uniform(-3, 3);
                q.y += rng.uniform(-3, 3);
            }
        double prev = 1.0;
        for (double thr : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            const double mr = miss_rate(p2, g2, thr);
            CHECK(mr <= prev + 1e-12);
            prev = mr;
        }
    }
}

TEST_CASE("ids_and_recall on identical tracks is perfect") {
    const std::vector<Tracklet> gt = {line_track("a", 0, 10, 0.0), line_track("b", 0, 10, 10.0)};
    const TrackingQuality q = ids_and_recall(gt, gt, 2.0);
    CHECK(q.ids == 0);
    CHECK(q.recall == doctest::Approx(1.0));
    CHECK(q.total_gt_boxes == 42);
}

TEST_CASE("splitting one GT track into two predicted ids costs one IDS") {
    const std::vector<Tracklet> gt = {line_track("g", 0, 10, 0.0)};
    Tracklet head = line_track("p1", 0, 5, 0.0);
    Tracklet tail = line_track("p2", 5.5, 10, 0.0);
    const TrackingQuality q = ids_and_recall({head, tail}, gt, 2.0);
    CHECK(q.ids == 1);
    CHECK(q.recall == doctest::Approx(1.0));
}

TEST_CASE("re-joining a fragmented track removes the IDS and recovers recall") {
    // GT: one track over [0, 10]; fragmented input drops (4.0, 7.0)
    const std::vector<Tracklet> gt = {line_track("g", 0, 10, 0.0)};
    Tracklet head = line_track("f1", 0, 4, 0.0);
    Tracklet tail = line_track("f2", 7, 10, 0.0);

    const TrackingQuality broken = ids_and_recall({head, tail}, gt, 2.0);
    CHECK(broken.ids == 1);
    CHECK(broken.recall < 1.0);  // gap boxes unmatched

    // joined: one id covering the full grid (gap filled exactly on the line)
    const TrackingQuality fixed = ids_and_recall({line_track("joined", 0, 10, 0.0)}, gt, 2.0);
    CHECK(fixed.ids == 0);
    CHECK(fixed.recall == doctest::Approx(1.0));
    CHECK(fixed.ids < broken.ids);
    CHECK(fixed.recall >= broken.recall);
}

TEST_CASE("metrics are invariant under sample reordering") {
    Rng rng(8);
    std::vector<std::vector<Pose2D>> pred, gt;
    for (int i = 0; i < 6; ++i) {
        std::vector<Pose2D> p, g;
        for (int k = 0; k < 5; ++k) {
            g.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-kPi, kPi)});
            p.push_back({g.back().x + rng.uniform(-2, 2), g.back().y + rng.uniform(-2, 2),
                         wrap_angle(g.back().theta + rng.uniform(-0.3, 0.3))});
        }
        pred.push_back(p);
        gt.push_back(g);
    }
    const double a0 = ade(pred, gt), y0 = yaw_error_deg(pred, gt), m0 = miss_rate(pred, gt, 2.0);
    std::vector<std::vector<Pose2D>> pred_r(pred.rbegin(), pred.rend());
    std::vector<std::vector<Pose2D>> gt_r(gt.rbegin(), gt.rend());
    CHECK(ade(pred_r, gt_r) == doctest::Approx(a0).epsilon(1e-12));
    CHECK(yaw_error_deg(pred_r, gt_r) == doctest::Approx(y0).epsilon(1e-12));
    CHECK(miss_rate(pred_r, gt_r, 2.0) == doctest::Approx(m0).epsilon(1e-12));
}

TEST_CASE("EvalReport JSON matches the text table values") {
    EvalReport r;
    r.association_accuracy = 0.875;
    r.ade = 0.5;
    r.yaw_error_deg = 2.25;
    r.miss_rate = 0.125;
    r.ids = 3;
    r.recall = 0.9;
    r.n_samples = 7;
    const nlohmann::json j = r.to_json();
    CHECK(j["association_accuracy"].get<double>() == doctest::Approx(0.875));
    CHECK(j["ade_m"].get<double>() == doctest::Approx(0.5));
    CHECK(j["ids"].get<int>() == 3);
    const std::string text = r.to_text();
    CHECK(text.find("0.875") != std::string::npos);
    CHECK(text.find("2.25") != std::string::npos);
    CHECK(text.find("0.9") != std::string::npos);

    EvalReport none;
    CHECK(none.to_json()["association_accuracy"].is_null());
    CHECK(none.to_text().find("n/a") != std::string::npos);
}
