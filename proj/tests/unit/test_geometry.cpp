#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <limits>

#include "otk/common/rng.hpp"
#include "otk/core/features.hpp"
#include "otk/core/geometry.hpp"

using namespace otk;

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
    CHECK(wrap_angle(3.0 * kPi / 2.0) == doctest::Approx(-kPi / 2.0));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
    CHECK_THROWS_AS(wrap_angle(std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST_CASE("wrap_angle is idempotent and 2pi-periodic") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(-50.0, 50.0);
        const double w = wrap_angle(a);
        CHECK(w > -kPi);
        CHECK(w <= kPi);
        CHECK(wrap_angle(w) == doctest::Approx(w).epsilon(1e-12));
        const int k = static_cast<int>(rng.uniform_int(-3, 3));
        CHECK(wrap_angle(a + k * kTwoPi) == doctest::Approx(w).epsilon(1e-9));
    }
}

TEST_CASE("to_local_frame fixes the origin and matches a rotation-matrix oracle") {
    const Pose2D origin{0.0, 0.0, kPi / 2.0};
    const Pose2D same = to_local_frame(origin, origin);
    CHECK(same.x == doctest::Approx(0.0));
    CHECK(same.y == doctest::Approx(0.0));
    CHECK(same.theta == doctest::Approx(0.0));

    const Pose2D p = to_local_frame({0.0, 1.0, kPi / 2.0}, origin);
    CHECK(p.x == doctest::Approx(1.0));
    CHECK(p.y == doctest::Approx(0.0));
    CHECK(p.theta == doctest::Approx(0.0));

    // independent oracle: R(-theta0) * (p - t0)
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const Pose2D o{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-kPi, kPi)};
        const Pose2D q{rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-kPi, kPi)};
        const Eigen::Vector2d expect =
            Eigen::Rotation2Dd(-o.theta) * Eigen::Vector2d(q.x - o.x, q.y - o.y);
        const Pose2D got = to_local_frame(q, o);
        CHECK(got.x == doctest::Approx(expect.x()).epsilon(1e-12));
        CHECK(got.y == doctest::Approx(expect.y()).epsilon(1e-12));
    }
}

TEST_CASE("from_local_frame is the exact inverse") {
    const Pose2D back = from_local_frame({1.0, 0.0, 0.0}, {1.0, 1.0, kPi});
    CHECK(back.x == doctest::Approx(0.0));
    CHECK(back.y == doctest::Approx(1.0));
    CHECK(back.theta == doctest::Approx(kPi));

    const Pose2D o{2.0, -3.0, 0.7};
    const Pose2D round = from_local_frame(to_local_frame({0.0, 0.0, 0.0}, o), o);
    CHECK(round.x == doctest::Approx(0.0).epsilon(1e-12));

    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const Pose2D origin{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-kPi, kPi)};
        const Pose2D p{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-kPi, kPi)};
        const Pose2D rt = from_local_frame(to_local_frame(p, origin), origin);
        CHECK(std::abs(rt.x - p.x) < 1e-9);
        CHECK(std::abs(rt.y - p.y) < 1e-9);
        CHECK(std::abs(wrap_angle(rt.theta - p.theta)) < 1e-9);
    }
}

namespace {
Tracklet make_tracklet(std::initializer_list<Observation> obs) {
    Tracklet t;
    t.id = "t";
    t.obs = obs;
    return t;
}
}  // namespace

TEST_CASE("tracklet_features single observation at the origin") {
    Observation o;
    o.t = 4.0;
    o.x = 2.0;
    o.y = -1.0;
    o.theta = 0.3;
    o.vx = 3.0;
    o.vy = 1.0;
    const Tracklet trk = make_tracklet({o});
    const TrackletFeatures f = tracklet_features(trk, o.pose(), o.t, true);
    REQUIRE(f.rows() == 1);
    REQUIRE(f.width() == 8);
    CHECK(f.matrix(0, 0) == doctest::Approx(0.0));
    CHECK(f.matrix(0, 1) == doctest::Approx(0.0));
    CHECK(f.matrix(0, 2) == doctest::Approx(0.0));
    CHECK(f.matrix(0, 3) == doctest::Approx(0.0));
    CHECK(f.matrix(0, 4) == doctest::Approx(1.0));
    CHECK(f.matrix(0, 5) == doctest::Approx(0.0));
    // velocity rotated into the frame
    const Eigen::Vector2d v = Eigen::Rotation2Dd(-o.theta) * Eigen::Vector2d(o.vx, o.vy);
    CHECK(f.matrix(0, 6) == doctest::Approx(v.x()));
    CHECK(f.matrix(0, 7) == doctest::Approx(v.y()));
}

TEST_CASE("tracklet_features narrow variant drops velocity columns") {
    Observation o;
    o.t = 1.0;
    const TrackletFeatures f = tracklet_features(make_tracklet({o}), {0, 0, 0}, 0.0, false);
    CHECK(f.width() == 6);
}

TEST_CASE("tracklet_features matches the 2x2 rotation oracle") {
    Observation o;
    o.x = 3.0;
    o.y = 4.0;
    o.theta = 0.0;
    const Pose2D origin{0.0, 0.0, kPi / 2.0};
    const TrackletFeatures f = tracklet_features(make_tracklet({o}), origin, 0.0, true);
    const Eigen::Vector2d expect = Eigen::Rotation2Dd(-origin.theta) * Eigen::Vector2d(3.0, 4.0);
    CHECK(f.matrix(0, 0) == doctest::Approx(expect.x()));  // 4
    CHECK(f.matrix(0, 1) == doctest::Approx(expect.y()));  // -3
    CHECK(f.matrix(0, 0) == doctest::Approx(4.0));
    CHECK(f.matrix(0, 1) == doctest::Approx(-3.0));
    CHECK(f.matrix(0, 2) == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("tracklet_features preserves pairwise distances and unit cos/sin") {
    Rng rng(13);
    Tracklet trk;
    trk.id = "r";
    for (int i = 0; i < 12; ++i) {
        Observation o;
        o.t = i * 0.5;
        o.x = rng.uniform(-30, 30);
        o.y = rng.uniform(-30, 30);
        o.theta = rng.uniform(-kPi, kPi);
        trk.obs.push_back(o);
    }
    const Pose2D origin{rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-kPi, kPi)};
    const TrackletFeatures f = tracklet_features(trk, origin, 0.0, true);
    for (int i = 0; i < f.rows(); ++i) {
        const double c = f.matrix(i, 4), s = f.matrix(i, 5);
        CHECK(std::abs(c * c + s * s - 1.0) < 1e-9);
        for (int j = i + 1; j < f.rows(); ++j) {
            const double dg = std::hypot(trk.obs[i].x - trk.obs[j].x, trk.obs[i].y - trk.obs[j].y);
            const double dl = std::hypot(f.matrix(i, 0) - f.matrix(j, 0),
                                         f.matrix(i, 1) - f.matrix(j, 1));
            CHECK(dl == doctest::Approx(dg).epsilon(1e-9));
        }
    }
    CHECK_THROWS_AS(tracklet_features(Tracklet{}, origin, 0.0, true), std::invalid_argument);
}
