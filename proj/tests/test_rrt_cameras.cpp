#include <gtest/gtest.h>

#include <cmath>

#include "procgen/cameras.hpp"
#include "procgen/rrt.hpp"
#include "procgen/scene.hpp"

using namespace procgen;

namespace {

RrtParams default_params(std::uint64_t seed) {
    RrtParams p;
    p.bounds.expand({-1, -1, -1});
    p.bounds.expand({5, 5, 3});
    p.step = 0.4;
    p.goal_bias = 0.1;
    p.max_iters = 5000;
    p.seed = seed;
    return p;
}

bool always_free(const Vec3&) { return true; }

}  // namespace

TEST(RrtStar, StartEqualsGoal) {
    const RrtResult r = rrt_star({1, 1, 1}, {1, 1, 1}, always_free, default_params(1));
    ASSERT_EQ(r.path.size(), 1u);
    EXPECT_EQ(r.cost, 0.0);
}

TEST(RrtStar, EmptyRoomNearOptimal) {
    const Vec3 start{0, 0, 1}, goal{4, 0, 1};
    const double straight = distance(start, goal);
    int good = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const RrtResult r = rrt_star(start, goal, always_free, default_params(seed));
        if (r.cost <= straight * 1.1) ++good;
    }
    EXPECT_GE(good, 19);
}

TEST(RrtStar, BestCostTraceNonIncreasing) {
    const RrtResult r = rrt_star({0, 0, 1}, {4, 4, 1}, always_free, default_params(3));
    bool seen_finite = false;
    for (std::size_t i = 1; i < r.best_cost_trace.size(); ++i) {
        EXPECT_LE(r.best_cost_trace[i], r.best_cost_trace[i - 1] + 1e-12);
        if (std::isfinite(r.best_cost_trace[i])) seen_finite = true;
    }
    EXPECT_TRUE(seen_finite);
}

TEST(RrtStar, PathThreadsDoorway) {
    // A wall at x = 2 blocked except a 1 m doorway centered at y = 2, z = 1.
    auto free = [](const Vec3& p) {
        if (std::fabs(p.x - 2.0) < 0.2) {
            const bool in_door = p.y > 1.5 && p.y < 2.5 && p.z > 0.4 && p.z < 1.6;
            return in_door;
        }
        return true;
    };
    RrtParams params = default_params(5);
    params.bounds = Aabb{};
    params.bounds.expand({0, 0, 0});
    params.bounds.expand({4, 4, 2});
    params.max_iters = 20000;
    const RrtResult r = rrt_star({0.5, 2, 1}, {3.5, 2, 1}, free, params);

    // Every crossing of the wall plane must lie inside the opening.
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
        const Vec3 a = r.path[i], b = r.path[i + 1];
        if ((a.x - 2.0) * (b.x - 2.0) < 0.0) {
            const double t = (2.0 - a.x) / (b.x - a.x);
            const Vec3 cross_point = a + (b - a) * t;
            EXPECT_GT(cross_point.y, 1.5);
            EXPECT_LT(cross_point.y, 2.5);
            EXPECT_GT(cross_point.z, 0.4);
            EXPECT_LT(cross_point.z, 1.6);
        }
    }
}

TEST(RrtStar, SegmentsPassDenseValidation) {
    // The free oracle itself re-checks every returned segment at step/10.
    auto free = [](const Vec3& p) { return p.z > 0.0; };
    RrtParams params = default_params(7);
    params.bounds = Aabb{};
    params.bounds.expand({0, 0, 0.1});
    params.bounds.expand({4, 4, 2});
    const RrtResult r = rrt_star({0.5, 0.5, 1}, {3.5, 3.5, 1}, free, params);
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i)
        EXPECT_TRUE(segment_free(free, r.path[i], r.path[i + 1], params.step));
}

TEST(RrtStar, NoPathFoundWithinBudget) {
    auto blocked = [](const Vec3& p) { return p.x < 1.0 || p.x > 3.0; };
    RrtParams params = default_params(9);
    params.max_iters = 300;
    params.bounds = Aabb{};
    params.bounds.expand({0, 0, 0});
    params.bounds.expand({4, 4, 2});
    try {
        rrt_star({0.5, 2, 1}, {3.5, 2, 1}, blocked, params);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::no_path_found);
    }
}

TEST(RrtStar, CollisionFreeEndpointsRequired) {
    auto free = [](const Vec3& p) { return p.x > 0.0; };
    EXPECT_THROW(rrt_star({-1, 0, 0}, {1, 0, 0}, free, default_params(11)), Error);
}

TEST(CircularRig, FourAzimuths) {
    const auto cams = circular_rig({0, 0, 1}, 2.0, 4, {0, 0, 1});
    ASSERT_EQ(cams.size(), 4u);
    EXPECT_NEAR(cams[0].position.x, 2.0, 1e-12);
    EXPECT_NEAR(cams[0].position.y, 0.0, 1e-12);
    EXPECT_NEAR(cams[1].position.x, 0.0, 1e-12);
    EXPECT_NEAR(cams[1].position.y, 2.0, 1e-12);
    EXPECT_NEAR(cams[2].position.x, -2.0, 1e-12);
    EXPECT_NEAR(cams[3].position.y, -2.0, 1e-12);
    for (const CameraSpec& c : cams) EXPECT_EQ(c.look_at, (Vec3{0, 0, 1}));
}

TEST(RandomCameras, CollisionFreeAndSeeded) {
    RandomStream s1 = RandomStream::root(21);
    RandomStream s2 = RandomStream::root(21);
    Aabb box;
    box.expand({0, 0, 0});
    box.expand({4, 4, 2});
    auto free = [](const Vec3& p) { return p.x > 1.0; };
    const auto a = random_cameras(s1, box, 8, free);
    const auto b = random_cameras(s2, box, 8, free);
    ASSERT_EQ(a.size(), 8u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_GT(a[i].position.x, 1.0);
        EXPECT_EQ(a[i].position, b[i].position);  // reproducible from seed
    }
}

TEST(RandomCameras, PlacementExhausted) {
    RandomStream s = RandomStream::root(22);
    Aabb box;
    box.expand({0, 0, 0});
    box.expand({1, 1, 1});
    auto never = [](const Vec3&) { return false; };
    try {
        random_cameras(s, box, 1, never);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::placement_exhausted);
    }
}

TEST(StereoCameras, BaselineAndParallelDirections) {
    RandomStream s = RandomStream::root(23);
    Aabb box;
    box.expand({0, 0, 0});
    box.expand({4, 4, 2});
    const auto cams = random_cameras(s, box, 5, always_free, 0.12);
    for (const CameraSpec& left : cams) {
        ASSERT_GT(left.stereo_baseline, 0.0);
        const CameraSpec right = stereo_partner(left);
        EXPECT_NEAR(distance(left.position, right.position), 0.12, 1e-12);
        const Vec3 df = left.forward() - right.forward();
        EXPECT_NEAR(df.length(), 0.0, 1e-12);
    }
}

TEST(PathCameras, SpacingAndLookAhead) {
    const std::vector<Vec3> path{{0, 0, 1}, {4, 0, 1}};
    const auto cams = path_to_cameras(path, 1.0, 1.0);
    ASSERT_EQ(cams.size(), 5u);  // arc length 4, spacing 1: s = 0..4
    for (std::size_t i = 0; i < cams.size(); ++i) {
        EXPECT_NEAR(cams[i].position.x, static_cast<double>(i), 1e-12);
        // Look-ahead clamps at the end of the path but never degenerates.
        EXPECT_GT(distance(cams[i].position, cams[i].look_at), 1e-9);
        if (i + 1 < cams.size())
            EXPECT_NEAR(cams[i].look_at.x, std::min(4.0, static_cast<double>(i) + 1.0), 1e-12);
    }
}

TEST(CameraSpec, Validation) {
    CameraSpec c;
    c.position = {1, 1, 1};
    c.look_at = {1, 1, 1};
    EXPECT_THROW(c.check(), Error);
    c.look_at = {2, 1, 1};
    c.fov_y = 4.0;
    EXPECT_THROW(c.check(), Error);
}
