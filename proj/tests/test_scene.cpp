#include <gtest/gtest.h>

#include <cmath>

#include "procgen/scene.hpp"
#include "procgen/scenegen.hpp"

using namespace procgen;

namespace {

std::shared_ptr<Mesh> unit_cube() { return std::make_shared<Mesh>(make_box(1, 1, 1, 1)); }

// Brute-force collision oracle: all-pairs triangle intersection plus the
// same strictly-inside sampling, with no BVH anywhere.
bool brute_force_collide(const SceneObject& a, const SceneObject& b) {
    std::vector<Triangle> ta, tb;
    auto collect = [](const SceneObject& obj, std::vector<Triangle>& out) {
        for (const auto& f : obj.mesh->faces)
            for (std::size_t c = 1; c + 1 < f.size(); ++c)
                out.push_back({obj.transform.apply(obj.mesh->vertices[f[0]]),
                               obj.transform.apply(obj.mesh->vertices[f[c]]),
                               obj.transform.apply(obj.mesh->vertices[f[c + 1]])});
    };
    collect(a, ta);
    collect(b, tb);
    for (const Triangle& x : ta)
        for (const Triangle& y : tb)
            if (tri_tri_penetrates(x, y)) return true;

    auto naive_inside = [](const std::vector<Triangle>& tris, const Vec3& p) {
        double nearest = 1e300;
        for (const Triangle& t : tris)
            nearest = std::min(nearest, distance(closest_point_on_triangle(p, t), p));
        if (nearest <= kContactEpsilon) return false;
        int winding = 0;
        for (const Triangle& t : tris) {
            double tt, u, v;
            if (ray_triangle(p, kWindingDirection, t, tt, u, v))
                winding += dot(kWindingDirection, cross(t.b - t.a, t.c - t.a)) > 0.0 ? 1 : -1;
        }
        return winding > 0;
    };
    for (const Triangle& t : ta)
        if (naive_inside(tb, (t.a + t.b + t.c) * (1.0 / 3.0))) return true;
    for (const Triangle& t : tb)
        if (naive_inside(ta, (t.a + t.b + t.c) * (1.0 / 3.0))) return true;
    return false;
}

}  // namespace

TEST(Room, FaceCountWithoutWindows) {
    const double w = 4.0, d = 3.0, h = 2.0, q = 1.0;
    const Mesh room = make_room(w, d, h, q);
    // floor + ceiling: 12 each; walls: 8, 6, 8, 6.
    const std::size_t expected = 12 + 12 + 8 + 6 + 8 + 6;
    EXPECT_EQ(room.face_count(), expected);
    EXPECT_TRUE(is_quad_only(room));
}

TEST(Room, WindowKeepsQuadPurity) {
    const Mesh room = make_room(5, 4, 2.6, 0.4, {{0, 1.3, 2.7, 0.9, 1.9}});
    EXPECT_TRUE(is_quad_only(room));
}

// Area bookkeeping oracle: total wall area lost to the cutout equals the
// window area exactly, because grid lines split at the window edges.
TEST(Room, HoleAreaMatchesWindowExactly) {
    const double w = 5.0, d = 4.0, h = 2.6;
    auto wall_area = [](const Mesh& m) {
        double area = 0.0;
        for (const auto& f : m.faces) {
            // Newell magnitude/2 per triangle fan.
            for (std::size_t c = 1; c + 1 < f.size(); ++c) {
                const Vec3 e1 = m.vertices[f[c]] - m.vertices[f[0]];
                const Vec3 e2 = m.vertices[f[c + 1]] - m.vertices[f[0]];
                area += cross(e1, e2).length() / 2.0;
            }
        }
        return area;
    };
    const Mesh solid = make_room(w, d, h, 0.37);
    const WindowRect window{0, 1.23, 2.71, 0.77, 1.93};
    const Mesh cut = make_room(w, d, h, 0.37, {window});
    const double window_area = (window.u1 - window.u0) * (window.v1 - window.v0);
    EXPECT_NEAR(wall_area(solid) - wall_area(cut), window_area, 1e-9);
}

TEST(Room, WindowValidation) {
    EXPECT_THROW(make_room(4, 3, 2.5, 0.5, {{0, -0.5, 1.0, 0.5, 1.5}}), Error);
    EXPECT_THROW(make_room(4, 3, 2.5, 0.5, {{0, 1.0, 9.0, 0.5, 1.5}}), Error);
    try {
        make_room(4, 3, 2.5, 0.5, {{1, 0.5, 1.5, 0.5, 1.5}, {1, 1.0, 2.0, 1.0, 2.0}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::overlapping_windows);
    }
    // Same rects on different walls are fine.
    EXPECT_NO_THROW(make_room(4, 3, 2.5, 0.5, {{1, 0.5, 1.5, 0.5, 1.5}, {2, 0.5, 1.5, 0.5, 1.5}}));
}

TEST(Room, NormalsPointInward) {
    const Mesh room = make_room(4, 3, 2.5, 0.5);
    const Vec3 center{2, 1.5, 1.25};
    for (std::size_t fi = 0; fi < room.faces.size(); ++fi) {
        Vec3 c{0, 0, 0};
        for (std::uint32_t v : room.faces[fi]) c = c + room.vertices[v];
        c = c / static_cast<double>(room.faces[fi].size());
        const Vec3 n = meshdetail::face_normal(room, room.faces[fi]);
        EXPECT_GT(dot(n, center - c), 0.0) << "face " << fi;
    }
}

TEST(Collision, TrivialCubePairs) {
    Scene scene;
    auto cube = unit_cube();
    Transform t0;
    t0.translation = {0, 0, 0};
    Transform t2;
    t2.translation = {2, 0, 0};
    scene.add(SceneObject(cube, t0));
    scene.add(SceneObject(cube, t2));
    EXPECT_TRUE(check_collision(scene, 0).empty());

    // Centers 0.5 m apart: volumes properly overlap.
    scene.objects[1].transform.translation = {0.5, 0, 0};
    const auto pairs = check_collision(scene, 0);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0], (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(Collision, ExactContactIsFree) {
    Scene scene;
    auto cube = unit_cube();
    Transform t0;
    Transform shared_face;
    shared_face.translation = {1.0, 0, 0};  // faces exactly coincide
    scene.add(SceneObject(cube, t0));
    scene.add(SceneObject(cube, shared_face));
    EXPECT_TRUE(check_collision(scene, 0).empty());

    Transform stacked;
    stacked.translation = {0, 0, 1.0};
    scene.objects[1].transform = stacked;
    EXPECT_TRUE(check_collision(scene, 0).empty());
}

TEST(Collision, ContainmentDetected) {
    Scene scene;
    auto big = std::make_shared<Mesh>(make_box(2, 2, 2, 1));
    auto small = std::make_shared<Mesh>(make_box(0.4, 0.4, 0.4, 1));
    scene.add(SceneObject(big, Transform{}));
    scene.add(SceneObject(small, Transform{}));  // fully inside, no crossings
    EXPECT_EQ(check_collision(scene, 1).size(), 1u);
}

TEST(Collision, ColliderCacheSharedByDuplicates) {
    Scene scene;
    auto chair = std::make_shared<Mesh>(make_box(0.5, 0.5, 1.0, 2));
    for (int i = 0; i < 50; ++i) {
        Transform t;
        t.translation = {static_cast<double>(i) * 2.0, 0, 0};
        scene.add(SceneObject(chair, t));
    }
    EXPECT_EQ(scene.colliders.size(), 1u);

    auto table = std::make_shared<Mesh>(make_box(1.2, 0.8, 0.7, 2));
    Transform t;
    t.translation = {0, 5, 0};
    scene.add(SceneObject(table, t));
    EXPECT_EQ(scene.colliders.size(), 2u);
}

TEST(Collision, MatchesBruteForceOnRandomScenes) {
    RandomStream s = RandomStream::root(55);
    auto cube = unit_cube();
    auto slab = std::make_shared<Mesh>(make_box(1.5, 0.4, 0.8, 2));
    auto cyl = std::make_shared<Mesh>(make_cylinder(0.4, 1.0, 12));

    for (int trial = 0; trial < 60; ++trial) {
        Scene scene;
        const int n = 4 + static_cast<int>(randint(s, 4));
        for (int i = 0; i < n; ++i) {
            Transform t;
            t.translation = {uniform(s, -2, 2), uniform(s, -2, 2), uniform(s, -1, 1)};
            t.z_rotation = uniform(s, 0, 6.28);
            t.scale = uniform(s, 0.6, 1.4);
            const int kind = static_cast<int>(randint(s, 3));
            scene.add(SceneObject(kind == 0 ? cube : (kind == 1 ? slab : cyl), t));
        }
        for (std::size_t i = 0; i < scene.objects.size(); ++i) {
            const auto fast = check_collision(scene, i);
            std::vector<std::pair<std::size_t, std::size_t>> slow;
            for (std::size_t j = 0; j < scene.objects.size(); ++j) {
                if (j == i) continue;
                if (brute_force_collide(scene.objects[i], scene.objects[j]))
                    slow.emplace_back(std::min(i, j), std::max(i, j));
            }
            EXPECT_EQ(fast, slow) << "trial " << trial << " object " << i;
        }
    }
}

TEST(Align, BackToWallGapZeroTouchesPlane) {
    Scene scene;
    auto sofa = std::make_shared<Mesh>(make_box(1.8, 0.8, 0.9, 1));
    Transform t;
    t.translation = {2.0, 1.5, 0.45};
    const std::size_t idx = scene.add(SceneObject(sofa, t));
    const Transform aligned = align(scene, idx, 0, AlignRelation::BackToWall, 0.0, 5.0, 4.0);
    const Aabb box = scene.objects[idx].world_aabb();
    EXPECT_NEAR(box.lo.y, 0.0, 1e-9);
    EXPECT_EQ(aligned.z_rotation, 0.0);

    // Wall 2 (y = depth): rotated to face it, AABB touching the plane.
    align(scene, idx, 2, AlignRelation::BackToWall, 0.0, 5.0, 4.0);
    EXPECT_NEAR(scene.objects[idx].world_aabb().hi.y, 4.0, 1e-9);
}

TEST(Align, OnTopOfAndSideOf) {
    Scene scene;
    auto table = std::make_shared<Mesh>(make_box(1.2, 0.8, 0.7, 1));
    auto box = std::make_shared<Mesh>(make_box(0.3, 0.3, 0.3, 1));
    Transform tt;
    tt.translation = {0, 0, 0.35};
    const std::size_t table_idx = scene.add(SceneObject(table, tt));
    Transform tb;
    tb.translation = {3, 0, 0.15};
    const std::size_t box_idx = scene.add(SceneObject(box, tb));

    align(scene, box_idx, static_cast<int>(table_idx), AlignRelation::OnTopOf, 0.0);
    EXPECT_NEAR(scene.objects[box_idx].world_aabb().lo.z,
                scene.objects[table_idx].world_aabb().hi.z, 1e-9);
    EXPECT_TRUE(check_collision(scene, box_idx).empty());

    // side-of preserves z and y.
    const Vec3 before = scene.objects[box_idx].transform.translation;
    align(scene, box_idx, static_cast<int>(table_idx), AlignRelation::SideOf, 0.05);
    const Vec3 after = scene.objects[box_idx].transform.translation;
    EXPECT_EQ(before.y, after.y);
    EXPECT_EQ(before.z, after.z);
    EXPECT_NEAR(scene.objects[box_idx].world_aabb().lo.x,
                scene.objects[table_idx].world_aabb().hi.x + 0.05, 1e-9);
}

TEST(Align, InfeasiblePlacementRestoresTransform) {
    Scene scene;
    auto cube = unit_cube();
    scene.add(SceneObject(cube, Transform{}));
    Transform inside;
    inside.translation = {0.2, 0.2, 0.2};
    const std::size_t idx = scene.add(SceneObject(cube, inside));
    // Putting this cube on top of itself-overlapping geometry cannot work:
    // aligning on top of object 0 while a third object blocks the space.
    Transform blocker;
    blocker.translation = {0, 0, 1.0};
    scene.add(SceneObject(cube, blocker));
    const Transform before = scene.objects[idx].transform;
    try {
        align(scene, idx, 0, AlignRelation::OnTopOf, 0.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::no_feasible_placement);
    }
    EXPECT_EQ(scene.objects[idx].transform.translation, before.translation);
}

TEST(PointFree, RespectsClearance) {
    Scene scene;
    scene.add(SceneObject(unit_cube(), Transform{}));
    EXPECT_FALSE(point_free(scene, scene.colliders, {0, 0, 0}, 0.1));
    EXPECT_FALSE(point_free(scene, scene.colliders, {0.55, 0, 0}, 0.1));
    EXPECT_TRUE(point_free(scene, scene.colliders, {0.7, 0, 0}, 0.1));
}

TEST(SceneGen, ReproducibleAndReloadable) {
    const SampledScene a = sample_scene(99);
    const SampledScene b = sample_scene(99);
    EXPECT_EQ(scene_to_json(a.spec).dump(), scene_to_json(b.spec).dump());
    EXPECT_GE(a.spec.objects.size(), 2u);

    // Rebuild from the spec: identical meshes, object for object.
    const Scene rebuilt = build_scene(a.spec);
    ASSERT_EQ(rebuilt.objects.size(), a.scene.objects.size());
    for (std::size_t i = 0; i < rebuilt.objects.size(); ++i)
        EXPECT_EQ(mesh_content_hash(*rebuilt.objects[i].mesh),
                  mesh_content_hash(*a.scene.objects[i].mesh));

    // No interpenetration anywhere in the sampled scene.
    Scene check = build_scene(a.spec);
    for (std::size_t i = 0; i < check.objects.size(); ++i)
        EXPECT_TRUE(check_collision(check, i).empty()) << i;
}

TEST(SceneJson, RoundTrip) {
    const SampledScene s = sample_scene(7);
    const nlohmann::json j = scene_to_json(s.spec);
    const SceneSpec back = scene_from_json(j);
    EXPECT_EQ(scene_to_json(back).dump(), j.dump());
}
