#pragma once

#include <string>

#include "procgen/scene_json.hpp"

namespace procgen {

// Random indoor scene: a windowed room shell plus box/cylinder furniture
// proxies dressed in sampled compositional materials. Placements are
// collision-rejected, some furniture is aligned against walls, and the
// final transforms land in the spec so a reload rebuilds the identical
// scene.
struct SampledScene {
    SceneSpec spec;
    Scene scene;
};

namespace scenegendetail {

inline ObjectSpec furniture_box(RandomStream& s, double max_height) {
    ObjectSpec o;
    o.kind = ObjectSpec::Kind::Box;
    const int style = choice(s, {2, 2, 1});
    if (style == 0) {  // sofa-ish: long and low
        o.size = {uniform(s, 1.4, 2.2), uniform(s, 0.7, 1.0), uniform(s, 0.6, 0.9)};
    } else if (style == 1) {  // table-ish
        o.size = {uniform(s, 0.8, 1.6), uniform(s, 0.6, 1.0), uniform(s, 0.55, 0.8)};
    } else {  // cabinet-ish: tall
        o.size = {uniform(s, 0.5, 1.2), uniform(s, 0.35, 0.6),
                  uniform(s, 1.2, std::min(2.0, max_height - 0.4))};
    }
    o.subdiv = 3;
    o.tags = {"furniture", style == 0 ? "sofa" : (style == 1 ? "table" : "cabinet")};
    return o;
}

inline ObjectSpec furniture_cylinder(RandomStream& s) {
    ObjectSpec o;
    o.kind = ObjectSpec::Kind::Cylinder;
    o.radius = uniform(s, 0.15, 0.4);
    o.cyl_height = uniform(s, 0.5, 1.5);
    o.segments = 24;
    o.tags = {"furniture", "cylinder"};
    return o;
}

}  // namespace scenegendetail

inline SampledScene sample_scene(std::uint64_t seed) {
    RandomStream root = RandomStream::root(seed);
    RandomStream dims = split(root, "dims");
    RandomStream windows = split(root, "windows");
    RandomStream mats = split(root, "materials");
    RandomStream furniture = split(root, "furniture");

    SampledScene out;
    out.spec.seed = seed;

    ObjectSpec room;
    room.kind = ObjectSpec::Kind::Room;
    room.width = uniform(dims, 4.5, 7.0);
    room.depth = uniform(dims, 3.5, 5.5);
    room.height = uniform(dims, 2.5, 3.1);
    room.quad_size = 0.2;
    room.tags = {"room"};

    const int window_count = 1 + static_cast<int>(randint(windows, 2));
    int last_wall = -1;
    for (int i = 0; i < window_count; ++i) {
        WindowRect w;
        w.wall = static_cast<int>(randint(windows, 4));
        if (w.wall == last_wall) w.wall = (w.wall + 1) % 4;
        last_wall = w.wall;
        const double wall_len = (w.wall % 2 == 0) ? room.width : room.depth;
        const double win_w = uniform(windows, 0.8, std::min(1.8, wall_len - 0.8));
        const double win_h = uniform(windows, 0.8, room.height - 1.2);
        w.u0 = uniform(windows, 0.3, wall_len - win_w - 0.3);
        w.u1 = w.u0 + win_w;
        w.v0 = uniform(windows, 0.8, room.height - win_h - 0.2);
        w.v1 = w.v0 + win_h;
        room.windows.push_back(w);
    }

    room.material = {"composed", mats.next_raw(), uniform(mats, 0.002, 0.008)};
    out.spec.objects.push_back(room);
    out.scene.add(SceneObject(std::make_shared<Mesh>(build_object_mesh(room)), Transform{},
                              room.tags));

    const int count = 3 + static_cast<int>(randint(furniture, 4));
    for (int i = 0; i < count; ++i) {
        ObjectSpec o = choice(furniture, {3, 1}) == 0
                           ? scenegendetail::furniture_box(furniture, room.height)
                           : scenegendetail::furniture_cylinder(furniture);
        o.material = {"composed", mats.next_raw(), uniform(mats, 0.001, 0.005)};

        auto mesh = std::make_shared<Mesh>(build_object_mesh(o));
        const Aabb box = mesh_aabb(*mesh);
        const double half_x = (box.hi.x - box.lo.x) / 2.0;
        const double half_y = (box.hi.y - box.lo.y) / 2.0;

        // The displaced floor bulges up to the room material's amplitude;
        // rest furniture just above the highest bump.
        const double floor_lift = room.material.displacement_amplitude * 1.5 + 1e-6;

        bool placed = false;
        for (int attempt = 0; attempt < 30 && !placed; ++attempt) {
            Transform t;
            t.z_rotation = uniform(furniture, 0.0, 6.283185307179586);
            const double margin = std::max(half_x, half_y) + 0.1;
            if (room.width <= 2 * margin || room.depth <= 2 * margin) break;
            t.translation = {uniform(furniture, margin, room.width - margin),
                             uniform(furniture, margin, room.depth - margin),
                             -box.lo.z + floor_lift};
            const std::size_t idx = out.scene.add(SceneObject(mesh, t, o.tags));
            if (check_collision(out.scene, idx).empty()) {
                o.transform = t;
                out.spec.objects.push_back(o);
                placed = true;
            } else {
                out.scene.objects.pop_back();
            }
        }
    }
    return out;
}

// The axis-aligned interior region of the sampled room, shrunk by `margin`.
inline Aabb scene_interior(const SceneSpec& spec, double margin = 0.4) {
    for (const ObjectSpec& o : spec.objects)
        if (o.kind == ObjectSpec::Kind::Room) {
            Aabb box;
            box.expand({margin, margin, margin});
            box.expand({o.width - margin, o.depth - margin, o.height - margin});
            return box;
        }
    Aabb box;
    box.expand({-1, -1, 0});
    box.expand({1, 1, 2});
    return box;
}

}  // namespace procgen
