#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "procgen/bvh.hpp"
#include "procgen/mesh.hpp"

namespace procgen {

// Rigid placement: translation, rotation about z, uniform scale.
struct Transform {
    Vec3 translation{0, 0, 0};
    double z_rotation = 0.0;
    double scale = 1.0;

    Vec3 apply(const Vec3& p) const {
        const double c = std::cos(z_rotation), s = std::sin(z_rotation);
        const Vec3 q = p * scale;
        return {c * q.x - s * q.y + translation.x, s * q.x + c * q.y + translation.y,
                q.z + translation.z};
    }
    Vec3 apply_direction(const Vec3& d) const {
        const double c = std::cos(z_rotation), s = std::sin(z_rotation);
        return {c * d.x - s * d.y, s * d.x + c * d.y, d.z};
    }
    Vec3 invert(const Vec3& w) const {
        const Vec3 q = w - translation;
        const double c = std::cos(-z_rotation), s = std::sin(-z_rotation);
        return Vec3{c * q.x - s * q.y, s * q.x + c * q.y, q.z} / scale;
    }
};

inline Aabb transform_box(const Transform& t, const Aabb& box) {
    Aabb out;
    for (int i = 0; i < 8; ++i)
        out.expand(t.apply({i & 1 ? box.hi.x : box.lo.x, i & 2 ? box.hi.y : box.lo.y,
                            i & 4 ? box.hi.z : box.lo.z}));
    return out;
}

struct SceneObject {
    std::shared_ptr<const Mesh> mesh;
    Transform transform;
    std::vector<std::string> tags;

    SceneObject() = default;
    SceneObject(std::shared_ptr<const Mesh> m, Transform t, std::vector<std::string> tg = {})
        : mesh(std::move(m)), transform(t), tags(std::move(tg)) {
        if (!(transform.scale > 0.0)) raise(errc::invalid_range, "scale must be > 0");
    }

    Aabb world_aabb() const { return transform_box(transform, mesh_aabb(*mesh)); }
};

// One object-space BVH per distinct mesh content hash, no matter how many
// instances reference it. Moving an object invalidates nothing.
class ColliderCache {
public:
    std::shared_ptr<const Bvh> get(const Mesh& mesh) {
        const std::uint64_t key = mesh_content_hash(mesh);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        auto bvh = std::make_shared<Bvh>(Bvh::from_mesh(mesh));
        cache_[key] = bvh;
        return bvh;
    }

    std::size_t size() const { return cache_.size(); }

private:
    std::map<std::uint64_t, std::shared_ptr<const Bvh>> cache_;
};

struct Scene {
    std::vector<SceneObject> objects;
    ColliderCache colliders;

    std::size_t add(SceneObject obj) {
        colliders.get(*obj.mesh);
        objects.push_back(std::move(obj));
        return objects.size() - 1;
    }
};

// Surface-contact tolerance for the penetration tests: a sample closer than
// this to the other surface counts as touching, not penetrating.
inline constexpr double kContactEpsilon = 1e-9;

// Generic ray direction for winding queries; chosen to avoid the axis-
// aligned edges that dominate generated scenes.
inline const Vec3 kWindingDirection =
    Vec3{0.537739972, 0.832327935, 0.132511958}.normalized();

// Is the world-space point strictly inside the (closed, outward-oriented)
// volume of `obj`? Points within kContactEpsilon of the surface are not
// inside: exact contact stays free.
inline bool point_strictly_inside(const SceneObject& obj, const Bvh& bvh, const Vec3& world_p) {
    const Vec3 local = obj.transform.invert(world_p);
    const double eps = kContactEpsilon / obj.transform.scale;
    Aabb probe;
    probe.expand(local - Vec3{eps, eps, eps});
    probe.expand(local + Vec3{eps, eps, eps});
    bool touching = false;
    bvh.query_box(probe, [&](const Triangle& t) {
        if (!touching && distance(closest_point_on_triangle(local, t), local) <= eps)
            touching = true;
    });
    if (touching) return false;
    return bvh.winding_crossings(local, kWindingDirection) > 0;
}

// True interpenetration between two placed objects: a strictly crossing
// triangle pair, or one surface sampled strictly inside the other volume
// (which catches containment and flush axis-aligned overlap, where every
// triangle pair only touches). Exact contact never counts.
inline bool objects_collide(const SceneObject& a, const SceneObject& b, ColliderCache& cache) {
    if (!a.world_aabb().overlaps(b.world_aabb())) return false;
    const std::shared_ptr<const Bvh> ba = cache.get(*a.mesh);
    const std::shared_ptr<const Bvh> bb = cache.get(*b.mesh);
    bool hit = false;
    auto to_world_a = [&](const Aabb& box) { return transform_box(a.transform, box); };
    auto to_world_b = [&](const Aabb& box) { return transform_box(b.transform, box); };
    ba->visit_leaf_pairs(*bb, to_world_a, to_world_b, [&](const Triangle& ta, const Triangle& tb) {
        if (hit) return;
        const Triangle wa{a.transform.apply(ta.a), a.transform.apply(ta.b),
                          a.transform.apply(ta.c)};
        const Triangle wb{b.transform.apply(tb.a), b.transform.apply(tb.b),
                          b.transform.apply(tb.c)};
        if (tri_tri_penetrates(wa, wb)) hit = true;
    });
    if (hit) return true;

    auto centroid_inside = [&](const SceneObject& outer, const Bvh& outer_bvh,
                               const SceneObject& inner, const Bvh& inner_bvh) {
        bool found = false;
        const Aabb outer_box = outer.world_aabb();
        for (std::size_t i = 0; i < inner_bvh.triangle_count() && !found; ++i) {
            const Triangle& t = inner_bvh.triangle(i);
            const Vec3 c = inner.transform.apply((t.a + t.b + t.c) * (1.0 / 3.0));
            if (!outer_box.overlaps(Aabb{c, c})) continue;
            if (point_strictly_inside(outer, outer_bvh, c)) found = true;
        }
        return found;
    };
    return centroid_inside(b, *bb, a, *ba) || centroid_inside(a, *ba, b, *bb);
}

// All objects the given object interpenetrates: AABB broadphase, then
// cached-BVH triangle narrowphase.
inline std::vector<std::pair<std::size_t, std::size_t>> check_collision(Scene& scene,
                                                                        std::size_t index) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t j = 0; j < scene.objects.size(); ++j) {
        if (j == index) continue;
        if (objects_collide(scene.objects[index], scene.objects[j], scene.colliders))
            pairs.emplace_back(std::min(index, j), std::max(index, j));
    }
    return pairs;
}

// Is a probe sphere at `p` free of every scene triangle and outside every
// solid? Room shells are oriented inward, so their habitable interior does
// not count as "inside a solid".
inline bool point_free(const Scene& scene, ColliderCache& cache, const Vec3& p,
                       double clearance) {
    Aabb probe;
    probe.expand(p - Vec3{clearance, clearance, clearance});
    probe.expand(p + Vec3{clearance, clearance, clearance});
    for (const SceneObject& obj : scene.objects) {
        if (!obj.world_aabb().overlaps(probe)) continue;
        const std::shared_ptr<const Bvh> bvh = cache.get(*obj.mesh);
        const Vec3 local = obj.transform.invert(p);
        const double local_clearance = clearance / obj.transform.scale;
        Aabb lbox;
        lbox.expand(local - Vec3{local_clearance, local_clearance, local_clearance});
        lbox.expand(local + Vec3{local_clearance, local_clearance, local_clearance});
        bool blocked = false;
        bvh->query_box(lbox, [&](const Triangle& t) {
            if (blocked) return;
            if (distance(closest_point_on_triangle(local, t), local) < local_clearance)
                blocked = true;
        });
        if (blocked) return false;
        if (bvh->winding_crossings(local, kWindingDirection) > 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Room shells
// ---------------------------------------------------------------------------

// Window cutout on one wall, in wall-local coordinates: u runs along the
// wall, v runs up. Walls are indexed 0 (y=0), 1 (x=width), 2 (y=depth),
// 3 (x=0).
struct WindowRect {
    int wall = 0;
    double u0 = 0, u1 = 0, v0 = 0, v1 = 0;
};

namespace roomdetail {

inline std::vector<double> breakpoints(double extent, double quad_size,
                                       const std::vector<double>& extra) {
    std::vector<double> pts{0.0};
    for (double x = quad_size; x < extent; x += quad_size) pts.push_back(x);
    pts.push_back(extent);
    for (double e : extra)
        if (e > 0.0 && e < extent) pts.push_back(e);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-12; }),
              pts.end());
    return pts;
}

struct PanelFrame {
    Vec3 origin, du, dv;  // unit direction vectors
    double len_u, len_v;
};

// Appends a quad-grid panel, with grid lines split at window edges and the
// cells inside windows dropped. `flip` reverses the winding so the normal
// points against du x dv.
inline void emit_panel(Mesh& m, const PanelFrame& frame, double quad_size,
                       const std::vector<WindowRect>& windows, bool flip = false) {
    std::vector<double> ue, ve;
    for (const WindowRect& w : windows) {
        ue.push_back(w.u0);
        ue.push_back(w.u1);
        ve.push_back(w.v0);
        ve.push_back(w.v1);
    }
    const std::vector<double> us = breakpoints(frame.len_u, quad_size, ue);
    const std::vector<double> vs = breakpoints(frame.len_v, quad_size, ve);

    auto inside_window = [&](double uc, double vc) {
        for (const WindowRect& w : windows)
            if (uc > w.u0 && uc < w.u1 && vc > w.v0 && vc < w.v1) return true;
        return false;
    };

    std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> ids;
    auto vertex = [&](std::size_t i, std::size_t j) {
        auto key = std::make_pair(i, j);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        const Vec3 p = frame.origin + frame.du * us[i] + frame.dv * vs[j];
        const auto id = static_cast<std::uint32_t>(m.vertices.size());
        m.vertices.push_back(p);
        ids[key] = id;
        return id;
    };
    auto uv = [&](std::size_t i, std::size_t j) {
        return Vec2{us[i] / frame.len_u, vs[j] / frame.len_v};
    };

    for (std::size_t j = 0; j + 1 < vs.size(); ++j)
        for (std::size_t i = 0; i + 1 < us.size(); ++i) {
            const double uc = 0.5 * (us[i] + us[i + 1]);
            const double vc = 0.5 * (vs[j] + vs[j + 1]);
            if (inside_window(uc, vc)) continue;
            if (flip) {
                m.faces.push_back({vertex(i, j), vertex(i, j + 1), vertex(i + 1, j + 1),
                                   vertex(i + 1, j)});
                m.corner_uv.push_back({uv(i, j), uv(i, j + 1), uv(i + 1, j + 1), uv(i + 1, j)});
            } else {
                m.faces.push_back({vertex(i, j), vertex(i + 1, j), vertex(i + 1, j + 1),
                                   vertex(i, j + 1)});
                m.corner_uv.push_back({uv(i, j), uv(i + 1, j), uv(i + 1, j + 1), uv(i, j + 1)});
            }
        }
}

}  // namespace roomdetail

// Quad-only room shell spanning [0,w] x [0,d] x [0,h] with inward normals.
// Window cutouts split the wall grids at their edges, so the holes match the
// requested rects exactly and the mesh stays all-quads.
inline Mesh make_room(double width, double depth, double height, double quad_size,
                      const std::vector<WindowRect>& windows = {}) {
    if (!(width > 0.0 && depth > 0.0 && height > 0.0 && quad_size > 0.0))
        raise(errc::invalid_range, "room dimensions and quad_size must be > 0");

    const double wall_len[4] = {width, depth, width, depth};
    for (const WindowRect& w : windows) {
        if (w.wall < 0 || w.wall > 3) raise(errc::window_out_of_bounds, "wall index");
        if (!(w.u0 < w.u1 && w.v0 < w.v1) || w.u0 < 0.0 || w.u1 > wall_len[w.wall] ||
            w.v0 < 0.0 || w.v1 > height)
            raise(errc::window_out_of_bounds, "window rect outside wall bounds");
    }
    for (std::size_t a = 0; a < windows.size(); ++a)
        for (std::size_t b = a + 1; b < windows.size(); ++b) {
            const WindowRect &wa = windows[a], &wb = windows[b];
            if (wa.wall != wb.wall) continue;
            if (wa.u0 < wb.u1 && wb.u0 < wa.u1 && wa.v0 < wb.v1 && wb.v0 < wa.v1)
                raise(errc::overlapping_windows, "windows overlap on wall " +
                                                     std::to_string(wa.wall));
        }

    auto wall_windows = [&](int wall) {
        std::vector<WindowRect> ws;
        for (const WindowRect& w : windows)
            if (w.wall == wall) ws.push_back(w);
        return ws;
    };

    Mesh m;
    using roomdetail::PanelFrame;
    // Floor (normal +z, up into the room) and ceiling (normal -z).
    roomdetail::emit_panel(m, PanelFrame{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, width, depth},
                           quad_size, {}, false);
    roomdetail::emit_panel(m, PanelFrame{{0, 0, height}, {1, 0, 0}, {0, 1, 0}, width, depth},
                           quad_size, {}, true);
    // Walls: u runs along the wall from its low corner, v runs up; winding
    // flipped where needed so every normal points into the room.
    roomdetail::emit_panel(m, PanelFrame{{0, 0, 0}, {1, 0, 0}, {0, 0, 1}, width, height},
                           quad_size, wall_windows(0), true);
    roomdetail::emit_panel(m, PanelFrame{{width, 0, 0}, {0, 1, 0}, {0, 0, 1}, depth, height},
                           quad_size, wall_windows(1), true);
    roomdetail::emit_panel(m, PanelFrame{{0, depth, 0}, {1, 0, 0}, {0, 0, 1}, width, height},
                           quad_size, wall_windows(2), false);
    roomdetail::emit_panel(m, PanelFrame{{0, 0, 0}, {0, 1, 0}, {0, 0, 1}, depth, height},
                           quad_size, wall_windows(3), false);
    compute_normals(m);
    return m;
}

// ---------------------------------------------------------------------------
// Alignment
// ---------------------------------------------------------------------------

enum class AlignRelation { BackToWall, SideOf, OnTopOf, BackTo };

// The wall rotations that turn an object's local -y into the wall's inward
// normal direction.
inline double wall_back_rotation(int wall) {
    switch (wall) {
        case 0: return 0.0;                  // back faces y = 0
        case 1: return 1.5707963267948966;   // back faces x = width
        case 2: return 3.141592653589793;    // back faces y = depth
        default: return 4.71238898038469;    // back faces x = 0
    }
}

// Translates (and for walls, rotates) `obj` so the relation's face pair
// sits `gap` apart, then post-checks for interpenetration.
inline Transform align(Scene& scene, std::size_t obj_index, int wall_or_target,
                       AlignRelation relation, double gap,
                       double room_width = 0.0, double room_depth = 0.0) {
    SceneObject& obj = scene.objects[obj_index];
    Transform t = obj.transform;

    if (relation == AlignRelation::BackToWall) {
        const int wall = wall_or_target;
        t.z_rotation = wall_back_rotation(wall);
        SceneObject probe(obj.mesh, t, obj.tags);
        const Aabb box = probe.world_aabb();
        switch (wall) {
            case 0: t.translation.y += gap - box.lo.y; break;
            case 1: t.translation.x += room_width - gap - box.hi.x; break;
            case 2: t.translation.y += room_depth - gap - box.hi.y; break;
            default: t.translation.x += gap - box.lo.x; break;
        }
    } else {
        const SceneObject& target = scene.objects[static_cast<std::size_t>(wall_or_target)];
        const Aabb tb = target.world_aabb();
        const Aabb ob = obj.world_aabb();
        switch (relation) {
            case AlignRelation::SideOf:
                t.translation.x += tb.hi.x + gap - ob.lo.x;
                break;
            case AlignRelation::OnTopOf:
                t.translation.z += tb.hi.z + gap - ob.lo.z;
                break;
            case AlignRelation::BackTo:
                t.translation.y += tb.lo.y - gap - ob.hi.y;
                break;
            default: break;
        }
    }

    const Transform previous = obj.transform;
    obj.transform = t;
    if (!check_collision(scene, obj_index).empty()) {
        obj.transform = previous;
        raise(errc::no_feasible_placement, "aligned placement interpenetrates the target");
    }
    return t;
}

}  // namespace procgen
