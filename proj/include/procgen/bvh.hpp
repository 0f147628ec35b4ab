#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "procgen/mesh.hpp"

namespace procgen {

struct Triangle {
    Vec3 a, b, c;
};

// Moller's interval-based triangle-triangle test, tightened so that exact
// contact does not count: triangles touching along a shared face, edge or
// point are "free". Alignment with gap 0 must not self-report, and the
// brute-force oracle uses this same predicate.
namespace tritri {

inline void isect_interval(double vv0, double vv1, double vv2, double d0, double d1, double d2,
                           double& i0, double& i1) {
    i0 = vv0 + (vv1 - vv0) * d0 / (d0 - d1);
    i1 = vv0 + (vv2 - vv0) * d0 / (d0 - d2);
}

// Intersection interval of the triangle with the plane-crossing line,
// projected on `proj`. Requires that the d-values straddle (not all one
// side), which the caller guarantees.
inline void compute_interval(const double proj[3], const double d[3], double& i0, double& i1) {
    const double d0d1 = d[0] * d[1];
    const double d0d2 = d[0] * d[2];
    if (d0d1 > 0.0) {
        // 0 and 1 on one side, 2 alone
        isect_interval(proj[2], proj[0], proj[1], d[2], d[0], d[1], i0, i1);
    } else if (d0d2 > 0.0) {
        isect_interval(proj[1], proj[0], proj[2], d[1], d[0], d[2], i0, i1);
    } else if (d[1] * d[2] > 0.0 || d[0] != 0.0) {
        isect_interval(proj[0], proj[1], proj[2], d[0], d[1], d[2], i0, i1);
    } else if (d[1] != 0.0) {
        isect_interval(proj[1], proj[0], proj[2], d[1], d[0], d[2], i0, i1);
    } else {
        isect_interval(proj[2], proj[0], proj[1], d[2], d[0], d[1], i0, i1);
    }
    if (i0 > i1) std::swap(i0, i1);
}

}  // namespace tritri

// True only for proper interpenetration.
inline bool tri_tri_penetrates(const Triangle& t1, const Triangle& t2) {
    const Vec3 n1 = cross(t1.b - t1.a, t1.c - t1.a);
    const double off1 = -dot(n1, t1.a);
    double d2[3] = {dot(n1, t2.a) + off1, dot(n1, t2.b) + off1, dot(n1, t2.c) + off1};
    if (d2[0] >= 0.0 && d2[1] >= 0.0 && d2[2] >= 0.0) return false;
    if (d2[0] <= 0.0 && d2[1] <= 0.0 && d2[2] <= 0.0) return false;

    const Vec3 n2 = cross(t2.b - t2.a, t2.c - t2.a);
    const double off2 = -dot(n2, t2.a);
    double d1[3] = {dot(n2, t1.a) + off2, dot(n2, t1.b) + off2, dot(n2, t1.c) + off2};
    if (d1[0] >= 0.0 && d1[1] >= 0.0 && d1[2] >= 0.0) return false;
    if (d1[0] <= 0.0 && d1[1] <= 0.0 && d1[2] <= 0.0) return false;

    const Vec3 dline = cross(n1, n2);
    int axis = 0;
    double best = std::fabs(dline.x);
    if (std::fabs(dline.y) > best) { axis = 1; best = std::fabs(dline.y); }
    if (std::fabs(dline.z) > best) axis = 2;
    auto proj = [axis](const Vec3& v) { return axis == 0 ? v.x : (axis == 1 ? v.y : v.z); };

    const double p1[3] = {proj(t1.a), proj(t1.b), proj(t1.c)};
    const double p2[3] = {proj(t2.a), proj(t2.b), proj(t2.c)};
    double a0, a1, b0, b1;
    tritri::compute_interval(p1, d1, a0, a1);
    tritri::compute_interval(p2, d2, b0, b1);
    return std::max(a0, b0) < std::min(a1, b1);
}

// Closest point on a triangle to p (Ericson, Real-Time Collision Detection).
inline Vec3 closest_point_on_triangle(const Vec3& p, const Triangle& t) {
    const Vec3 ab = t.b - t.a, ac = t.c - t.a, ap = p - t.a;
    const double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return t.a;
    const Vec3 bp = p - t.b;
    const double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return t.b;
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return t.a + ab * (d1 / (d1 - d3));
    const Vec3 cp = p - t.c;
    const double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return t.c;
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return t.a + ac * (d2 / (d2 - d6));
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return t.b + (t.c - t.b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    const double denom = 1.0 / (va + vb + vc);
    return t.a + ab * (vb * denom) + ac * (vc * denom);
}

struct RayHit {
    bool hit = false;
    double t = 0.0;         // distance along the (unit) ray direction
    double u = 0.0, v = 0.0;  // barycentrics of b and c
    std::size_t triangle = 0;
};

// Moller-Trumbore, front and back faces alike.
inline bool ray_triangle(const Vec3& origin, const Vec3& dir, const Triangle& tri, double& t,
                         double& u, double& v) {
    constexpr double kEps = 1e-12;
    const Vec3 e1 = tri.b - tri.a, e2 = tri.c - tri.a;
    const Vec3 pvec = cross(dir, e2);
    const double det = dot(e1, pvec);
    if (std::fabs(det) < kEps) return false;
    const double inv = 1.0 / det;
    const Vec3 tvec = origin - tri.a;
    u = dot(tvec, pvec) * inv;
    if (u < 0.0 || u > 1.0) return false;
    const Vec3 qvec = cross(tvec, e1);
    v = dot(dir, qvec) * inv;
    if (v < 0.0 || u + v > 1.0) return false;
    t = dot(e2, qvec) * inv;
    return t > kEps;
}

// Object-space triangle BVH. Median split on the longest centroid axis.
class Bvh {
public:
    struct Node {
        Aabb box;
        int left = -1, right = -1;   // internal children
        int first = 0, count = 0;    // leaf triangle range
        bool leaf() const { return count > 0; }
    };

    explicit Bvh(std::vector<Triangle> triangles) : tris_(std::move(triangles)) {
        order_.resize(tris_.size());
        for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
        if (!tris_.empty()) build(0, tris_.size());
    }

    static Bvh from_mesh(const Mesh& m) {
        std::vector<Triangle> tris;
        for (const auto& f : m.faces)
            for (std::size_t c = 1; c + 1 < f.size(); ++c)
                tris.push_back({m.vertices[f[0]], m.vertices[f[c]], m.vertices[f[c + 1]]});
        return Bvh(std::move(tris));
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    const Triangle& triangle(std::size_t ordered_index) const {
        return tris_[order_[ordered_index]];
    }
    std::size_t triangle_count() const { return tris_.size(); }
    bool empty() const { return tris_.empty(); }
    const Aabb& root_box() const { return nodes_[0].box; }

    template <typename F>
    void visit_leaf_pairs(const Bvh& other, const std::function<Aabb(const Aabb&)>& to_world_a,
                          const std::function<Aabb(const Aabb&)>& to_world_b, F&& fn) const {
        if (empty() || other.empty()) return;
        visit_pair(other, 0, 0, to_world_a, to_world_b, fn);
    }

    // All triangles whose world box intersects `box` (boxes touching count,
    // keeping the traversal conservative).
    template <typename F>
    void query_box(const Aabb& box, F&& fn) const {
        if (empty()) return;
        std::vector<int> stack{0};
        while (!stack.empty()) {
            const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
            stack.pop_back();
            if (!n.box.overlaps(box)) continue;
            if (n.leaf()) {
                for (int i = n.first; i < n.first + n.count; ++i)
                    fn(triangle(static_cast<std::size_t>(i)));
            } else {
                stack.push_back(n.left);
                stack.push_back(n.right);
            }
        }
    }

    // Signed crossing count of a ray against the whole surface: +1 where the
    // ray exits (direction along the face normal), -1 where it enters. For an
    // outward-oriented closed mesh, a strictly interior origin nets +1.
    int winding_crossings(const Vec3& origin, const Vec3& dir) const {
        if (empty()) return 0;
        int winding = 0;
        std::vector<int> stack{0};
        while (!stack.empty()) {
            const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
            stack.pop_back();
            if (!ray_box(origin, dir, n.box, 1e300)) continue;
            if (n.leaf()) {
                for (int i = n.first; i < n.first + n.count; ++i) {
                    const Triangle& tri = triangle(static_cast<std::size_t>(i));
                    double t, u, v;
                    if (ray_triangle(origin, dir, tri, t, u, v))
                        winding += dot(dir, cross(tri.b - tri.a, tri.c - tri.a)) > 0.0 ? 1 : -1;
                }
            } else {
                stack.push_back(n.left);
                stack.push_back(n.right);
            }
        }
        return winding;
    }

    RayHit raycast(const Vec3& origin, const Vec3& dir) const {
        RayHit best;
        if (empty()) return best;
        best.t = 1e300;
        std::vector<int> stack{0};
        while (!stack.empty()) {
            const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
            stack.pop_back();
            if (!ray_box(origin, dir, n.box, best.t)) continue;
            if (n.leaf()) {
                for (int i = n.first; i < n.first + n.count; ++i) {
                    double t, u, v;
                    if (ray_triangle(origin, dir, triangle(static_cast<std::size_t>(i)), t, u, v) &&
                        t < best.t) {
                        best.hit = true;
                        best.t = t;
                        best.u = u;
                        best.v = v;
                        best.triangle = order_[static_cast<std::size_t>(i)];
                    }
                }
            } else {
                stack.push_back(n.left);
                stack.push_back(n.right);
            }
        }
        return best;
    }

private:
    static bool ray_box(const Vec3& o, const Vec3& d, const Aabb& b, double tmax) {
        double t0 = 0.0, t1 = tmax;
        const double od[3] = {o.x, o.y, o.z};
        const double dd[3] = {d.x, d.y, d.z};
        const double lo[3] = {b.lo.x, b.lo.y, b.lo.z};
        const double hi[3] = {b.hi.x, b.hi.y, b.hi.z};
        for (int i = 0; i < 3; ++i) {
            const double inv = 1.0 / dd[i];
            double tn = (lo[i] - od[i]) * inv;
            double tf = (hi[i] - od[i]) * inv;
            if (tn > tf) std::swap(tn, tf);
            t0 = std::max(t0, tn);
            t1 = std::min(t1, tf);
            if (t0 > t1) return false;
        }
        return true;
    }

    Aabb triangle_box(std::size_t ordered_index) const {
        const Triangle& t = triangle(ordered_index);
        Aabb box;
        box.expand(t.a);
        box.expand(t.b);
        box.expand(t.c);
        return box;
    }

    int build(std::size_t first, std::size_t count) {
        Node node;
        for (std::size_t i = first; i < first + count; ++i) node.box.expand(triangle_box(i));
        const int index = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        if (count <= 4) {
            nodes_[static_cast<std::size_t>(index)].first = static_cast<int>(first);
            nodes_[static_cast<std::size_t>(index)].count = static_cast<int>(count);
            return index;
        }
        Aabb cbox;
        for (std::size_t i = first; i < first + count; ++i) cbox.expand(centroid(i));
        const Vec3 extent = cbox.hi - cbox.lo;
        int axis = 0;
        if (extent.y > extent.x) axis = 1;
        if (extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;
        auto key = [this, axis](std::size_t t) {
            const Vec3 c = centroid(t);
            return axis == 0 ? c.x : (axis == 1 ? c.y : c.z);
        };
        std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(first),
                         order_.begin() + static_cast<std::ptrdiff_t>(first + count / 2),
                         order_.begin() + static_cast<std::ptrdiff_t>(first + count),
                         [&](std::size_t a, std::size_t b) {
                             const Triangle &ta = tris_[a], &tb = tris_[b];
                             const Vec3 ca = (ta.a + ta.b + ta.c) * (1.0 / 3.0);
                             const Vec3 cb = (tb.a + tb.b + tb.c) * (1.0 / 3.0);
                             const double ka = axis == 0 ? ca.x : (axis == 1 ? ca.y : ca.z);
                             const double kb = axis == 0 ? cb.x : (axis == 1 ? cb.y : cb.z);
                             return ka < kb;
                         });
        (void)key;
        const int left = build(first, count / 2);
        const int right = build(first + count / 2, count - count / 2);
        nodes_[static_cast<std::size_t>(index)].left = left;
        nodes_[static_cast<std::size_t>(index)].right = right;
        return index;
    }

    Vec3 centroid(std::size_t ordered_index) const {
        const Triangle& t = triangle(ordered_index);
        return (t.a + t.b + t.c) * (1.0 / 3.0);
    }

    template <typename F>
    void visit_pair(const Bvh& other, int ia, int ib,
                    const std::function<Aabb(const Aabb&)>& to_world_a,
                    const std::function<Aabb(const Aabb&)>& to_world_b, F& fn) const {
        const Node& na = nodes_[static_cast<std::size_t>(ia)];
        const Node& nb = other.nodes_[static_cast<std::size_t>(ib)];
        if (!to_world_a(na.box).overlaps(to_world_b(nb.box))) return;
        if (na.leaf() && nb.leaf()) {
            for (int i = na.first; i < na.first + na.count; ++i)
                for (int j = nb.first; j < nb.first + nb.count; ++j)
                    fn(triangle(static_cast<std::size_t>(i)),
                       other.triangle(static_cast<std::size_t>(j)));
            return;
        }
        if (!na.leaf() && (nb.leaf() || na.count <= nb.count)) {
            visit_pair(other, na.left, ib, to_world_a, to_world_b, fn);
            visit_pair(other, na.right, ib, to_world_a, to_world_b, fn);
        } else {
            visit_pair(other, ia, nb.left, to_world_a, to_world_b, fn);
            visit_pair(other, ia, nb.right, to_world_a, to_world_b, fn);
        }
    }

    std::vector<Triangle> tris_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace procgen
