#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "procgen/common.hpp"
#include "procgen/eval.hpp"
#include "procgen/hashing.hpp"

namespace procgen {

// Indexed polygon mesh (tris or quads). Normals are per vertex and are
// recomputed eagerly after any vertex mutation, so there is no stale state
// to carry around. Attributes are named per-vertex floats ("curvature").
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::vector<std::uint32_t>> faces;
    std::vector<std::vector<Vec2>> corner_uv;  // parallel to faces
    std::vector<Vec3> normals;                 // per vertex, unit
    std::map<std::string, std::vector<double>> attributes;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t face_count() const { return faces.size(); }
};

inline bool is_quad_only(const Mesh& m) {
    return std::all_of(m.faces.begin(), m.faces.end(),
                       [](const auto& f) { return f.size() == 4; });
}

// Area-weighted per-vertex normals via Newell's method. Throws on zero-area
// faces.
inline void compute_normals(Mesh& m) {
    m.normals.assign(m.vertices.size(), Vec3{0, 0, 0});
    for (std::size_t fi = 0; fi < m.faces.size(); ++fi) {
        const auto& f = m.faces[fi];
        Vec3 n{0, 0, 0};
        for (std::size_t i = 0; i < f.size(); ++i) {
            const Vec3& a = m.vertices[f[i]];
            const Vec3& b = m.vertices[f[(i + 1) % f.size()]];
            n.x += (a.y - b.y) * (a.z + b.z);
            n.y += (a.z - b.z) * (a.x + b.x);
            n.z += (a.x - b.x) * (a.y + b.y);
        }
        if (n.length() < 1e-30)
            raise(errc::degenerate_face, "face " + std::to_string(fi) + " has zero area");
        for (std::uint32_t v : f) m.normals[v] = m.normals[v] + n;
    }
    for (Vec3& n : m.normals) n = n.normalized();
}

namespace meshdetail {

struct EdgeKey {
    std::uint32_t a, b;
    bool operator<(const EdgeKey& o) const { return a != o.a ? a < o.a : b < o.b; }
};

inline EdgeKey edge_key(std::uint32_t a, std::uint32_t b) {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
}

inline Vec3 face_normal(const Mesh& m, const std::vector<std::uint32_t>& f) {
    Vec3 n{0, 0, 0};
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3& a = m.vertices[f[i]];
        const Vec3& b = m.vertices[f[(i + 1) % f.size()]];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    return n.normalized();
}

}  // namespace meshdetail

// Angle-deficit style curvature proxy: per vertex, the mean dihedral angle
// of its incident edges (0 for boundary edges and planar interiors). Cheap,
// sign-free, and enough to rank creases above face interiors, which is what
// edge wear needs.
inline void compute_curvature(Mesh& m) {
    std::map<meshdetail::EdgeKey, std::vector<std::uint32_t>> edge_faces;
    for (std::size_t fi = 0; fi < m.faces.size(); ++fi) {
        const auto& f = m.faces[fi];
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto key = meshdetail::edge_key(f[i], f[(i + 1) % f.size()]);
            auto& lst = edge_faces[key];
            lst.push_back(static_cast<std::uint32_t>(fi));
            if (lst.size() > 2)
                raise(errc::degenerate_face,
                      "edge shared by more than two faces (non-manifold)");
        }
    }

    std::vector<Vec3> fnormals(m.faces.size());
    for (std::size_t fi = 0; fi < m.faces.size(); ++fi)
        fnormals[fi] = meshdetail::face_normal(m, m.faces[fi]);

    std::vector<double> sum(m.vertices.size(), 0.0);
    std::vector<int> count(m.vertices.size(), 0);
    for (const auto& [key, fl] : edge_faces) {
        double angle = 0.0;
        if (fl.size() == 2) {
            const double d =
                std::min(1.0, std::max(-1.0, dot(fnormals[fl[0]], fnormals[fl[1]])));
            angle = std::acos(d);
        }
        sum[key.a] += angle;
        sum[key.b] += angle;
        ++count[key.a];
        ++count[key.b];
    }

    std::vector<double> curvature(m.vertices.size(), 0.0);
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
        curvature[v] = count[v] > 0 ? sum[v] / count[v] : 0.0;
    m.attributes["curvature"] = std::move(curvature);
}

// Planar z=0 grid of nx*ny quads centered at the origin, uv in [0,1]^2.
inline Mesh make_grid(int nx, int ny, double size) {
    if (nx < 1 || ny < 1) raise(errc::invalid_range, "make_grid: nx, ny must be >= 1");
    Mesh m;
    const double half = size * 0.5;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            const double u = static_cast<double>(i) / nx;
            const double v = static_cast<double>(j) / ny;
            m.vertices.push_back({u * size - half, v * size - half, 0.0});
        }
    auto vid = [&](int i, int j) { return static_cast<std::uint32_t>(j * (nx + 1) + i); };
    auto uv = [&](int i, int j) {
        return Vec2{static_cast<double>(i) / nx, static_cast<double>(j) / ny};
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            m.faces.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
            m.corner_uv.push_back({uv(i, j), uv(i + 1, j), uv(i + 1, j + 1), uv(i, j + 1)});
        }
    compute_normals(m);
    return m;
}

// Axis-aligned box of 6 subdivided quad panels with welded edges, centered
// at the origin.
inline Mesh make_box(double sx, double sy, double sz, int subdiv = 1) {
    if (subdiv < 1) raise(errc::invalid_range, "make_box: subdiv must be >= 1");
    Mesh m;
    std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::uint32_t> weld;
    auto vertex_at = [&](const Vec3& p) {
        const auto key = std::make_tuple(std::llround(p.x * 1048576.0),
                                         std::llround(p.y * 1048576.0),
                                         std::llround(p.z * 1048576.0));
        auto it = weld.find(key);
        if (it != weld.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(m.vertices.size());
        m.vertices.push_back(p);
        weld[key] = id;
        return id;
    };

    // Each panel: origin corner + two edge vectors, ordered so du x dv
    // points outward (solid orientation).
    struct Panel {
        Vec3 origin, du, dv;
    };
    const double hx = sx / 2, hy = sy / 2, hz = sz / 2;
    const Panel panels[6] = {
        {{-hx, -hy, -hz}, {0, sy, 0}, {sx, 0, 0}},   // bottom (z-)
        {{-hx, -hy, hz}, {sx, 0, 0}, {0, sy, 0}},    // top (z+)
        {{-hx, -hy, -hz}, {0, 0, sz}, {0, sy, 0}},   // x- side
        {{hx, -hy, -hz}, {0, sy, 0}, {0, 0, sz}},    // x+ side
        {{-hx, -hy, -hz}, {sx, 0, 0}, {0, 0, sz}},   // y- side
        {{-hx, hy, -hz}, {0, 0, sz}, {sx, 0, 0}},    // y+ side
    };
    for (const Panel& panel : panels) {
        const int n = subdiv;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                auto corner = [&](int ii, int jj) {
                    const double u = static_cast<double>(ii) / n;
                    const double v = static_cast<double>(jj) / n;
                    return panel.origin + panel.du * u + panel.dv * v;
                };
                auto cuv = [&](int ii, int jj) {
                    return Vec2{static_cast<double>(ii) / n, static_cast<double>(jj) / n};
                };
                m.faces.push_back({vertex_at(corner(i, j)), vertex_at(corner(i + 1, j)),
                                   vertex_at(corner(i + 1, j + 1)), vertex_at(corner(i, j + 1))});
                m.corner_uv.push_back({cuv(i, j), cuv(i + 1, j), cuv(i + 1, j + 1), cuv(i, j + 1)});
            }
    }
    compute_normals(m);
    return m;
}

// Cube projected to a sphere; quad topology, near-uniform curvature.
inline Mesh make_cube_sphere(double radius, int subdiv) {
    Mesh m = make_box(2.0, 2.0, 2.0, subdiv);
    for (Vec3& v : m.vertices) v = v.normalized() * radius;
    compute_normals(m);
    return m;
}

// Closed cylinder; the wall is quads, the caps are triangle fans.
inline Mesh make_cylinder(double radius, double height, int segments) {
    if (segments < 3) raise(errc::invalid_range, "make_cylinder: segments must be >= 3");
    Mesh m;
    const double hz = height / 2;
    for (int ring = 0; ring < 2; ++ring) {
        const double z = ring == 0 ? -hz : hz;
        for (int i = 0; i < segments; ++i) {
            const double a = 6.283185307179586 * i / segments;
            m.vertices.push_back({radius * std::cos(a), radius * std::sin(a), z});
        }
    }
    auto bottom = [&](int i) { return static_cast<std::uint32_t>(i % segments); };
    auto top = [&](int i) { return static_cast<std::uint32_t>(segments + i % segments); };
    for (int i = 0; i < segments; ++i) {
        const double u0 = static_cast<double>(i) / segments;
        const double u1 = static_cast<double>(i + 1) / segments;
        m.faces.push_back({bottom(i), bottom(i + 1), top(i + 1), top(i)});
        m.corner_uv.push_back({{u0, 0}, {u1, 0}, {u1, 1}, {u0, 1}});
    }
    const auto c0 = static_cast<std::uint32_t>(m.vertices.size());
    m.vertices.push_back({0, 0, -hz});
    const auto c1 = static_cast<std::uint32_t>(m.vertices.size());
    m.vertices.push_back({0, 0, hz});
    for (int i = 0; i < segments; ++i) {
        m.faces.push_back({c0, bottom(i + 1), bottom(i)});
        m.corner_uv.push_back({{0.5, 0.5}, {0, 0}, {1, 0}});
        m.faces.push_back({c1, top(i), top(i + 1)});
        m.corner_uv.push_back({{0.5, 0.5}, {0, 0}, {1, 0}});
    }
    compute_normals(m);
    return m;
}

// Vertex-position batch with per-vertex uv (first corner wins) and every
// float attribute as aux fields.
inline SampleBatch mesh_batch(const Mesh& m) {
    SampleBatch batch;
    batch.points = m.vertices;
    std::vector<double> uv(m.vertices.size() * 2, 0.0);
    std::vector<char> seen(m.vertices.size(), 0);
    for (std::size_t fi = 0; fi < m.faces.size(); ++fi)
        for (std::size_t c = 0; c < m.faces[fi].size(); ++c) {
            const std::uint32_t v = m.faces[fi][c];
            if (!seen[v]) {
                seen[v] = 1;
                uv[v * 2] = m.corner_uv[fi][c].x;
                uv[v * 2 + 1] = m.corner_uv[fi][c].y;
            }
        }
    batch.set_aux("uv", ValueKind::Vec2, std::move(uv));
    for (const auto& [name, values] : m.attributes)
        batch.set_aux(name, ValueKind::Float, values);
    return batch;
}

// v' = v + n * amplitude * field(v); the field is evaluated at the vertex
// positions with uv and attributes as aux inputs. Normals are recomputed.
inline Mesh displace(const Mesh& mesh, const Graph& graph, const std::string& output,
                     double amplitude) {
    auto it = graph.outputs.find(output);
    if (it == graph.outputs.end())
        raise(errc::unknown_param, "graph has no output named '" + output + "'");
    if (graph.kind_of(it->second) != ValueKind::Float)
        raise(errc::kind_mismatch, "displacement output must be Float");
    if (mesh.normals.size() != mesh.vertices.size())
        raise(errc::kind_mismatch, "mesh has no normals");

    const SampleBatch batch = mesh_batch(mesh);
    const FieldBuffer field = evaluate(graph, output, batch);

    Mesh out = mesh;
    for (std::size_t v = 0; v < out.vertices.size(); ++v)
        out.vertices[v] = out.vertices[v] + out.normals[v] * (amplitude * field.data[v]);
    compute_normals(out);
    return out;
}

inline Aabb mesh_aabb(const Mesh& m) {
    Aabb box;
    for (const Vec3& v : m.vertices) box.expand(v);
    return box;
}

// Content hash over vertices and face indices; the collider cache key.
inline std::uint64_t mesh_content_hash(const Mesh& m) {
    std::uint64_t h = 0x243f6a8885a308d3ull;
    for (const Vec3& v : m.vertices) {
        h = hash_combine(h, noise::double_bits(v.x));
        h = hash_combine(h, noise::double_bits(v.y));
        h = hash_combine(h, noise::double_bits(v.z));
    }
    for (const auto& f : m.faces) {
        h = hash_combine(h, f.size());
        for (std::uint32_t v : f) h = hash_combine(h, v);
    }
    return h;
}

// OBJ with v/vt/vn records; one vt per face corner, 1-based indices.
inline std::string mesh_to_obj(const Mesh& m) {
    std::ostringstream os;
    os.precision(17);
    for (const Vec3& v : m.vertices) os << "v " << v.x << " " << v.y << " " << v.z << "\n";
    for (const auto& fuv : m.corner_uv)
        for (const Vec2& t : fuv) os << "vt " << t.x << " " << t.y << "\n";
    for (const Vec3& n : m.normals) os << "vn " << n.x << " " << n.y << " " << n.z << "\n";
    std::size_t corner = 1;
    for (const auto& f : m.faces) {
        os << "f";
        for (std::uint32_t v : f) {
            os << " " << v + 1 << "/" << corner << "/" << v + 1;
            ++corner;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace procgen
