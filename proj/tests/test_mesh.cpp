#include <gtest/gtest.h>

#include <set>

#include "procgen/builder_ops.hpp"
#include "procgen/mesh.hpp"
#include "procgen/noise.hpp"

using namespace procgen;

TEST(MeshGrid, CountsAndNormals) {
    const Mesh unit = make_grid(1, 1, 1.0);
    EXPECT_EQ(unit.vertex_count(), 4u);
    EXPECT_EQ(unit.face_count(), 1u);

    const Mesh m = make_grid(7, 3, 2.0);
    EXPECT_EQ(m.vertex_count(), 32u);
    EXPECT_EQ(m.face_count(), 21u);
    for (const Vec3& n : m.normals) {
        EXPECT_NEAR(n.x, 0.0, 1e-15);
        EXPECT_NEAR(n.y, 0.0, 1e-15);
        EXPECT_NEAR(n.z, 1.0, 1e-15);
    }
    EXPECT_TRUE(is_quad_only(m));
}

namespace {

Graph constant_field(double value) {
    GraphBuilder g;
    g.output("h", ops::const_float(g, value));
    return g.build();
}

Graph perlin_field(double frequency) {
    GraphBuilder g;
    Value p = ops::position(g);
    g.output("h", ops::perlin_noise(g, p, frequency));
    return g.build();
}

}  // namespace

TEST(Displace, ZeroAmplitudeKeepsVertices) {
    const Mesh m = make_grid(8, 8, 2.0);
    const Mesh d = displace(m, perlin_field(2.0), "h", 0.0);
    ASSERT_EQ(d.vertex_count(), m.vertex_count());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_EQ(d.vertices[i], m.vertices[i]);
    for (std::size_t i = 0; i < m.normals.size(); ++i) {
        EXPECT_NEAR(d.normals[i].x, m.normals[i].x, 1e-12);
        EXPECT_NEAR(d.normals[i].y, m.normals[i].y, 1e-12);
        EXPECT_NEAR(d.normals[i].z, m.normals[i].z, 1e-12);
    }
}

TEST(Displace, ConstantFieldLiftsGrid) {
    const Mesh m = make_grid(4, 4, 1.0);
    const Mesh d = displace(m, constant_field(1.0), "h", 0.1);
    for (const Vec3& v : d.vertices) EXPECT_NEAR(v.z, 0.1, 1e-15);
}

// Oracle: evaluate the field directly at the original vertices and check
// the displaced bounding box height.
TEST(Displace, AabbHeightMatchesFieldRange) {
    const Mesh m = make_grid(32, 32, 2.0);
    const double amplitude = 0.25;
    const Graph field = perlin_field(1.7);
    const Mesh d = displace(m, field, "h", amplitude);

    double lo = 1e300, hi = -1e300;
    for (const Vec3& v : m.vertices) {
        const double f = noise::perlin(v, 1.7);  // independent evaluation path
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    const Aabb box = mesh_aabb(d);
    EXPECT_NEAR(box.hi.z - box.lo.z, amplitude * (hi - lo), 1e-12);
}

TEST(Displace, NegatedAmplitudeReturnsOnPlanarGrid) {
    const Mesh m = make_grid(6, 6, 1.5);
    const Graph field = constant_field(0.7);
    const Mesh up = displace(m, field, "h", 0.2);
    const Mesh back = displace(up, field, "h", -0.2);
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
        EXPECT_NEAR(distance(back.vertices[i], m.vertices[i]), 0.0, 1e-9);
}

TEST(Displace, QuadPurityPreserved) {
    const Mesh m = make_grid(8, 8, 1.0);
    const Mesh d = displace(m, perlin_field(3.0), "h", 0.05);
    EXPECT_TRUE(is_quad_only(d));
}

TEST(Curvature, PlanarInteriorIsZero) {
    Mesh m = make_grid(6, 6, 2.0);
    compute_curvature(m);
    const auto& curvature = m.attributes.at("curvature");
    for (double c : curvature) EXPECT_NEAR(c, 0.0, 1e-12);
}

// Hand-computable dihedral angles on a subdivided cube: corner vertices see
// three crease edges (mean pi/2), edge-midpoint vertices see two creases and
// two flat edges (mean pi/4), face-interior vertices see none.
TEST(Curvature, CubeCornersBeatEdgesBeatFaces) {
    Mesh cube = make_box(1.0, 1.0, 1.0, 2);
    compute_curvature(cube);
    const auto& curvature = cube.attributes.at("curvature");

    double corner = -1, edge_mid = -1, face_center = -1;
    for (std::size_t i = 0; i < cube.vertices.size(); ++i) {
        const Vec3& v = cube.vertices[i];
        const int on_boundary = (std::fabs(std::fabs(v.x) - 0.5) < 1e-9 ? 1 : 0) +
                                (std::fabs(std::fabs(v.y) - 0.5) < 1e-9 ? 1 : 0) +
                                (std::fabs(std::fabs(v.z) - 0.5) < 1e-9 ? 1 : 0);
        const int at_extreme = (std::fabs(v.x) > 0.5 - 1e-9 ? 1 : 0) +
                               (std::fabs(v.y) > 0.5 - 1e-9 ? 1 : 0) +
                               (std::fabs(v.z) > 0.5 - 1e-9 ? 1 : 0);
        (void)on_boundary;
        if (at_extreme == 3) corner = curvature[i];
        else if (at_extreme == 2) edge_mid = curvature[i];
        else face_center = curvature[i];
    }
    EXPECT_NEAR(corner, 1.5707963267948966, 1e-9);
    EXPECT_NEAR(edge_mid, 0.7853981633974483, 1e-9);
    EXPECT_NEAR(face_center, 0.0, 1e-12);
    EXPECT_GT(corner, edge_mid);
    EXPECT_GT(edge_mid, face_center);
}

TEST(Curvature, SphereApproximatelyUniform) {
    Mesh sphere = make_cube_sphere(1.0, 13);  // 6 * 13 * 13 = 1014 faces
    EXPECT_GE(sphere.face_count(), 1000u);
    compute_curvature(sphere);
    const auto& curvature = sphere.attributes.at("curvature");
    double mean = 0.0;
    for (double c : curvature) mean += c;
    mean /= static_cast<double>(curvature.size());
    double var = 0.0;
    for (double c : curvature) var += (c - mean) * (c - mean);
    var /= static_cast<double>(curvature.size());
    EXPECT_LT(std::sqrt(var) / mean, 0.2);
}

TEST(Curvature, EdgeWearOrderingOnCube) {
    // End-to-end: edge wear driven by mesh curvature ranks crease vertices
    // strictly above face interiors.
    Mesh cube = make_box(1.0, 1.0, 1.0, 4);
    compute_curvature(cube);

    GraphBuilder g;
    Value p = ops::position(g);
    Value curv = ops::aux_float(g, "curvature");
    g.output("mask", ops::edge_wear(g, p, curv, 1.5, 4.0));
    Graph graph = g.build();

    const SampleBatch batch = mesh_batch(cube);
    const FieldBuffer mask = evaluate(graph, "mask", batch);
    const auto& curvature = cube.attributes.at("curvature");
    double min_crease = 1e300, max_flat = -1e300;
    for (std::size_t i = 0; i < curvature.size(); ++i) {
        if (curvature[i] > 0.1) min_crease = std::min(min_crease, mask.data[i]);
        else max_flat = std::max(max_flat, mask.data[i]);
    }
    EXPECT_GT(min_crease, max_flat);
    EXPECT_EQ(max_flat, 0.0);
}

TEST(MeshOps, DegenerateFaceDetected) {
    Mesh m = make_grid(2, 2, 1.0);
    m.vertices[1] = m.vertices[0];
    m.vertices[4] = m.vertices[0];
    m.vertices[3] = m.vertices[0];
    EXPECT_THROW(compute_normals(m), Error);
}

TEST(MeshOps, NonManifoldEdgeRejected) {
    Mesh m = make_grid(2, 1, 1.0);
    m.faces.push_back(m.faces[0]);
    m.corner_uv.push_back(m.corner_uv[0]);
    m.faces.push_back(m.faces[0]);
    m.corner_uv.push_back(m.corner_uv[0]);
    EXPECT_THROW(compute_curvature(m), Error);
}

TEST(MeshObj, DeterministicStructure) {
    const Mesh m = make_grid(2, 2, 1.0);
    const std::string obj = mesh_to_obj(m);
    EXPECT_EQ(obj, mesh_to_obj(m));

    int v = 0, vt = 0, vn = 0, f = 0;
    std::istringstream is(obj);
    std::string line;
    while (std::getline(is, line)) {
        if (line.rfind("v ", 0) == 0) ++v;
        else if (line.rfind("vt ", 0) == 0) ++vt;
        else if (line.rfind("vn ", 0) == 0) ++vn;
        else if (line.rfind("f ", 0) == 0) ++f;
    }
    EXPECT_EQ(v, 9);
    EXPECT_EQ(vn, 9);
    EXPECT_EQ(vt, 16);  // one per face corner
    EXPECT_EQ(f, 4);
    EXPECT_NE(obj.find("f 1/1/1"), std::string::npos);  // 1-based indices
}

TEST(MeshHash, DistinguishesContent) {
    const Mesh a = make_grid(2, 2, 1.0);
    Mesh b = a;
    EXPECT_EQ(mesh_content_hash(a), mesh_content_hash(b));
    b.vertices[0].x += 1e-9;
    EXPECT_NE(mesh_content_hash(a), mesh_content_hash(b));
}
