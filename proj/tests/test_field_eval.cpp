#include <gtest/gtest.h>

#include <chrono>

#include "procgen/bake.hpp"
#include "procgen/builder_ops.hpp"
#include "procgen/rng.hpp"

using namespace procgen;

namespace {

SampleBatch random_batch(std::size_t n, std::uint64_t seed) {
    RandomStream s = RandomStream::root(seed);
    SampleBatch batch;
    for (std::size_t i = 0; i < n; ++i)
        batch.points.push_back({uniform(s, -5, 5), uniform(s, -5, 5), uniform(s, -5, 5)});
    return batch;
}

}  // namespace

TEST(FieldEval, ConstantGraphBroadcasts) {
    GraphBuilder g;
    g.output("c", ops::const_float(g, 3.5));
    Graph graph = g.build();
    SampleBatch batch = random_batch(10, 1);
    FieldBuffer buf = evaluate(graph, "c", batch);
    ASSERT_EQ(buf.data.size(), 10u);
    for (double v : buf.data) EXPECT_EQ(v, 3.5);
}

TEST(FieldEval, ChunkingConcatenatesBitExactly) {
    GraphBuilder g;
    Value p = ops::position(g);
    Value n = ops::fbm(g, p, 2.0, 3, 2.0, 0.5);
    g.output("n", n * 2.0 + 0.1);
    Graph graph = g.build();

    SampleBatch batch = random_batch(1000, 2);
    FieldBuffer whole = evaluate(graph, "n", batch);
    FieldBuffer lo = evaluate(graph, "n", batch.slice(0, 400));
    FieldBuffer hi = evaluate(graph, "n", batch.slice(400, 1000));
    std::vector<double> stitched = lo.data;
    stitched.insert(stitched.end(), hi.data.begin(), hi.data.end());
    EXPECT_EQ(whole.data, stitched);
}

TEST(FieldEval, DiamondSharedNodeEvaluatedOnce) {
    GraphBuilder g;
    Value p = ops::position(g);
    Value shared = ops::perlin_noise(g, p, 2.0);
    Value left = shared * 2.0;
    Value right = shared + 1.0;
    g.output("out", left * right);
    Graph graph = g.build();  // 5 nodes: position, perlin, mul, add, mul

    SampleBatch batch = random_batch(64, 3);
    instrumentation::reset_node_evals();
    evaluate(graph, "out", batch);
    EXPECT_EQ(instrumentation::node_evals(), graph.nodes.size());
}

TEST(FieldEval, ExactlyNNodeEvaluations) {
    GraphBuilder g;
    Value p = ops::position(g);
    Value acc = ops::perlin_noise(g, p, 1.0);
    for (int i = 0; i < 40; ++i) acc = acc + static_cast<double>(i);
    g.output("out", acc);
    Graph graph = g.build();

    SampleBatch batch = random_batch(512, 4);
    instrumentation::reset_node_evals();
    evaluate(graph, "out", batch);
    EXPECT_EQ(instrumentation::node_evals(), graph.nodes.size());
}

TEST(FieldEval, DegenerateMapRangeRaisesEvalDomain) {
    GraphBuilder g;
    Value x = ops::const_float(g, 0.5);
    g.output("m", ops::map_range(g, x, 1.0, 1.0, 0.0, 2.0));
    Graph graph = g.build();
    SampleBatch batch = random_batch(4, 5);
    try {
        evaluate(graph, "m", batch);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::eval_domain);
        EXPECT_NE(std::string(e.what()).find("DegenerateRange"), std::string::npos);
    }
}

TEST(FieldEval, MissingAuxField) {
    GraphBuilder g;
    g.output("c", ops::aux_float(g, "curvature"));
    Graph graph = g.build();
    SampleBatch batch = random_batch(4, 6);
    try {
        evaluate(graph, "c", batch);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::missing_aux_field);
    }
}

TEST(FieldEval, DivisionByZeroYieldsInfNotError) {
    GraphBuilder g;
    Value x = ops::const_float(g, 1.0);
    g.output("q", x / 0.0);
    Graph graph = g.build();
    SampleBatch batch = random_batch(3, 7);
    FieldBuffer buf = evaluate(graph, "q", batch);
    for (double v : buf.data) EXPECT_TRUE(std::isinf(v));
}

TEST(FieldEval, InvalidParamRangeRaisesEvalDomain) {
    GraphBuilder g;
    Value p = ops::position(g);
    g.output("n", ops::perlin_noise(g, p, -1.0));
    Graph graph = g.build();
    SampleBatch batch = random_batch(4, 8);
    EXPECT_THROW(evaluate(graph, "n", batch), Error);
}

namespace {

Graph smooth_color_material() {
    GraphBuilder g;
    Value p = ops::position(g);
    Value n = ops::fbm(g, p, 2.0, 3, 2.0, 0.5);
    Value h = ops::fract(g, n * 0.3 + 0.6);
    g.output("surface", ops::hsv_to_rgb(g, h, 0.5, 0.9));
    return g.build();
}

}  // namespace

TEST(Bake, ConstantColorMaterial) {
    GraphBuilder g;
    g.output("surface", ops::const_color(g, 0.2, 0.4, 0.8));
    Graph graph = g.build();
    Image img = bake_texture(graph, "surface", 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) {
            EXPECT_EQ(img.at(x, y, 0), 0.2);
            EXPECT_EQ(img.at(x, y, 1), 0.4);
            EXPECT_EQ(img.at(x, y, 2), 0.8);
        }
}

TEST(Bake, DeterministicBitIdentical) {
    Graph graph = smooth_color_material();
    Image a = bake_texture(graph, "surface", 64);
    Image b = bake_texture(graph, "surface", 64);
    EXPECT_EQ(a.data, b.data);
}

TEST(Bake, DownsampleSelfConsistency) {
    Graph graph = smooth_color_material();
    const int r = 64;
    Image lo = bake_texture(graph, "surface", r);
    Image hi = bake_texture(graph, "surface", 2 * r);
    double diff = 0.0;
    for (int y = 0; y < r; ++y)
        for (int x = 0; x < r; ++x)
            for (int c = 0; c < 3; ++c) {
                const double box = (hi.at(2 * x, 2 * y, c) + hi.at(2 * x + 1, 2 * y, c) +
                                    hi.at(2 * x, 2 * y + 1, c) + hi.at(2 * x + 1, 2 * y + 1, c)) /
                                   4.0;
                diff += std::fabs(box - lo.at(x, y, c));
            }
    diff /= r * r * 3;
    EXPECT_LT(diff, 0.05);
}

TEST(Bake, FloatChannelReplicatesToGrayscale) {
    GraphBuilder g;
    Value p = ops::position(g);
    g.output("rough", ops::perlin_noise(g, p, 3.0) * 0.5 + 0.5);
    Graph graph = g.build();
    Image img = bake_texture(graph, "rough", 8);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            EXPECT_EQ(img.at(x, y, 0), img.at(x, y, 1));
            EXPECT_EQ(img.at(x, y, 1), img.at(x, y, 2));
        }
}

TEST(Bake, ResolutionBounds) {
    Graph graph = smooth_color_material();
    EXPECT_THROW(bake_texture(graph, "surface", 0), Error);
    EXPECT_THROW(bake_texture(graph, "surface", 20000), Error);
}

// Desk-scale performance gate: at least 5e6 point*node evaluations per
// second per core on an arithmetic-dominated graph.
TEST(FieldEval, ArithmeticThroughputGate) {
    GraphBuilder g;
    Value p = ops::position(g);
    Value x = ops::separate_vec3(g, p).out("x");
    Value acc = x;
    for (int i = 0; i < 31; ++i) acc = acc * 1.0001 + 0.25;
    g.output("out", acc);
    Graph graph = g.build();  // 65 nodes, all but two trivially cheap

    SampleBatch batch = random_batch(1 << 16, 9);
    evaluate(graph, "out", batch);  // warm up

    const auto start = std::chrono::steady_clock::now();
    int reps = 0;
    double elapsed = 0.0;
    do {
        evaluate(graph, "out", batch);
        ++reps;
        elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } while (elapsed < 0.5);

    const double point_nodes = static_cast<double>(graph.nodes.size()) *
                               static_cast<double>(batch.size()) * reps;
    const double rate = point_nodes / elapsed;
    RecordProperty("point_node_rate", std::to_string(rate));
    EXPECT_GT(rate, 5e6);
}
