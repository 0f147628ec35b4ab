#include <gtest/gtest.h>

#include "procgen/bake.hpp"
#include "procgen/materials/samplers.hpp"
#include "procgen/transpile.hpp"

using namespace procgen;

namespace {

Graph simple_sum() {
    GraphBuilder g;
    Value a = ops::const_float(g, 1.5);
    Value b = ops::const_float(g, 2.5);
    g.output("out", a + b);
    return g.build();
}

}  // namespace

TEST(Emit, InfixOperatorsOnSingleUse) {
    const std::string text = emit(simple_sum(), {});
    EXPECT_NE(text.find(" + "), std::string::npos);
    EXPECT_EQ(text.find("ops::add"), std::string::npos);
}

TEST(Emit, NamedCallsWithoutOperators) {
    EmitOptions opts;
    opts.use_operators = false;
    const std::string text = emit(simple_sum(), opts);
    EXPECT_NE(text.find("ops::add"), std::string::npos);
}

TEST(Emit, DoubleUseBindsVariable) {
    GraphBuilder g;
    Value a = ops::const_float(g, 1.0);
    Value sum = a + 2.0;    // consumed twice below
    g.output("x", sum + 1.0);
    g.output("y", sum * 3.0);
    const std::string text = emit(g.build(), {});
    // The add node feeding both outputs must have a variable name.
    EXPECT_NE(text.find("add_0"), std::string::npos);
}

TEST(Emit, Deterministic) {
    const Graph g = run_sampler(materials::find_sampler("composed"), 11).graph;
    EXPECT_EQ(emit(g, {}), emit(g, {}));
}

TEST(Emit, InliningNeverChangesSemantics) {
    // Emission options only change text; the canonical graph they describe
    // stays the same, which the acceptance harness checks by executing.
    const Graph g = run_sampler(materials::find_sampler("marble"), 4).graph;
    EmitOptions inlined;
    EmitOptions spelled;
    spelled.inline_max_uses = 0;
    spelled.use_operators = false;
    EXPECT_NE(emit(g, inlined), emit(g, spelled));
}

TEST(Isomorphism, SerializeParseIsIsomorphic) {
    const Graph g = run_sampler(materials::find_sampler("wood"), 3).graph;
    const Graph back = parse_graph(serialize_graph(g));
    EXPECT_TRUE(graph_isomorphic(g, back));
}

TEST(Isomorphism, ParamChangeBreaksIt) {
    const Graph g = run_sampler(materials::find_sampler("wood"), 3).graph;
    Graph tweaked = parse_graph(serialize_graph(g));
    for (Node& n : tweaked.nodes)
        if (n.op == "perlin_noise") n.params["frequency"] = ParamValue(123.0);
    EXPECT_FALSE(graph_isomorphic(g, tweaked));
}

TEST(Isomorphism, NodeOrderIrrelevant) {
    // Build the same dataflow twice with different creation orders.
    GraphBuilder g1;
    {
        Value p = ops::position(g1);
        Value n1 = ops::perlin_noise(g1, p, 2.0);
        Value n2 = ops::white_noise(g1, p);
        g1.output("out", ops::mix(g1, n1, n2, 0.5));
    }
    GraphBuilder g2;
    {
        Value p = ops::position(g2);
        Value n2 = ops::white_noise(g2, p);
        Value n1 = ops::perlin_noise(g2, p, 2.0);
        g2.output("out", ops::mix(g2, n1, n2, 0.5));
    }
    EXPECT_TRUE(graph_isomorphic(g1.build(), g2.build()));
}

TEST(Interpolate, EndpointsExact) {
    const SamplerDef& wood = materials::find_sampler("wood");
    const Graph a = run_sampler(wood, 1).graph;
    const Graph b = run_sampler(wood, 2).graph;
    EXPECT_TRUE(graphs_equal(interpolate_params(a, b, 0.0), a));
    EXPECT_TRUE(graphs_equal(interpolate_params(a, b, 1.0), b));
}

TEST(Interpolate, MidpointSingleParam) {
    GraphBuilder ga;
    {
        Value p = ops::position(ga);
        ga.output("n", ops::perlin_noise(ga, p, 2.0));
    }
    GraphBuilder gb;
    {
        Value p = ops::position(gb);
        gb.output("n", ops::perlin_noise(gb, p, 4.0));
    }
    const Graph mid = interpolate_params(ga.build(), gb.build(), 0.5);
    EXPECT_EQ(mid.nodes[1].param("frequency").as_double(), 3.0);
}

TEST(Interpolate, StructureMismatchRejected) {
    const Graph a = run_sampler(materials::find_sampler("wood"), 1).graph;
    const Graph b = run_sampler(materials::find_sampler("marble"), 1).graph;
    try {
        interpolate_params(a, b, 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::structure_mismatch);
    }
}

TEST(Interpolate, BakeVariesMonotonically) {
    // Sweeping t moves the bake smoothly from a's to b's. On a corpus graph
    // whose interpolated parameters act linearly on pixels (colors and a
    // noise amplitude over a fixed field), the mean pixel delta against a's
    // bake grows monotonically in t.
    auto build = [](const Vec3& color, double amp) {
        GraphBuilder g;
        Value p = ops::position(g);
        Value n = ops::perlin_noise(g, p, 3.0);
        Value tinted = g.constant(ParamValue::color(color.x, color.y, color.z));
        g.output("surface", ops::mix(g, tinted, tinted * 0.25, n * amp + 0.5));
        return g.build();
    };
    const Graph a = build({0.8, 0.45, 0.2}, 0.1);
    const Graph b = build({0.2, 0.5, 0.85}, 0.45);

    const Image base = bake_texture(a, "surface", 32);
    double prev = -1.0;
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const Image img = bake_texture(interpolate_params(a, b, t), "surface", 32);
        double delta = 0.0;
        for (std::size_t i = 0; i < img.data.size(); ++i)
            delta += std::fabs(img.data[i] - base.data[i]);
        delta /= static_cast<double>(img.data.size());
        EXPECT_GE(delta, prev - 1e-12) << t;
        prev = delta;
    }
}

TEST(HsvRewrite, ExactColorsBecomeHsvLiterals) {
    GraphBuilder g;
    g.output("c", ops::const_color(g, 1.0, 0.0, 0.0));  // pure red: exact round trip
    EmitOptions opts;
    opts.hsv_colors = true;
    const std::string text = emit(g.build(), opts);
    EXPECT_NE(text.find("const_color_hsv"), std::string::npos);
}

TEST(HsvRewrite, OnlyWhenBitExact) {
    // A color whose hsv round-trip is not bit-exact must stay in RGB form so
    // the rebuilt graph remains isomorphic.
    const Vec3 rgb{0.3141592653589793, 0.2718281828459045, 0.1414213562373095};
    GraphBuilder g;
    g.output("c", ops::const_color(g, rgb.x, rgb.y, rgb.z));
    const Graph graph = g.build();
    EmitOptions opts;
    opts.hsv_colors = true;
    const std::string text = emit(graph, opts);
    const Vec3 hsv = rgb_to_hsv(rgb);
    if (hsv_to_rgb(hsv.x, hsv.y, hsv.z) == rgb) {
        EXPECT_NE(text.find("const_color_hsv"), std::string::npos);
    } else {
        EXPECT_EQ(text.find("const_color_hsv"), std::string::npos);
        EXPECT_NE(text.find("ParamValue::color"), std::string::npos);
    }
}

TEST(HsvRewrite, HostHelperRebuildsSameNode) {
    GraphBuilder g1;
    g1.output("c", ops::const_color(g1, 1.0, 0.0, 0.0));
    GraphBuilder g2;
    g2.output("c", ops::const_color_hsv(g2, 0.0, 1.0, 1.0));
    EXPECT_TRUE(graph_isomorphic(g1.build(), g2.build()));
}

TEST(Canonical, OrderIsStableUnderRoundTrip) {
    const Graph g = run_sampler(materials::find_sampler("fabric"), 9).graph;
    const Graph c1 = canonicalize(g);
    const Graph c2 = canonicalize(parse_graph(serialize_graph(c1)));
    EXPECT_TRUE(graphs_equal(c1, c2));
}
