#pragma once

#include <string>

#include "procgen/graph.hpp"

// Thin wrappers over GraphBuilder::add_node for every catalog op that
// material generators or generated code call often. All take the builder
// first; multi-output ops return the NodeHandle so callers pick sockets.

namespace procgen::ops {

inline Value position(GraphBuilder& g) { return g.add_node("position"); }
inline Value uv(GraphBuilder& g) { return g.add_node("uv"); }
inline Value aux_float(GraphBuilder& g, const std::string& name) {
    return g.add_node("aux_float", {{"name", name}});
}

inline Value add(GraphBuilder& g, const Operand& a, const Operand& b) { return g.binary("+", a, b); }
inline Value sub(GraphBuilder& g, const Operand& a, const Operand& b) { return g.binary("-", a, b); }
inline Value mul(GraphBuilder& g, const Operand& a, const Operand& b) { return g.binary("*", a, b); }
inline Value div(GraphBuilder& g, const Operand& a, const Operand& b) { return g.binary("/", a, b); }
inline Value floordiv(GraphBuilder& g, const Operand& a, const Operand& b) {
    return g.binary("//", a, b);
}
inline Value mod(GraphBuilder& g, const Operand& a, const Operand& b) {
    return g.add_node("mod", {}, {{"a", a}, {"b", b}});
}
inline Value pow(GraphBuilder& g, const Operand& a, const Operand& b) {
    return g.add_node("pow", {}, {{"a", a}, {"b", b}});
}
inline Value min(GraphBuilder& g, const Operand& a, const Operand& b) {
    return g.add_node("min", {}, {{"a", a}, {"b", b}});
}
inline Value max(GraphBuilder& g, const Operand& a, const Operand& b) {
    return g.add_node("max", {}, {{"a", a}, {"b", b}});
}
inline Value abs(GraphBuilder& g, const Operand& x) { return g.add_node("abs", {}, {{"x", x}}); }
inline Value floor(GraphBuilder& g, const Operand& x) { return g.add_node("floor", {}, {{"x", x}}); }
inline Value round(GraphBuilder& g, const Operand& x) { return g.add_node("round", {}, {{"x", x}}); }
inline Value sign(GraphBuilder& g, const Operand& x) { return g.add_node("sign", {}, {{"x", x}}); }
inline Value fract(GraphBuilder& g, const Operand& x) { return g.add_node("fract", {}, {{"x", x}}); }
inline Value sqrt(GraphBuilder& g, const Operand& x) { return g.add_node("sqrt", {}, {{"x", x}}); }
inline Value sin(GraphBuilder& g, const Operand& x) { return g.add_node("sin", {}, {{"x", x}}); }
inline Value cos(GraphBuilder& g, const Operand& x) { return g.add_node("cos", {}, {{"x", x}}); }
inline Value step(GraphBuilder& g, const Operand& edge, const Operand& x) {
    return g.add_node("step", {}, {{"edge", edge}, {"x", x}});
}

inline Value dot(GraphBuilder& g, const Operand& a, const Operand& b) {
    return g.add_node("dot", {}, {{"a", a}, {"b", b}});
}
inline Value length(GraphBuilder& g, const Operand& v) {
    return g.add_node("length", {}, {{"v", v}});
}
inline Value normalize(GraphBuilder& g, const Operand& v) {
    return g.add_node("normalize", {}, {{"v", v}});
}
inline Value combine_vec2(GraphBuilder& g, const Operand& x, const Operand& y) {
    return g.add_node("combine_vec2", {}, {{"x", x}, {"y", y}});
}
inline Value combine_vec3(GraphBuilder& g, const Operand& x, const Operand& y, const Operand& z) {
    return g.add_node("combine_vec3", {}, {{"x", x}, {"y", y}, {"z", z}});
}
inline Value combine_color(GraphBuilder& g, const Operand& r, const Operand& gr, const Operand& b) {
    return g.add_node("combine_color", {}, {{"r", r}, {"g", gr}, {"b", b}});
}
inline NodeHandle separate_vec2(GraphBuilder& g, const Operand& v) {
    return g.add_node("separate_vec2", {}, {{"v", v}});
}
inline NodeHandle separate_vec3(GraphBuilder& g, const Operand& v) {
    return g.add_node("separate_vec3", {}, {{"v", v}});
}
inline NodeHandle separate_color(GraphBuilder& g, const Operand& c) {
    return g.add_node("separate_color", {}, {{"c", c}});
}
inline Value rotate_uv90(GraphBuilder& g, const Operand& uv, const Operand& steps) {
    return g.add_node("rotate_uv90", {}, {{"uv", uv}, {"steps", steps}});
}

inline Value map_range(GraphBuilder& g, const Operand& x, double from_lo, double from_hi,
                       double to_lo, double to_hi, bool clamp = false) {
    return g.add_node("map_range",
                      {{"from_lo", from_lo},
                       {"from_hi", from_hi},
                       {"to_lo", to_lo},
                       {"to_hi", to_hi},
                       {"clamp", clamp}},
                      {{"x", x}});
}
inline Value mix(GraphBuilder& g, const Operand& a, const Operand& b, const Operand& t) {
    return g.add_node("mix", {}, {{"a", a}, {"b", b}, {"t", t}});
}
inline Value clamp(GraphBuilder& g, const Operand& x, double lo, double hi) {
    return g.add_node("clamp", {{"lo", lo}, {"hi", hi}}, {{"x", x}});
}
inline Value smoothstep(GraphBuilder& g, const Operand& x, double lo, double hi) {
    return g.add_node("smoothstep", {{"lo", lo}, {"hi", hi}}, {{"x", x}});
}

inline Value hsv_to_rgb(GraphBuilder& g, const Operand& h, const Operand& s, const Operand& v) {
    return g.add_node("hsv_to_rgb", {}, {{"h", h}, {"s", s}, {"v", v}});
}
inline Value rgb_to_hsv(GraphBuilder& g, const Operand& color) {
    return g.add_node("rgb_to_hsv", {}, {{"color", color}});
}

inline Value perlin_noise(GraphBuilder& g, const Operand& p, double frequency) {
    return g.add_node("perlin_noise", {{"frequency", frequency}}, {{"p", p}});
}
inline Value fbm(GraphBuilder& g, const Operand& p, double frequency, std::int64_t octaves,
                 double lacunarity, double gain) {
    return g.add_node("fbm",
                      {{"frequency", frequency},
                       {"octaves", octaves},
                       {"lacunarity", lacunarity},
                       {"gain", gain}},
                      {{"p", p}});
}
inline NodeHandle voronoi(GraphBuilder& g, const Operand& p, double frequency) {
    return g.add_node("voronoi", {{"frequency", frequency}}, {{"p", p}});
}
inline Value white_noise(GraphBuilder& g, const Operand& p) {
    return g.add_node("white_noise", {}, {{"p", p}});
}

inline NodeHandle brick_grid(GraphBuilder& g, const Operand& uv, std::int64_t rows,
                             std::int64_t cols, double mortar_width, double row_offset) {
    return g.add_node("brick_grid",
                      {{"rows", rows},
                       {"cols", cols},
                       {"mortar_width", mortar_width},
                       {"row_offset", row_offset}},
                      {{"uv", uv}});
}
inline NodeHandle tile_grid(GraphBuilder& g, const Operand& uv, std::int64_t nx, std::int64_t ny,
                            double grout) {
    return g.add_node("tile_grid", {{"nx", nx}, {"ny", ny}, {"grout", grout}}, {{"uv", uv}});
}
inline NodeHandle plank_grid(GraphBuilder& g, const Operand& uv, double plank_width,
                             double length_mean, double gap) {
    return g.add_node(
        "plank_grid",
        {{"plank_width", plank_width}, {"length_mean", length_mean}, {"gap", gap}}, {{"uv", uv}});
}

inline Value scratches(GraphBuilder& g, const Operand& p, double density, double length,
                       double width, double seed_offset = 0.0) {
    return g.add_node("scratches",
                      {{"density", density},
                       {"length", length},
                       {"width", width},
                       {"seed_offset", seed_offset}},
                      {{"p", p}});
}
inline Value cracks(GraphBuilder& g, const Operand& p, double scale, double width) {
    return g.add_node("cracks", {{"scale", scale}, {"width", width}}, {{"p", p}});
}
inline Value smudges(GraphBuilder& g, const Operand& p, double scale, double coverage) {
    return g.add_node("smudges", {{"scale", scale}, {"coverage", coverage}}, {{"p", p}});
}
inline Value edge_wear(GraphBuilder& g, const Operand& p, const Operand& curvature,
                       double intensity, double noise_scale) {
    return g.add_node("edge_wear", {{"intensity", intensity}, {"noise_scale", noise_scale}},
                      {{"p", p}, {"curvature", curvature}});
}

inline Value cast_float(GraphBuilder& g, const Operand& v) {
    return g.add_node("cast_float", {}, {{"value", v}});
}
inline Value cast_int(GraphBuilder& g, const Operand& v) {
    return g.add_node("cast_int", {}, {{"value", v}});
}
inline Value cast_vec3(GraphBuilder& g, const Operand& v) {
    return g.add_node("cast_vec3", {}, {{"value", v}});
}
inline Value cast_color(GraphBuilder& g, const Operand& v) {
    return g.add_node("cast_color", {}, {{"value", v}});
}

inline Value const_float(GraphBuilder& g, double v) { return g.constant(ParamValue(v)); }
inline Value const_color(GraphBuilder& g, double r, double gr, double b) {
    return g.constant(ParamValue::color(r, gr, b));
}

}  // namespace procgen::ops

#include "procgen/colorspace.hpp"

namespace procgen::ops {

// Color constant written as HSV; the conversion happens host-side, so this
// still builds a plain const_color node.
inline Value const_color_hsv(GraphBuilder& g, double h, double s, double v) {
    const Vec3 rgb = procgen::hsv_to_rgb(h, s, v);
    return g.constant(ParamValue::color(rgb.x, rgb.y, rgb.z));
}

}  // namespace procgen::ops
