#pragma once

#include <json.hpp>

#include "procgen/materials/core.hpp"

namespace procgen::materials {

// Near-constant color with a subtle roughness mottle. With noise_amp == 0
// the surface is exactly one constant color (no noise nodes are built).
struct PaintParams {
    Hsv color{0.55, 0.25, 0.8};
    double noise_amp = 0.03;       // color value jitter, [0, 0.2]
    double noise_scale = 6.0;      // (0, 64]
    double roughness_base = 0.4;
    double roughness_var = 0.1;    // [0, 0.5]
    double orange_peel = 0.0005;   // displacement amplitude, [0, 0.01]

    void check() const {
        pdetail::require(noise_amp >= 0.0 && noise_amp <= 0.2, "paint.noise_amp");
        pdetail::require(noise_scale > 0.0 && noise_scale <= 64.0, "paint.noise_scale");
        pdetail::require(roughness_base >= 0.0 && roughness_base <= 1.0, "paint.roughness_base");
        pdetail::require(roughness_var >= 0.0 && roughness_var <= 0.5, "paint.roughness_var");
        pdetail::require(orange_peel >= 0.0 && orange_peel <= 0.01, "paint.orange_peel");
    }

    static PaintParams from_json(const nlohmann::json& j) {
        PaintParams p;
        if (j.contains("hue")) p.color.h = j.at("hue").get<double>();
        if (j.contains("saturation")) p.color.s = j.at("saturation").get<double>();
        if (j.contains("value")) p.color.v = j.at("value").get<double>();
        if (j.contains("noise_amp")) p.noise_amp = j.at("noise_amp").get<double>();
        if (j.contains("noise_scale")) p.noise_scale = j.at("noise_scale").get<double>();
        if (j.contains("roughness_base")) p.roughness_base = j.at("roughness_base").get<double>();
        if (j.contains("roughness_var")) p.roughness_var = j.at("roughness_var").get<double>();
        if (j.contains("orange_peel")) p.orange_peel = j.at("orange_peel").get<double>();
        return p;
    }
};

inline MaterialOutputs make_paint(GraphBuilder& g, const PaintParams& p, Value vector) {
    p.check();
    MaterialOutputs m;
    if (p.noise_amp > 0.0) {
        Value n = ops::fbm(g, vector, p.noise_scale, 2, 2.0, 0.5);
        Value v = ops::clamp(g, n * p.noise_amp + p.color.v, 0.0, 1.0);
        m.surface = ops::hsv_to_rgb(g, p.color.h, p.color.s, v);
    } else {
        m.surface = hsv_const(g, p.color);
    }
    if (p.roughness_var > 0.0) {
        Value rn = ops::fbm(g, vector, p.noise_scale * 2.0, 2, 2.0, 0.5);
        m.roughness = ops::clamp(g, rn * p.roughness_var + p.roughness_base, 0.0, 1.0);
    } else {
        m.roughness = ops::clamp(g, ops::const_float(g, p.roughness_base), 0.0, 1.0);
    }
    if (p.orange_peel > 0.0)
        m.displacement = ops::perlin_noise(g, vector, 40.0) * p.orange_peel;
    else
        m.displacement = ops::const_float(g, 0.0);
    return m;
}

}  // namespace procgen::materials
