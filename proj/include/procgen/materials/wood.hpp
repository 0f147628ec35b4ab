#pragma once

#include <json.hpp>

#include "procgen/materials/core.hpp"

namespace procgen::materials {

// Ring structure along x, warped by fbm. Ring value drives the light/dark
// color blend, the roughness, and a shallow groove displacement.
struct WoodParams {
    double ring_frequency = 6.0;   // rings per meter, (0, 64]
    double ring_warp = 0.15;       // warp amplitude in ring phase, [0, 0.5]
    double warp_scale = 1.5;       // fbm frequency of the warp, (0, 16]
    Hsv light{0.083, 0.45, 0.72};
    Hsv dark{0.066, 0.55, 0.35};
    double roughness_base = 0.55;  // [0, 1]
    double roughness_var = 0.15;   // [0, 0.5]
    double displacement_amp = 0.004;  // meters, [0, 0.05]

    void check() const {
        pdetail::require(ring_frequency > 0.0 && ring_frequency <= 64.0, "wood.ring_frequency");
        pdetail::require(ring_warp >= 0.0 && ring_warp <= 0.5, "wood.ring_warp");
        pdetail::require(warp_scale > 0.0 && warp_scale <= 16.0, "wood.warp_scale");
        pdetail::require(roughness_base >= 0.0 && roughness_base <= 1.0, "wood.roughness_base");
        pdetail::require(roughness_var >= 0.0 && roughness_var <= 0.5, "wood.roughness_var");
        pdetail::require(displacement_amp >= 0.0 && displacement_amp <= 0.05,
                         "wood.displacement_amp");
    }

    static WoodParams from_json(const nlohmann::json& j) {
        WoodParams p;
        if (j.contains("ring_frequency")) p.ring_frequency = j.at("ring_frequency").get<double>();
        if (j.contains("ring_warp")) p.ring_warp = j.at("ring_warp").get<double>();
        if (j.contains("warp_scale")) p.warp_scale = j.at("warp_scale").get<double>();
        if (j.contains("roughness_base")) p.roughness_base = j.at("roughness_base").get<double>();
        if (j.contains("roughness_var")) p.roughness_var = j.at("roughness_var").get<double>();
        if (j.contains("displacement_amp"))
            p.displacement_amp = j.at("displacement_amp").get<double>();
        return p;
    }
};

inline MaterialOutputs make_wood(GraphBuilder& g, const WoodParams& p, Value vector) {
    p.check();
    auto xyz = ops::separate_vec3(g, vector);
    Value x = xyz.out("x");

    Value phase = x;
    if (p.ring_warp > 0.0) {
        Value warp = ops::fbm(g, vector, p.warp_scale, 3, 2.0, 0.5);
        phase = x + warp * p.ring_warp;
    }
    Value rings = ops::sin(g, phase * (6.283185307179586 * p.ring_frequency));
    Value t = rings * 0.5 + 0.5;

    Value light = hsv_const(g, p.light);
    Value dark = hsv_const(g, p.dark);
    MaterialOutputs m;
    m.surface = ops::mix(g, dark, light, t);

    if (p.roughness_var > 0.0) {
        Value rnoise = ops::fbm(g, vector, 8.0, 2, 2.0, 0.5);
        m.roughness = ops::clamp(g, rnoise * p.roughness_var + p.roughness_base, 0.0, 1.0);
    } else {
        m.roughness = ops::clamp(g, ops::const_float(g, p.roughness_base), 0.0, 1.0);
    }

    // Grooves between rings, plus fine grain. |t - 0.5|*2 is in [0, 1] and
    // the grain term in [-1, 1], so |displacement| <= displacement_amp.
    Value groove = ops::abs(g, t - 0.5) * 2.0;
    if (p.displacement_amp > 0.0) {
        Value grain = ops::perlin_noise(g, vector, 24.0);
        Value relief = ops::mix(g, groove, grain, 0.25);
        m.displacement = relief * p.displacement_amp;
    } else {
        m.displacement = ops::const_float(g, 0.0);
    }
    return m;
}

}  // namespace procgen::materials
