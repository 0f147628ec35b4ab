#pragma once

#include <json.hpp>

#include "procgen/materials/core.hpp"

namespace procgen::materials {

// Sine-of-fbm veins over a bright base.
struct MarbleParams {
    double vein_scale = 2.0;       // fbm frequency feeding the vein phase, (0, 16]
    double vein_strength = 4.0;    // phase distortion amount, [0, 12]
    double vein_sharpness = 3.0;   // exponent sharpening the vein line, [0.5, 8]
    Hsv base{0.08, 0.03, 0.92};
    Hsv vein{0.62, 0.25, 0.35};
    double roughness_base = 0.25;
    double displacement_amp = 0.002;  // [0, 0.05]

    void check() const {
        pdetail::require(vein_scale > 0.0 && vein_scale <= 16.0, "marble.vein_scale");
        pdetail::require(vein_strength >= 0.0 && vein_strength <= 12.0, "marble.vein_strength");
        pdetail::require(vein_sharpness >= 0.5 && vein_sharpness <= 8.0, "marble.vein_sharpness");
        pdetail::require(roughness_base >= 0.0 && roughness_base <= 1.0, "marble.roughness_base");
        pdetail::require(displacement_amp >= 0.0 && displacement_amp <= 0.05,
                         "marble.displacement_amp");
    }

    static MarbleParams from_json(const nlohmann::json& j) {
        MarbleParams p;
        if (j.contains("vein_scale")) p.vein_scale = j.at("vein_scale").get<double>();
        if (j.contains("vein_strength")) p.vein_strength = j.at("vein_strength").get<double>();
        if (j.contains("vein_sharpness")) p.vein_sharpness = j.at("vein_sharpness").get<double>();
        if (j.contains("roughness_base")) p.roughness_base = j.at("roughness_base").get<double>();
        if (j.contains("displacement_amp"))
            p.displacement_amp = j.at("displacement_amp").get<double>();
        return p;
    }
};

inline MaterialOutputs make_marble(GraphBuilder& g, const MarbleParams& p, Value vector) {
    p.check();
    auto xyz = ops::separate_vec3(g, vector);
    Value turb = ops::fbm(g, vector, p.vein_scale, 4, 2.0, 0.5);
    Value phase = xyz.out("x") + xyz.out("y") * 0.5 + turb * p.vein_strength;
    Value wave = ops::sin(g, phase * 3.141592653589793);
    // 1 at the vein line, falling off by |sin|^sharpness.
    Value vein01 = ops::pow(g, 1.0 - ops::abs(g, wave), p.vein_sharpness);

    MaterialOutputs m;
    m.surface = ops::mix(g, hsv_const(g, p.base), hsv_const(g, p.vein), vein01);
    m.roughness = ops::clamp(g, ops::const_float(g, p.roughness_base), 0.0, 1.0);
    if (p.displacement_amp > 0.0)
        m.displacement = vein01 * -p.displacement_amp;  // veins sit in shallow grooves
    else
        m.displacement = ops::const_float(g, 0.0);
    return m;
}

}  // namespace procgen::materials
