#pragma once

#include <json.hpp>

#include "procgen/materials/core.hpp"

namespace procgen::materials {

// Low roughness and brushed streaks: fbm sampled at coordinates stretched
// hard along one axis.
struct MetalParams {
    Hsv tint{0.58, 0.04, 0.75};
    double streak_scale = 3.0;     // (0, 32]
    double streak_stretch = 24.0;  // anisotropy factor, [1, 200]
    double streak_amp = 0.08;      // brightness modulation, [0, 0.3]
    double roughness_base = 0.15;  // [0, 1]
    double roughness_var = 0.08;   // [0, 0.5]

    void check() const {
        pdetail::require(streak_scale > 0.0 && streak_scale <= 32.0, "metal.streak_scale");
        pdetail::require(streak_stretch >= 1.0 && streak_stretch <= 200.0,
                         "metal.streak_stretch");
        pdetail::require(streak_amp >= 0.0 && streak_amp <= 0.3, "metal.streak_amp");
        pdetail::require(roughness_base >= 0.0 && roughness_base <= 1.0, "metal.roughness_base");
        pdetail::require(roughness_var >= 0.0 && roughness_var <= 0.5, "metal.roughness_var");
    }

    static MetalParams from_json(const nlohmann::json& j) {
        MetalParams p;
        if (j.contains("hue")) p.tint.h = j.at("hue").get<double>();
        if (j.contains("saturation")) p.tint.s = j.at("saturation").get<double>();
        if (j.contains("value")) p.tint.v = j.at("value").get<double>();
        if (j.contains("streak_scale")) p.streak_scale = j.at("streak_scale").get<double>();
        if (j.contains("streak_stretch")) p.streak_stretch = j.at("streak_stretch").get<double>();
        if (j.contains("streak_amp")) p.streak_amp = j.at("streak_amp").get<double>();
        if (j.contains("roughness_base")) p.roughness_base = j.at("roughness_base").get<double>();
        if (j.contains("roughness_var")) p.roughness_var = j.at("roughness_var").get<double>();
        return p;
    }
};

inline MaterialOutputs make_metal(GraphBuilder& g, const MetalParams& p, Value vector) {
    p.check();
    auto xyz = ops::separate_vec3(g, vector);
    Value stretched =
        ops::combine_vec3(g, xyz.out("x") * p.streak_stretch, xyz.out("y"), xyz.out("z"));
    Value streaks = ops::fbm(g, stretched, p.streak_scale, 2, 2.0, 0.5);

    MaterialOutputs m;
    Value v = ops::clamp(g, streaks * p.streak_amp + p.tint.v, 0.0, 1.0);
    m.surface = ops::hsv_to_rgb(g, p.tint.h, p.tint.s, v);
    if (p.roughness_var > 0.0)
        m.roughness = ops::clamp(g, streaks * p.roughness_var + p.roughness_base, 0.0, 1.0);
    else
        m.roughness = ops::clamp(g, ops::const_float(g, p.roughness_base), 0.0, 1.0);
    m.displacement = ops::const_float(g, 0.0);
    return m;
}

}  // namespace procgen::materials
