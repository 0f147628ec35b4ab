#pragma once

#include <json.hpp>

#include "procgen/materials/core.hpp"

namespace procgen::materials {

// Plain weave: two thread directions from thresholded sines, a checker that
// decides which thread is on top, and a small weave-bump displacement.
struct FabricParams {
    double threads_u = 40.0;  // threads per unit along u, [4, 400]
    double threads_v = 40.0;  // threads per unit along v, [4, 400]
    Hsv warp{0.07, 0.5, 0.55};   // threads along v (vary with x)
    Hsv weft{0.10, 0.45, 0.45};  // threads along u
    double fuzz = 0.15;          // value jitter from high-frequency noise, [0, 0.5]
    double roughness_base = 0.8;
    double weave_amp = 0.0015;   // displacement amplitude, [0, 0.01]

    void check() const {
        pdetail::require(threads_u >= 4.0 && threads_u <= 400.0, "fabric.threads_u");
        pdetail::require(threads_v >= 4.0 && threads_v <= 400.0, "fabric.threads_v");
        pdetail::require(fuzz >= 0.0 && fuzz <= 0.5, "fabric.fuzz");
        pdetail::require(roughness_base >= 0.0 && roughness_base <= 1.0,
                         "fabric.roughness_base");
        pdetail::require(weave_amp >= 0.0 && weave_amp <= 0.01, "fabric.weave_amp");
    }

    static FabricParams from_json(const nlohmann::json& j) {
        FabricParams p;
        if (j.contains("threads_u")) p.threads_u = j.at("threads_u").get<double>();
        if (j.contains("threads_v")) p.threads_v = j.at("threads_v").get<double>();
        if (j.contains("fuzz")) p.fuzz = j.at("fuzz").get<double>();
        if (j.contains("roughness_base")) p.roughness_base = j.at("roughness_base").get<double>();
        if (j.contains("weave_amp")) p.weave_amp = j.at("weave_amp").get<double>();
        return p;
    }
};

inline MaterialOutputs make_fabric(GraphBuilder& g, const FabricParams& p, Value vector) {
    p.check();
    auto xyz = ops::separate_vec3(g, vector);
    Value x = xyz.out("x");
    Value y = xyz.out("y");

    Value su = ops::abs(g, ops::sin(g, x * (3.141592653589793 * p.threads_u)));
    Value sv = ops::abs(g, ops::sin(g, y * (3.141592653589793 * p.threads_v)));

    // Checkerboard over thread crossings decides over/under.
    Value cu = ops::floor(g, x * p.threads_u);
    Value cv = ops::floor(g, y * p.threads_v);
    Value checker = ops::mod(g, cu + cv, 2.0);

    Value thread_color = ops::mix(g, hsv_const(g, p.warp), hsv_const(g, p.weft), checker);
    // Darken toward the gaps between threads.
    Value profile = ops::max(g, su, sv);
    Value shade = ops::clamp(g, profile * 0.5 + 0.5, 0.0, 1.0);
    MaterialOutputs m;
    Value lit = ops::mix(g, thread_color * 0.55, thread_color, shade);
    if (p.fuzz > 0.0) {
        Value n = ops::fbm(g, vector, 48.0, 2, 2.0, 0.5);
        lit = ops::mix(g, lit, lit * (n * p.fuzz + 1.0), 0.5);
    }
    m.surface = lit;

    m.roughness = ops::clamp(g, ops::const_float(g, p.roughness_base), 0.0, 1.0);
    if (p.weave_amp > 0.0)
        m.displacement = ops::mix(g, su, sv, checker) * p.weave_amp;
    else
        m.displacement = ops::const_float(g, 0.0);
    return m;
}

}  // namespace procgen::materials
