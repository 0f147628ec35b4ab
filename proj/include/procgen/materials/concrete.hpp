#pragma once

#include <json.hpp>

#include "procgen/materials/core.hpp"

namespace procgen::materials {

// Voronoi aggregate pits in an fbm-mottled gray.
struct ConcreteParams {
    Hsv base{0.1, 0.04, 0.62};
    double aggregate_scale = 12.0;  // voronoi cells per unit, (0, 64]
    double pit_radius = 0.12;       // pit extent inside a cell, (0, 0.45]
    double pit_depth = 0.003;       // displacement recess, [0, 0.02]
    double mottle_scale = 2.0;      // (0, 16]
    double mottle_amp = 0.1;        // value modulation, [0, 0.4]
    double roughness_base = 0.85;

    void check() const {
        pdetail::require(aggregate_scale > 0.0 && aggregate_scale <= 64.0,
                         "concrete.aggregate_scale");
        pdetail::require(pit_radius > 0.0 && pit_radius <= 0.45, "concrete.pit_radius");
        pdetail::require(pit_depth >= 0.0 && pit_depth <= 0.02, "concrete.pit_depth");
        pdetail::require(mottle_scale > 0.0 && mottle_scale <= 16.0, "concrete.mottle_scale");
        pdetail::require(mottle_amp >= 0.0 && mottle_amp <= 0.4, "concrete.mottle_amp");
        pdetail::require(roughness_base >= 0.0 && roughness_base <= 1.0,
                         "concrete.roughness_base");
    }

    static ConcreteParams from_json(const nlohmann::json& j) {
        ConcreteParams p;
        if (j.contains("hue")) p.base.h = j.at("hue").get<double>();
        if (j.contains("saturation")) p.base.s = j.at("saturation").get<double>();
        if (j.contains("value")) p.base.v = j.at("value").get<double>();
        if (j.contains("aggregate_scale"))
            p.aggregate_scale = j.at("aggregate_scale").get<double>();
        if (j.contains("pit_radius")) p.pit_radius = j.at("pit_radius").get<double>();
        if (j.contains("pit_depth")) p.pit_depth = j.at("pit_depth").get<double>();
        if (j.contains("mottle_scale")) p.mottle_scale = j.at("mottle_scale").get<double>();
        if (j.contains("mottle_amp")) p.mottle_amp = j.at("mottle_amp").get<double>();
        if (j.contains("roughness_base")) p.roughness_base = j.at("roughness_base").get<double>();
        return p;
    }
};

inline MaterialOutputs make_concrete(GraphBuilder& g, const ConcreteParams& p, Value vector) {
    p.check();
    auto vor = ops::voronoi(g, vector, p.aggregate_scale);
    // Pit where the scaled feature distance is below pit_radius.
    Value d = vor.out("distance") * p.aggregate_scale;
    Value pit = 1.0 - ops::smoothstep(g, d, p.pit_radius * 0.5, p.pit_radius);

    Value mottle = ops::fbm(g, vector, p.mottle_scale, 3, 2.0, 0.5);
    Value v = ops::clamp(g, mottle * p.mottle_amp + p.base.v, 0.0, 1.0);
    Value surface_v = ops::mix(g, v, v * 0.6, pit);  // pits read darker

    MaterialOutputs m;
    m.surface = ops::hsv_to_rgb(g, p.base.h, p.base.s, surface_v);
    m.roughness = ops::clamp(g, pit * 0.1 + p.roughness_base, 0.0, 1.0);
    if (p.pit_depth > 0.0)
        m.displacement = pit * -p.pit_depth;
    else
        m.displacement = ops::const_float(g, 0.0);
    return m;
}

}  // namespace procgen::materials
