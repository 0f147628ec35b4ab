#pragma once

#include <json.hpp>

#include "procgen/materials/core.hpp"

namespace procgen::materials {

// Mask generators: vector in, scalar mask in [0, 1] out. Edge wear
// additionally reads the per-point "curvature" aux field.

struct CracksMaskParams {
    double scale = 4.0;   // cells per unit, (0, 64]
    double width = 0.06;  // edge band width in cell units, [0, 0.5]
    double depth = 0.004; // displacement recess used when layered, [0, 0.02]

    void check() const {
        pdetail::require(scale > 0.0 && scale <= 64.0, "cracks.scale");
        pdetail::require(width >= 0.0 && width <= 0.5, "cracks.width");
        pdetail::require(depth >= 0.0 && depth <= 0.02, "cracks.depth");
    }
};

struct ScratchesMaskParams {
    double density = 1.5;      // expected segments per cell, [0, 64]
    double length = 0.25;      // segment length, (0, 2]
    double width = 0.004;      // capsule radius, (0, length)
    double seed_offset = 0.0;

    void check() const {
        pdetail::require(density >= 0.0 && density <= 64.0, "scratches.density");
        pdetail::require(length > 0.0 && length <= 2.0, "scratches.length");
        pdetail::require(width > 0.0 && width < length, "scratches.width");
    }
};

struct SmudgesMaskParams {
    double scale = 2.0;     // (0, 64]
    double coverage = 0.3;  // expected covered fraction, [0, 1]

    void check() const {
        pdetail::require(scale > 0.0 && scale <= 64.0, "smudges.scale");
        pdetail::require(coverage >= 0.0 && coverage <= 1.0, "smudges.coverage");
    }
};

struct EdgeWearMaskParams {
    double intensity = 1.2;    // curvature multiplier, [0, 64]
    double noise_scale = 6.0;  // (0, 64]

    void check() const {
        pdetail::require(intensity >= 0.0 && intensity <= 64.0, "edge_wear.intensity");
        pdetail::require(noise_scale > 0.0 && noise_scale <= 64.0, "edge_wear.noise_scale");
    }
};

inline MaskResult make_cracks_mask(GraphBuilder& g, const CracksMaskParams& p, Value vector) {
    p.check();
    MaskResult m;
    m.mask = ops::cracks(g, vector, p.scale, p.width);
    m.is_crack = true;
    m.crack_depth = p.depth;
    return m;
}

inline MaskResult make_scratches_mask(GraphBuilder& g, const ScratchesMaskParams& p,
                                      Value vector) {
    p.check();
    MaskResult m;
    m.mask = ops::scratches(g, vector, p.density, p.length, p.width, p.seed_offset);
    return m;
}

inline MaskResult make_smudges_mask(GraphBuilder& g, const SmudgesMaskParams& p, Value vector) {
    p.check();
    MaskResult m;
    m.mask = ops::smudges(g, vector, p.scale, p.coverage);
    return m;
}

inline MaskResult make_edge_wear_mask(GraphBuilder& g, const EdgeWearMaskParams& p,
                                      Value vector) {
    p.check();
    Value curvature = ops::aux_float(g, "curvature");
    MaskResult m;
    m.mask = ops::edge_wear(g, vector, curvature, p.intensity, p.noise_scale);
    return m;
}

// Standalone mask graph conforming to the MaskInterface: one "mask" output.
inline void check_mask_interface(const Graph& g) {
    if (!g.outputs.count("mask"))
        raise(errc::interface_mismatch, "mask graph must expose a 'mask' output");
    if (g.kind_of(g.outputs.at("mask")) != ValueKind::Float)
        raise(errc::interface_mismatch, "mask must be Float");
}

}  // namespace procgen::materials
