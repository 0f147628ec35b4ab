#pragma once

#include <functional>

#include "procgen/materials/core.hpp"

namespace procgen::materials {

// Per-cell appearance variation for shaped materials. Zero amplitudes build
// no extra nodes, so a variation-free composition stays bit-identical to
// the plain base material.
struct CellVariation {
    double hue_jitter = 0.0;    // [0, 0.5]
    double value_jitter = 0.0;  // [0, 0.5]
    bool rotate = false;        // rotate cell uv by 90-degree steps keyed by cell id

    void check() const {
        pdetail::require(hue_jitter >= 0.0 && hue_jitter <= 0.5, "variation.hue_jitter");
        pdetail::require(value_jitter >= 0.0 && value_jitter <= 0.5, "variation.value_jitter");
    }
};

struct ShapeComposeParams {
    CellVariation variation;
    double edge_recess = 0.002;  // grout displacement recess in meters, [0, 0.02]

    void check() const {
        variation.check();
        pdetail::require(edge_recess >= 0.0 && edge_recess <= 0.02, "shape.edge_recess");
    }
};

// Cell-local evaluation coordinates for the material inside a shape cell,
// optionally rotated by 90-degree steps keyed by cell_id.
inline Value shape_cell_vector(GraphBuilder& g, const ShapeResult& shape,
                               const CellVariation& variation) {
    Value cell_uv = shape.cell_uv;
    if (variation.rotate) cell_uv = ops::rotate_uv90(g, cell_uv, shape.cell_id * 4.0);
    auto uv_parts = ops::separate_vec2(g, cell_uv);
    return ops::combine_vec3(g, uv_parts.out("x"), uv_parts.out("y"), 0.0);
}

// Per-cell hue/value jitter keyed by cell_id. With zero amplitudes the
// surface passes through untouched.
inline Value apply_cell_variation(GraphBuilder& g, Value surface, Value cell_id,
                                  const CellVariation& variation) {
    if (variation.hue_jitter <= 0.0 && variation.value_jitter <= 0.0) return surface;
    auto hsv = ops::separate_vec3(g, ops::rgb_to_hsv(g, surface));
    Value h = hsv.out("x");
    Value s = hsv.out("y");
    Value v = hsv.out("z");
    if (variation.hue_jitter > 0.0)
        h = ops::fract(g, h + (cell_id - 0.5) * variation.hue_jitter);
    if (variation.value_jitter > 0.0) {
        Value id2 = ops::fract(g, cell_id * 61.0);
        v = ops::clamp(g, v * ((id2 - 0.5) * variation.value_jitter + 1.0), 0.0, 1.0);
    }
    return ops::hsv_to_rgb(g, h, s, v);
}

// Blends a cell material against the grout material through the shape mask;
// grout displacement is recessed by edge_recess.
inline MaterialOutputs combine_shape(GraphBuilder& g, const ShapeResult& shape,
                                     const MaterialOutputs& cell, const MaterialOutputs& grout,
                                     double edge_recess) {
    MaterialOutputs out;
    out.surface = ops::mix(g, grout.surface, cell.surface, shape.mask);
    out.roughness = ops::mix(g, grout.roughness, cell.roughness, shape.mask);
    Value grout_disp = grout.displacement;
    if (edge_recess > 0.0) grout_disp = grout_disp - edge_recess;
    out.displacement = ops::mix(g, grout_disp, cell.displacement, shape.mask);
    return out;
}

// Builds "cells of material A with grout of material B": the cell material
// is instantiated at cell-local coordinates (with optional per-cell hue /
// value jitter and uv rotation keyed by cell_id), the grout material at the
// original coordinates, and every channel blends through the shape mask.
inline MaterialOutputs apply_shape(GraphBuilder& g, const ShapeResult& shape,
                                   const MaterialFn& cell_material,
                                   const MaterialOutputs& grout,
                                   const ShapeComposeParams& params) {
    params.check();
    Value cell_vec = shape_cell_vector(g, shape, params.variation);
    MaterialOutputs cell = cell_material(g, cell_vec);
    cell.surface = apply_cell_variation(g, cell.surface, shape.cell_id, params.variation);
    return combine_shape(g, shape, cell, grout, params.edge_recess);
}

// Blends two materials through a mask: every channel is mix(base, top, mask).
// Crack masks additionally recess the displacement by mask * crack_depth.
inline MaterialOutputs layer(GraphBuilder& g, const MaterialOutputs& base,
                             const MaterialOutputs& top, const MaskResult& mask) {
    MaterialOutputs out;
    out.surface = ops::mix(g, base.surface, top.surface, mask.mask);
    out.roughness = ops::mix(g, base.roughness, top.roughness, mask.mask);
    out.displacement = ops::mix(g, base.displacement, top.displacement, mask.mask);
    if (mask.is_crack && mask.crack_depth > 0.0)
        out.displacement = out.displacement - mask.mask * mask.crack_depth;
    return out;
}

}  // namespace procgen::materials
