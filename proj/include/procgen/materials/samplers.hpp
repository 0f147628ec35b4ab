#pragma once

#include <string>
#include <vector>

#include "procgen/materials/compose.hpp"
#include "procgen/materials/concrete.hpp"
#include "procgen/materials/fabric.hpp"
#include "procgen/materials/marble.hpp"
#include "procgen/materials/mask_gen.hpp"
#include "procgen/materials/metal.hpp"
#include "procgen/materials/paint.hpp"
#include "procgen/materials/shapes.hpp"
#include "procgen/materials/wood.hpp"
#include "procgen/trace.hpp"

namespace procgen::materials {

// Random samplers for every material class, in two flavors: "default"
// draws from tuned plausible ranges, "wide" from the full legal ranges.
// All randomness flows through the context, so every sampler here is
// reproducible from seed and traceable.
enum class Profile { Default, Wide };

namespace samplers {

inline double pick(SamplerContext& ctx, const std::string& name, Profile prof, double dlo,
                   double dhi, double wlo, double whi) {
    return prof == Profile::Default ? ctx.uniform(name, dlo, dhi) : ctx.uniform(name, wlo, whi);
}

inline MaterialOutputs wood_component(SamplerContext& ctx, Value vector, Profile prof) {
    WoodParams p;
    p.ring_frequency = pick(ctx, "ring_frequency", prof, 3.0, 10.0, 1.0, 40.0);
    p.ring_warp = pick(ctx, "ring_warp", prof, 0.05, 0.3, 0.0, 0.5);
    p.warp_scale = pick(ctx, "warp_scale", prof, 0.8, 3.0, 0.3, 8.0);
    p.light.h = pick(ctx, "light_hue", prof, 0.06, 0.1, 0.0, 1.0);
    p.light.s = pick(ctx, "light_sat", prof, 0.3, 0.6, 0.0, 1.0);
    p.light.v = pick(ctx, "light_val", prof, 0.55, 0.85, 0.3, 1.0);
    p.dark.h = pick(ctx, "dark_hue", prof, 0.05, 0.09, 0.0, 1.0);
    p.dark.s = pick(ctx, "dark_sat", prof, 0.4, 0.7, 0.0, 1.0);
    p.dark.v = pick(ctx, "dark_val", prof, 0.2, 0.45, 0.05, 0.6);
    p.roughness_base = pick(ctx, "roughness_base", prof, 0.4, 0.7, 0.0, 1.0);
    p.roughness_var = pick(ctx, "roughness_var", prof, 0.05, 0.25, 0.0, 0.5);
    p.displacement_amp = pick(ctx, "displacement_amp", prof, 0.001, 0.008, 0.0, 0.02);
    return ctx.call("wood", [&](GraphBuilder& g) { return make_wood(g, p, vector); });
}

inline MaterialOutputs marble_component(SamplerContext& ctx, Value vector, Profile prof) {
    MarbleParams p;
    p.vein_scale = pick(ctx, "vein_scale", prof, 1.0, 4.0, 0.3, 16.0);
    p.vein_strength = pick(ctx, "vein_strength", prof, 2.0, 6.0, 0.0, 12.0);
    p.vein_sharpness = pick(ctx, "vein_sharpness", prof, 2.0, 5.0, 0.5, 8.0);
    p.base.h = pick(ctx, "base_hue", prof, 0.05, 0.12, 0.0, 1.0);
    p.base.s = pick(ctx, "base_sat", prof, 0.01, 0.08, 0.0, 0.4);
    p.base.v = pick(ctx, "base_val", prof, 0.85, 0.97, 0.5, 1.0);
    p.vein.h = pick(ctx, "vein_hue", prof, 0.55, 0.68, 0.0, 1.0);
    p.vein.s = pick(ctx, "vein_sat", prof, 0.15, 0.4, 0.0, 1.0);
    p.vein.v = pick(ctx, "vein_val", prof, 0.25, 0.5, 0.05, 0.8);
    p.roughness_base = pick(ctx, "roughness_base", prof, 0.15, 0.35, 0.0, 1.0);
    p.displacement_amp = pick(ctx, "displacement_amp", prof, 0.0005, 0.004, 0.0, 0.02);
    return ctx.call("marble", [&](GraphBuilder& g) { return make_marble(g, p, vector); });
}

inline MaterialOutputs paint_component(SamplerContext& ctx, Value vector, Profile prof) {
    PaintParams p;
    p.color.h = pick(ctx, "hue", prof, 0.0, 1.0, 0.0, 1.0);
    p.color.s = pick(ctx, "saturation", prof, 0.05, 0.45, 0.0, 1.0);
    p.color.v = pick(ctx, "value", prof, 0.5, 0.95, 0.1, 1.0);
    p.noise_amp = pick(ctx, "noise_amp", prof, 0.01, 0.06, 0.0, 0.2);
    p.noise_scale = pick(ctx, "noise_scale", prof, 3.0, 12.0, 0.5, 64.0);
    p.roughness_base = pick(ctx, "roughness_base", prof, 0.3, 0.6, 0.0, 1.0);
    p.roughness_var = pick(ctx, "roughness_var", prof, 0.02, 0.2, 0.0, 0.5);
    p.orange_peel = pick(ctx, "orange_peel", prof, 0.0001, 0.001, 0.0, 0.01);
    return ctx.call("paint", [&](GraphBuilder& g) { return make_paint(g, p, vector); });
}

inline MaterialOutputs metal_component(SamplerContext& ctx, Value vector, Profile prof) {
    MetalParams p;
    p.tint.h = pick(ctx, "hue", prof, 0.5, 0.65, 0.0, 1.0);
    p.tint.s = pick(ctx, "saturation", prof, 0.01, 0.08, 0.0, 0.3);
    p.tint.v = pick(ctx, "value", prof, 0.6, 0.85, 0.3, 1.0);
    p.streak_scale = pick(ctx, "streak_scale", prof, 1.5, 6.0, 0.3, 32.0);
    p.streak_stretch = pick(ctx, "streak_stretch", prof, 10.0, 50.0, 1.0, 200.0);
    p.streak_amp = pick(ctx, "streak_amp", prof, 0.03, 0.15, 0.0, 0.3);
    p.roughness_base = pick(ctx, "roughness_base", prof, 0.08, 0.3, 0.0, 1.0);
    p.roughness_var = pick(ctx, "roughness_var", prof, 0.02, 0.15, 0.0, 0.5);
    return ctx.call("metal", [&](GraphBuilder& g) { return make_metal(g, p, vector); });
}

inline MaterialOutputs fabric_component(SamplerContext& ctx, Value vector, Profile prof) {
    FabricParams p;
    p.threads_u = pick(ctx, "threads_u", prof, 20.0, 80.0, 4.0, 400.0);
    p.threads_v = pick(ctx, "threads_v", prof, 20.0, 80.0, 4.0, 400.0);
    p.warp.h = pick(ctx, "warp_hue", prof, 0.0, 1.0, 0.0, 1.0);
    p.warp.s = pick(ctx, "warp_sat", prof, 0.3, 0.6, 0.0, 1.0);
    p.warp.v = pick(ctx, "warp_val", prof, 0.35, 0.7, 0.1, 1.0);
    p.weft.h = pick(ctx, "weft_hue", prof, 0.0, 1.0, 0.0, 1.0);
    p.weft.s = pick(ctx, "weft_sat", prof, 0.25, 0.55, 0.0, 1.0);
    p.weft.v = pick(ctx, "weft_val", prof, 0.3, 0.6, 0.1, 1.0);
    p.fuzz = pick(ctx, "fuzz", prof, 0.05, 0.25, 0.0, 0.5);
    p.roughness_base = pick(ctx, "roughness_base", prof, 0.7, 0.95, 0.3, 1.0);
    p.weave_amp = pick(ctx, "weave_amp", prof, 0.0005, 0.003, 0.0, 0.01);
    return ctx.call("fabric", [&](GraphBuilder& g) { return make_fabric(g, p, vector); });
}

inline MaterialOutputs concrete_component(SamplerContext& ctx, Value vector, Profile prof) {
    ConcreteParams p;
    p.base.h = pick(ctx, "hue", prof, 0.05, 0.15, 0.0, 1.0);
    p.base.s = pick(ctx, "saturation", prof, 0.01, 0.08, 0.0, 0.3);
    p.base.v = pick(ctx, "value", prof, 0.5, 0.75, 0.2, 0.95);
    p.aggregate_scale = pick(ctx, "aggregate_scale", prof, 6.0, 20.0, 1.0, 64.0);
    p.pit_radius = pick(ctx, "pit_radius", prof, 0.06, 0.2, 0.01, 0.45);
    p.pit_depth = pick(ctx, "pit_depth", prof, 0.001, 0.006, 0.0, 0.02);
    p.mottle_scale = pick(ctx, "mottle_scale", prof, 1.0, 4.0, 0.3, 16.0);
    p.mottle_amp = pick(ctx, "mottle_amp", prof, 0.04, 0.18, 0.0, 0.4);
    p.roughness_base = pick(ctx, "roughness_base", prof, 0.7, 0.95, 0.3, 1.0);
    return ctx.call("concrete", [&](GraphBuilder& g) { return make_concrete(g, p, vector); });
}

inline constexpr const char* kBaseNames[6] = {"wood",   "marble", "paint",
                                              "metal",  "fabric", "concrete"};

// Uniform pick among the six bases, each drawn by its own sub-sampler.
inline MaterialOutputs base_component(SamplerContext& ctx, Value vector, Profile prof) {
    const int which = ctx.choice("base", {1, 1, 1, 1, 1, 1});
    const char* name = kBaseNames[which];
    const std::string id = prof == Profile::Wide ? std::string(name) + "_wide" : name;
    switch (which) {
        case 0:
            return ctx.sub(name, id,
                           [&](SamplerContext& c) { return wood_component(c, vector, prof); });
        case 1:
            return ctx.sub(name, id,
                           [&](SamplerContext& c) { return marble_component(c, vector, prof); });
        case 2:
            return ctx.sub(name, id,
                           [&](SamplerContext& c) { return paint_component(c, vector, prof); });
        case 3:
            return ctx.sub(name, id,
                           [&](SamplerContext& c) { return metal_component(c, vector, prof); });
        case 4:
            return ctx.sub(name, id,
                           [&](SamplerContext& c) { return fabric_component(c, vector, prof); });
        default:
            return ctx.sub(name, id, [&](SamplerContext& c) {
                return concrete_component(c, vector, prof);
            });
    }
}

struct ShapeStage {
    ShapeResult shape;
    Value cell_vec;
    CellVariation variation;
    double edge_recess = 0.0;
};

// Draws a shape (brick / tile / plank), its parameters, and the per-cell
// variation, and builds the shape nodes plus the cell coordinate frame.
inline ShapeStage shape_stage(SamplerContext& ctx, Value vector) {
    ShapeStage st;
    const int kind = ctx.choice("shape", {1, 1, 1});
    st.variation.hue_jitter = ctx.uniform("hue_jitter", 0.0, 0.15);
    st.variation.value_jitter = ctx.uniform("value_jitter", 0.0, 0.3);
    st.variation.rotate = ctx.discrete("rotate", {1, 1}) == 1;
    st.edge_recess = ctx.uniform("edge_recess", 0.0005, 0.004);

    if (kind == 0) {
        BrickShapeParams p;
        p.rows = 2 + ctx.discrete("rows", {1, 1, 1, 1, 1});       // 2..6
        p.cols = 4 + 2 * ctx.discrete("cols", {1, 1, 1, 1});      // 4, 6, 8, 10
        p.mortar_width = ctx.uniform("mortar_width", 0.004, 0.03);
        p.row_offset = ctx.uniform("row_offset", 0.3, 0.5);
        st.shape = ctx.call("brick", [&](GraphBuilder& g) {
            return make_brick_shape(g, p, vector);
        });
    } else if (kind == 1) {
        TileShapeParams p;
        p.nx = 2 + ctx.discrete("nx", {1, 1, 1, 1, 1, 1});        // 2..7
        p.ny = 2 + ctx.discrete("ny", {1, 1, 1, 1, 1, 1});
        p.grout = ctx.uniform("grout", 0.003, 0.02);
        st.shape = ctx.call("tile", [&](GraphBuilder& g) {
            return make_tile_shape(g, p, vector);
        });
    } else {
        PlankShapeParams p;
        p.plank_width = ctx.uniform("plank_width", 0.06, 0.16);
        p.length_mean = ctx.uniform("length_mean", 0.25, 0.6);
        p.gap = ctx.uniform("gap", 0.002, 0.01);
        st.shape = ctx.call("plank", [&](GraphBuilder& g) {
            return make_plank_shape(g, p, vector);
        });
    }
    st.cell_vec = ctx.call("cell_frame", [&](GraphBuilder& g) {
        return shape_cell_vector(g, st.shape, st.variation);
    });
    return st;
}

// Draws one of the four masks and builds it at `vector`.
inline MaskResult mask_component(SamplerContext& ctx, Value vector) {
    const int kind = ctx.choice("mask", {1, 1, 1, 1});
    if (kind == 0) {
        CracksMaskParams p;
        p.scale = ctx.uniform("scale", 2.0, 8.0);
        p.width = ctx.uniform("width", 0.02, 0.12);
        p.depth = ctx.uniform("depth", 0.001, 0.008);
        return ctx.call("cracks", [&](GraphBuilder& g) { return make_cracks_mask(g, p, vector); });
    }
    if (kind == 1) {
        ScratchesMaskParams p;
        p.density = ctx.uniform("density", 0.5, 4.0);
        p.length = ctx.uniform("length", 0.1, 0.4);
        p.width = ctx.uniform("width", 0.002, 0.01);
        p.seed_offset = ctx.uniform("seed_offset", 0.0, 1000.0);
        return ctx.call("scratches",
                        [&](GraphBuilder& g) { return make_scratches_mask(g, p, vector); });
    }
    if (kind == 2) {
        SmudgesMaskParams p;
        p.scale = ctx.uniform("scale", 1.0, 6.0);
        p.coverage = ctx.uniform("coverage", 0.1, 0.5);
        return ctx.call("smudges",
                        [&](GraphBuilder& g) { return make_smudges_mask(g, p, vector); });
    }
    EdgeWearMaskParams p;
    p.intensity = ctx.uniform("intensity", 0.5, 3.0);
    p.noise_scale = ctx.uniform("noise_scale", 2.0, 12.0);
    return ctx.call("edge_wear",
                    [&](GraphBuilder& g) { return make_edge_wear_mask(g, p, vector); });
}

// Grout between cells: paint or concrete in muted ranges.
inline MaterialOutputs grout_component(SamplerContext& ctx, Value vector) {
    const int kind = ctx.choice("grout", {1, 1});
    if (kind == 0)
        return ctx.sub("grout_paint", "paint",
                       [&](SamplerContext& c) { return paint_component(c, vector, Profile::Default); });
    return ctx.sub("grout_concrete", "concrete", [&](SamplerContext& c) {
        return concrete_component(c, vector, Profile::Default);
    });
}

inline MaterialOutputs shaped_component(SamplerContext& ctx, Value vector, Profile prof) {
    ShapeStage st = shape_stage(ctx, vector);
    MaterialOutputs cell = base_component(ctx, st.cell_vec, prof);
    MaterialOutputs grout = grout_component(ctx, vector);
    return ctx.call("combine_shape", [&](GraphBuilder& g) {
        MaterialOutputs varied = cell;
        varied.surface = apply_cell_variation(g, cell.surface, st.shape.cell_id, st.variation);
        return combine_shape(g, st.shape, varied, grout, st.edge_recess);
    });
}

inline MaterialOutputs layered_component(SamplerContext& ctx, Value vector, Profile prof,
                                         const MaterialOutputs& base) {
    MaskResult mask = mask_component(ctx, vector);
    MaterialOutputs top = base_component(ctx, vector, prof);
    return ctx.call("layer", [&](GraphBuilder& g) { return layer(g, base, top, mask); });
}

}  // namespace samplers

// ---------------------------------------------------------------------------
// Shipped sampler registry
// ---------------------------------------------------------------------------

namespace samplers {

inline Value coords(SamplerContext& ctx) {
    return ctx.call("coords", [](GraphBuilder& g) { return ops::position(g); });
}

template <typename Component>
SamplerDef base_def(std::string id, Component component, Profile prof) {
    return SamplerDef{id, [component, prof](SamplerContext& ctx) {
                          Value vec = coords(ctx);
                          MaterialOutputs m = component(ctx, vec, prof);
                          declare_material_outputs(ctx, m);
                      }};
}

}  // namespace samplers

// Uniform choice among the six bases with default parameter ranges.
inline SamplerDef sample_base_material_def() {
    return SamplerDef{"base", [](SamplerContext& ctx) {
                          Value vec = samplers::coords(ctx);
                          MaterialOutputs m =
                              samplers::base_component(ctx, vec, Profile::Default);
                          declare_material_outputs(ctx, m);
                      }};
}

// The full compositional space: plain base, shaped base, masked layer, or a
// masked layer over a shaped base (three levels of nesting).
inline SamplerDef sample_composed_def() {
    return SamplerDef{"composed", [](SamplerContext& ctx) {
                          using namespace samplers;
                          Value vec = coords(ctx);
                          MaterialOutputs m;
                          switch (ctx.choice("kind", {3, 2, 2, 1})) {
                              case 0: m = base_component(ctx, vec, Profile::Default); break;
                              case 1: m = shaped_component(ctx, vec, Profile::Default); break;
                              case 2: {
                                  MaterialOutputs base =
                                      base_component(ctx, vec, Profile::Default);
                                  m = layered_component(ctx, vec, Profile::Default, base);
                                  break;
                              }
                              default: {
                                  MaterialOutputs base =
                                      shaped_component(ctx, vec, Profile::Default);
                                  m = layered_component(ctx, vec, Profile::Default, base);
                                  break;
                              }
                          }
                          declare_material_outputs(ctx, m);
                      }};
}

// Every sampler the library ships, keyed by id.
inline const std::vector<SamplerDef>& sampler_registry() {
    using namespace samplers;
    static const std::vector<SamplerDef> defs = [] {
        std::vector<SamplerDef> v;
        auto add_pair = [&v](const char* name, auto component) {
            v.push_back(base_def(name, component, Profile::Default));
            v.push_back(base_def(std::string(name) + "_wide", component, Profile::Wide));
        };
        add_pair("wood", [](SamplerContext& c, Value vec, Profile p) {
            return wood_component(c, vec, p);
        });
        add_pair("marble", [](SamplerContext& c, Value vec, Profile p) {
            return marble_component(c, vec, p);
        });
        add_pair("paint", [](SamplerContext& c, Value vec, Profile p) {
            return paint_component(c, vec, p);
        });
        add_pair("metal", [](SamplerContext& c, Value vec, Profile p) {
            return metal_component(c, vec, p);
        });
        add_pair("fabric", [](SamplerContext& c, Value vec, Profile p) {
            return fabric_component(c, vec, p);
        });
        add_pair("concrete", [](SamplerContext& c, Value vec, Profile p) {
            return concrete_component(c, vec, p);
        });
        v.push_back(sample_base_material_def());
        v.push_back(sample_composed_def());
        return v;
    }();
    return defs;
}

inline const SamplerDef& find_sampler(const std::string& id) {
    for (const SamplerDef& def : sampler_registry())
        if (def.id == id) return def;
    raise(errc::unknown_op, "no sampler named '" + id + "'");
}

}  // namespace procgen::materials
