#pragma once

#include <functional>
#include <string>

#include "procgen/builder_ops.hpp"
#include "procgen/graph.hpp"
#include "procgen/sampler.hpp"

namespace procgen::materials {

// Value handles of a material being assembled inside one builder. Every
// material generator returns exactly this, which is what makes generators
// swappable inside compositions.
struct MaterialOutputs {
    Value surface;       // Color
    Value roughness;     // Float in [0, 1]
    Value displacement;  // Float, bounded by the generator's amplitude params
};

// A mask plus the metadata layering needs. Cracks carry a recess depth that
// the layer combinator subtracts from displacement.
struct MaskResult {
    Value mask;  // Float in [0, 1]
    bool is_crack = false;
    double crack_depth = 0.0;
};

struct ShapeResult {
    Value mask;     // 1 inside cells, 0 in grout
    Value cell_id;  // constant within a cell, in [0, 1)
    Value cell_uv;  // Vec2 in [0,1]^2 where mask == 1
};

// Builds a material graph out of any generator, with a position node as the
// "vector" coordinate input.
using MaterialFn = std::function<MaterialOutputs(GraphBuilder&, Value vector)>;

inline constexpr const char* kMaterialOutputNames[4] = {"surface", "roughness", "displacement",
                                                        "volume"};

// Declares the standard material interface on the builder: surface,
// roughness, displacement, plus the reserved (empty) volume slot.
inline void declare_material_outputs(GraphBuilder& g, const MaterialOutputs& m) {
    g.output("surface", m.surface);
    g.output("roughness", m.roughness);
    g.output("displacement", m.displacement);
    g.output("volume", ops::const_float(g, 0.0));
}

// Same, but through a sampler context so tracing records the output set.
inline void declare_material_outputs(SamplerContext& ctx, const MaterialOutputs& m) {
    Value volume = ctx.call("volume", [](GraphBuilder& g) { return ops::const_float(g, 0.0); });
    ctx.set_output("surface", m.surface);
    ctx.set_output("roughness", m.roughness);
    ctx.set_output("displacement", m.displacement);
    ctx.set_output("volume", volume);
}

inline Graph material_graph(const MaterialFn& fn) {
    GraphBuilder g;
    Value vec = ops::position(g);
    MaterialOutputs m = fn(g, vec);
    declare_material_outputs(g, m);
    return g.build();
}

// Checks the MaterialInterface contract on a finished graph: exactly the
// four outputs, with the right kinds.
inline void check_material_interface(const Graph& g) {
    if (g.outputs.size() != 4)
        raise(errc::interface_mismatch,
              "material must expose exactly 4 outputs, has " + std::to_string(g.outputs.size()));
    for (const char* name : kMaterialOutputNames)
        if (!g.outputs.count(name))
            raise(errc::interface_mismatch, std::string("missing output '") + name + "'");
    if (g.kind_of(g.outputs.at("surface")) != ValueKind::Color)
        raise(errc::interface_mismatch, "surface must be Color");
    if (g.kind_of(g.outputs.at("roughness")) != ValueKind::Float)
        raise(errc::interface_mismatch, "roughness must be Float");
    if (g.kind_of(g.outputs.at("displacement")) != ValueKind::Float)
        raise(errc::interface_mismatch, "displacement must be Float");
    if (g.kind_of(g.outputs.at("volume")) != ValueKind::Float)
        raise(errc::interface_mismatch, "volume must be Float");
}

namespace pdetail {

inline void require(bool ok, const std::string& what) {
    if (!ok) raise(errc::out_of_range_param, what);
}

}  // namespace pdetail

// An HSV color parameter triple.
struct Hsv {
    double h = 0.0, s = 0.0, v = 0.5;
};

inline Value hsv_const(GraphBuilder& g, const Hsv& c) {
    return ops::hsv_to_rgb(g, c.h, c.s, c.v);
}

}  // namespace procgen::materials
