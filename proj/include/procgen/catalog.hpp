#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procgen/common.hpp"
#include "procgen/kind.hpp"

namespace procgen {

// How an op's output kinds follow from its input kinds.
enum class InferRule {
    Fixed,            // output kinds are exactly what the signature says
    BinaryBroadcast,  // scalar/vector broadcast over two inputs
    UnarySame,        // output kind == input kind (abs, floor, ...)
    UnaryFloat,       // like UnarySame but Int promotes to Float (sin, sqrt, ...)
    MixRule,          // mix(a, b, t): a and b broadcast, t is Float
    CastRule,         // fixed target kind, source restricted to the cast table
};

struct SocketSpec {
    std::string name;
    ValueKind kind = ValueKind::Float;
    bool generic = false;  // accepts any numeric kind, resolved by the infer rule
};

struct ParamSig {
    std::string name;
    std::string tag;  // "Float", "Int", "Bool", "Vec2", "Vec3", "Color", "String"
    ParamValue def;
    // Legal range for numeric params; checked when a node is evaluated.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_exclusive = false;
};

struct OpSignature {
    std::string name;
    InferRule rule = InferRule::Fixed;
    std::vector<SocketSpec> inputs;
    std::vector<ParamSig> params;
    std::vector<SocketSpec> outputs;

    const SocketSpec* find_input(const std::string& s) const {
        for (const auto& i : inputs)
            if (i.name == s) return &i;
        return nullptr;
    }
    const SocketSpec* find_output(const std::string& s) const {
        for (const auto& o : outputs)
            if (o.name == s) return &o;
        return nullptr;
    }
    const ParamSig* find_param(const std::string& s) const {
        for (const auto& p : params)
            if (p.name == s) return &p;
        return nullptr;
    }
};

// Scalar/vector promotion lattice. Int < Float; Float broadcasts elementwise
// against Vec2/Vec3/Color; distinct vector kinds never mix implicitly and
// Bool takes no part in arithmetic. Throws AmbiguousKind where an explicit
// cast is required.
inline ValueKind infer_binary_kind(ValueKind a, ValueKind b) {
    if (a == ValueKind::Bool || b == ValueKind::Bool)
        raise(errc::ambiguous_kind, std::string("no arithmetic on Bool (") + kind_name(a) + ", " +
                                        kind_name(b) + "); cast first");
    if (a == b) return a;
    if (is_scalar(a) && is_scalar(b)) return ValueKind::Float;  // Int < Float
    if (is_scalar(a) && is_vector(b)) return b;
    if (is_vector(a) && is_scalar(b)) return a;
    // Two distinct vector kinds (Vec2/Vec3/Color in any mix).
    raise(errc::ambiguous_kind, std::string(kind_name(a)) + " vs " + kind_name(b) +
                                    " requires an explicit cast");
}

// Closed cast table: Float<->Int (truncating), Vec3<->Color (identity bits),
// Float->Vec3 (splat), Vec3->Float (mean). Anything else is unsupported.
inline bool cast_supported(ValueKind from, ValueKind to) {
    if (from == ValueKind::Float && to == ValueKind::Int) return true;
    if (from == ValueKind::Int && to == ValueKind::Float) return true;
    if (from == ValueKind::Vec3 && to == ValueKind::Color) return true;
    if (from == ValueKind::Color && to == ValueKind::Vec3) return true;
    if (from == ValueKind::Float && to == ValueKind::Vec3) return true;
    if (from == ValueKind::Vec3 && to == ValueKind::Float) return true;
    return false;
}

inline const char* cast_op_for(ValueKind target) {
    switch (target) {
        case ValueKind::Int: return "cast_int";
        case ValueKind::Float: return "cast_float";
        case ValueKind::Vec3: return "cast_vec3";
        case ValueKind::Color: return "cast_color";
        default: return nullptr;
    }
}

namespace detail {

inline SocketSpec in(std::string name, ValueKind k) { return {std::move(name), k, false}; }
inline SocketSpec gin(std::string name) { return {std::move(name), ValueKind::Float, true}; }
inline SocketSpec out(std::string name, ValueKind k) { return {std::move(name), k, false}; }
inline SocketSpec gout(std::string name) { return {std::move(name), ValueKind::Float, true}; }

constexpr double kInf = std::numeric_limits<double>::infinity();

inline ParamSig fparam(std::string name, double def, double lo = -kInf, double hi = kInf,
                       bool lo_excl = false) {
    return {std::move(name), "Float", ParamValue(def), lo, hi, lo_excl};
}
inline ParamSig iparam(std::string name, std::int64_t def, double lo = -kInf, double hi = kInf) {
    return {std::move(name), "Int", ParamValue(def), lo, hi, false};
}
inline ParamSig bparam(std::string name, bool def) {
    return {std::move(name), "Bool", ParamValue(def), -kInf, kInf, false};
}
inline ParamSig sparam(std::string name, std::string def) {
    return {std::move(name), "String", ParamValue(std::move(def)), -kInf, kInf, false};
}
inline ParamSig vparam(std::string name, const char* tag, ParamValue def) {
    return {std::move(name), tag, std::move(def), -kInf, kInf, false};
}

inline std::vector<OpSignature> build_catalog() {
    using K = ValueKind;
    std::vector<OpSignature> ops;
    auto add = [&](OpSignature sig) { ops.push_back(std::move(sig)); };

    // --- constants -------------------------------------------------------
    add({"const_float", InferRule::Fixed, {}, {fparam("value", 0.0)}, {out("value", K::Float)}});
    add({"const_int", InferRule::Fixed, {}, {iparam("value", 0)}, {out("value", K::Int)}});
    add({"const_bool", InferRule::Fixed, {}, {bparam("value", false)}, {out("value", K::Bool)}});
    add({"const_vec2", InferRule::Fixed, {}, {vparam("value", "Vec2", ParamValue(Vec2{}))},
         {out("value", K::Vec2)}});
    add({"const_vec3", InferRule::Fixed, {}, {vparam("value", "Vec3", ParamValue(Vec3{}))},
         {out("value", K::Vec3)}});
    add({"const_color", InferRule::Fixed, {}, {vparam("value", "Color", ParamValue::color(0, 0, 0))},
         {out("value", K::Color)}});

    // --- batch inputs ------------------------------------------------------
    add({"position", InferRule::Fixed, {}, {}, {out("p", K::Vec3)}});
    add({"uv", InferRule::Fixed, {}, {}, {out("uv", K::Vec2)}});
    add({"aux_float", InferRule::Fixed, {}, {sparam("name", "curvature")}, {out("value", K::Float)}});

    // --- elementwise arithmetic -------------------------------------------
    for (const char* name : {"add", "sub", "mul", "div", "floordiv", "mod", "pow", "min", "max"})
        add({name, InferRule::BinaryBroadcast, {gin("a"), gin("b")}, {}, {gout("value")}});
    for (const char* name : {"abs", "floor", "round", "sign"})
        add({name, InferRule::UnarySame, {gin("x")}, {}, {gout("value")}});
    for (const char* name : {"fract", "sqrt", "sin", "cos"})
        add({name, InferRule::UnaryFloat, {gin("x")}, {}, {gout("value")}});
    add({"step", InferRule::Fixed, {in("edge", K::Float), in("x", K::Float)}, {},
         {out("value", K::Float)}});

    // --- vector helpers ----------------------------------------------------
    add({"dot", InferRule::Fixed, {in("a", K::Vec3), in("b", K::Vec3)}, {}, {out("value", K::Float)}});
    add({"length", InferRule::Fixed, {in("v", K::Vec3)}, {}, {out("value", K::Float)}});
    add({"normalize", InferRule::Fixed, {in("v", K::Vec3)}, {}, {out("value", K::Vec3)}});
    add({"combine_vec2", InferRule::Fixed, {in("x", K::Float), in("y", K::Float)}, {},
         {out("value", K::Vec2)}});
    add({"combine_vec3", InferRule::Fixed, {in("x", K::Float), in("y", K::Float), in("z", K::Float)},
         {}, {out("value", K::Vec3)}});
    add({"combine_color", InferRule::Fixed, {in("r", K::Float), in("g", K::Float), in("b", K::Float)},
         {}, {out("value", K::Color)}});
    add({"separate_vec2", InferRule::Fixed, {in("v", K::Vec2)}, {},
         {out("x", K::Float), out("y", K::Float)}});
    add({"separate_vec3", InferRule::Fixed, {in("v", K::Vec3)}, {},
         {out("x", K::Float), out("y", K::Float), out("z", K::Float)}});
    add({"separate_color", InferRule::Fixed, {in("c", K::Color)}, {},
         {out("r", K::Float), out("g", K::Float), out("b", K::Float)}});
    add({"rotate_uv90", InferRule::Fixed, {in("uv", K::Vec2), in("steps", K::Float)}, {},
         {out("value", K::Vec2)}});

    // --- mapping -----------------------------------------------------------
    add({"map_range", InferRule::Fixed, {in("x", K::Float)},
         {fparam("from_lo", 0.0), fparam("from_hi", 1.0), fparam("to_lo", 0.0),
          fparam("to_hi", 1.0), bparam("clamp", false)},
         {out("value", K::Float)}});
    add({"mix", InferRule::MixRule, {gin("a"), gin("b"), in("t", K::Float)}, {}, {gout("value")}});
    add({"clamp", InferRule::UnaryFloat, {gin("x")}, {fparam("lo", 0.0), fparam("hi", 1.0)},
         {gout("value")}});
    add({"smoothstep", InferRule::Fixed, {in("x", K::Float)},
         {fparam("lo", 0.0), fparam("hi", 1.0)}, {out("value", K::Float)}});

    // --- color -------------------------------------------------------------
    add({"hsv_to_rgb", InferRule::Fixed, {in("h", K::Float), in("s", K::Float), in("v", K::Float)},
         {}, {out("color", K::Color)}});
    add({"rgb_to_hsv", InferRule::Fixed, {in("color", K::Color)}, {}, {out("hsv", K::Vec3)}});

    // --- noise ---------------------------------------------------------------
    add({"perlin_noise", InferRule::Fixed, {in("p", K::Vec3)},
         {fparam("frequency", 1.0, 0.0, kInf, true)}, {out("value", K::Float)}});
    add({"fbm", InferRule::Fixed, {in("p", K::Vec3)},
         {fparam("frequency", 1.0, 0.0, kInf, true), iparam("octaves", 3, 1, 16),
          fparam("lacunarity", 2.0, 0.0, kInf, true), fparam("gain", 0.5, 0.0, 2.0)},
         {out("value", K::Float)}});
    add({"voronoi", InferRule::Fixed, {in("p", K::Vec3)},
         {fparam("frequency", 1.0, 0.0, kInf, true)},
         {out("distance", K::Float), out("cell_id", K::Float), out("cell_center", K::Vec3)}});
    add({"white_noise", InferRule::Fixed, {in("p", K::Vec3)}, {}, {out("value", K::Float)}});

    // --- cell patterns -------------------------------------------------------
    add({"brick_grid", InferRule::Fixed, {in("uv", K::Vec2)},
         {iparam("rows", 4, 1, 4096), iparam("cols", 8, 1, 4096),
          fparam("mortar_width", 0.01, 0.0, 1.0), fparam("row_offset", 0.5, 0.0, 1.0)},
         {out("mask", K::Float), out("cell_id", K::Float), out("cell_uv", K::Vec2)}});
    add({"tile_grid", InferRule::Fixed, {in("uv", K::Vec2)},
         {iparam("nx", 4, 1, 4096), iparam("ny", 4, 1, 4096), fparam("grout", 0.01, 0.0, 1.0)},
         {out("mask", K::Float), out("cell_id", K::Float), out("cell_uv", K::Vec2)}});
    add({"plank_grid", InferRule::Fixed, {in("uv", K::Vec2)},
         {fparam("plank_width", 0.125, 0.0, 1.0, true), fparam("length_mean", 0.4, 0.0, 1.0, true),
          fparam("gap", 0.008, 0.0, 1.0)},
         {out("mask", K::Float), out("cell_id", K::Float), out("cell_uv", K::Vec2)}});

    // --- procedural masks ------------------------------------------------------
    add({"scratches", InferRule::Fixed, {in("p", K::Vec3)},
         {fparam("density", 1.0, 0.0, 64.0), fparam("length", 0.3, 0.0, kInf, true),
          fparam("width", 0.01, 0.0, kInf, true), fparam("seed_offset", 0.0)},
         {out("mask", K::Float)}});
    add({"cracks", InferRule::Fixed, {in("p", K::Vec3)},
         {fparam("scale", 4.0, 0.0, kInf, true), fparam("width", 0.05, 0.0, kInf)},
         {out("mask", K::Float)}});
    add({"smudges", InferRule::Fixed, {in("p", K::Vec3)},
         {fparam("scale", 2.0, 0.0, kInf, true), fparam("coverage", 0.5, 0.0, 1.0)},
         {out("mask", K::Float)}});
    add({"edge_wear", InferRule::Fixed, {in("p", K::Vec3), in("curvature", K::Float)},
         {fparam("intensity", 1.0, 0.0, kInf), fparam("noise_scale", 4.0, 0.0, kInf, true)},
         {out("mask", K::Float)}});

    // --- casts (closed table) ---------------------------------------------------
    add({"cast_int", InferRule::CastRule, {gin("value")}, {}, {out("value", K::Int)}});
    add({"cast_float", InferRule::CastRule, {gin("value")}, {}, {out("value", K::Float)}});
    add({"cast_vec3", InferRule::CastRule, {gin("value")}, {}, {out("value", K::Vec3)}});
    add({"cast_color", InferRule::CastRule, {gin("value")}, {}, {out("value", K::Color)}});

    return ops;
}

}  // namespace detail

class Catalog {
public:
    static const Catalog& instance() {
        static Catalog cat;
        return cat;
    }

    const OpSignature* find(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? nullptr : &ops_[it->second];
    }

    const OpSignature& require(const std::string& name) const {
        const OpSignature* sig = find(name);
        if (!sig) raise(errc::unknown_op, "no op named '" + name + "' in the catalog");
        return *sig;
    }

    const std::vector<OpSignature>& ops() const { return ops_; }

private:
    Catalog() : ops_(detail::build_catalog()) {
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            const OpSignature& sig = ops_[i];
            if (index_.count(sig.name))
                raise(errc::unknown_op, "duplicate catalog entry: " + sig.name);
            index_[sig.name] = i;
        }
    }

    std::vector<OpSignature> ops_;
    std::map<std::string, std::size_t> index_;
};

// Resolves output kinds of `op` given the kinds feeding its input sockets,
// in signature order. This is the single inference entry point; the graph
// builder and the public infer_kind call go through it.
inline std::vector<ValueKind> infer_output_kinds(const OpSignature& sig,
                                                 const std::vector<ValueKind>& input_kinds) {
    if (input_kinds.size() != sig.inputs.size())
        raise(errc::kind_mismatch, sig.name + ": expected " + std::to_string(sig.inputs.size()) +
                                       " inputs, got " + std::to_string(input_kinds.size()));
    auto check_fixed = [&](std::size_t i) {
        if (!sig.inputs[i].generic && input_kinds[i] != sig.inputs[i].kind)
            raise(errc::kind_mismatch, sig.name + "." + sig.inputs[i].name + ": expected " +
                                           kind_name(sig.inputs[i].kind) + ", got " +
                                           kind_name(input_kinds[i]));
    };

    std::vector<ValueKind> result;
    switch (sig.rule) {
        case InferRule::Fixed: {
            for (std::size_t i = 0; i < input_kinds.size(); ++i) check_fixed(i);
            for (const auto& o : sig.outputs) result.push_back(o.kind);
            break;
        }
        case InferRule::BinaryBroadcast: {
            result.push_back(infer_binary_kind(input_kinds[0], input_kinds[1]));
            break;
        }
        case InferRule::UnarySame:
        case InferRule::UnaryFloat: {
            ValueKind k = input_kinds[0];
            if (k == ValueKind::Bool)
                raise(errc::ambiguous_kind, sig.name + ": no arithmetic on Bool");
            if (sig.rule == InferRule::UnaryFloat && k == ValueKind::Int) k = ValueKind::Float;
            result.push_back(k);
            break;
        }
        case InferRule::MixRule: {
            ValueKind ab = infer_binary_kind(input_kinds[0], input_kinds[1]);
            if (input_kinds[2] != ValueKind::Float)
                raise(errc::kind_mismatch, "mix.t must be Float, got " +
                                               std::string(kind_name(input_kinds[2])));
            result.push_back(ab);
            break;
        }
        case InferRule::CastRule: {
            ValueKind target = sig.outputs[0].kind;
            if (!cast_supported(input_kinds[0], target))
                raise(errc::unsupported_cast, std::string(kind_name(input_kinds[0])) + " -> " +
                                                  kind_name(target) + " is not in the cast table");
            result.push_back(target);
            break;
        }
    }
    return result;
}

// Public single-output inference: the kind an op produces for given inputs.
inline ValueKind infer_kind(const std::string& op, const std::vector<ValueKind>& input_kinds) {
    const OpSignature& sig = Catalog::instance().require(op);
    return infer_output_kinds(sig, input_kinds)[0];
}

}  // namespace procgen
