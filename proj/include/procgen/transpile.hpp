#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "procgen/colorspace.hpp"
#include "procgen/graph_json.hpp"

namespace procgen {

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------

namespace transpiledetail {

inline std::string param_fingerprint(const Node& n) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, value] : n.params) j[name] = jsonio::tagged_value(value);
    return j.dump();
}

}  // namespace transpiledetail

// Deterministic topological order: Kahn's algorithm popping the smallest
// (op name, param fingerprint, canonical input references) key first.
// Structurally identical graphs canonicalize to identical sequences no
// matter what order their nodes were created in.
inline std::vector<NodeId> canonical_order(const Graph& g) {
    const std::size_t n = g.nodes.size();
    std::vector<int> pending(n, 0);
    std::vector<std::vector<NodeId>> consumers(n);
    for (const Node& node : g.nodes)
        for (const auto& [socket, binding] : node.inputs) {
            (void)socket;
            if (!binding.is_const) {
                ++pending[static_cast<std::size_t>(node.id)];
                consumers[static_cast<std::size_t>(binding.node)].push_back(node.id);
            }
        }

    std::vector<int> canon(n, -1);
    auto key_of = [&](NodeId id) {
        const Node& node = g.nodes[static_cast<std::size_t>(id)];
        std::string key = node.op;
        key += '\x1f';
        key += transpiledetail::param_fingerprint(node);
        for (const auto& [socket, binding] : node.inputs) {
            key += '\x1f';
            key += socket;
            if (binding.is_const) {
                key += "=c";
                key += jsonio::tagged_value(binding.constant).dump();
            } else {
                key += "=e";
                key += std::to_string(canon[static_cast<std::size_t>(binding.node)]);
                key += ':';
                key += binding.output;
            }
        }
        return key;
    };

    // (key, original id) ordered set as the ready queue.
    std::set<std::pair<std::string, NodeId>> ready;
    for (const Node& node : g.nodes)
        if (pending[static_cast<std::size_t>(node.id)] == 0)
            ready.insert({key_of(node.id), node.id});

    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        const auto [key, id] = *ready.begin();
        ready.erase(ready.begin());
        canon[static_cast<std::size_t>(id)] = static_cast<int>(order.size());
        order.push_back(id);
        for (NodeId consumer : consumers[static_cast<std::size_t>(id)])
            if (--pending[static_cast<std::size_t>(consumer)] == 0)
                ready.insert({key_of(consumer), consumer});
    }
    return order;
}

// Rebuilds the graph with nodes renumbered into canonical order.
inline Graph canonicalize(const Graph& g) {
    const std::vector<NodeId> order = canonical_order(g);
    std::vector<int> canon(g.nodes.size(), -1);
    for (std::size_t i = 0; i < order.size(); ++i)
        canon[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    Graph out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        Node node = g.nodes[static_cast<std::size_t>(order[i])];
        node.id = static_cast<NodeId>(i);
        for (auto& [socket, binding] : node.inputs) {
            (void)socket;
            if (!binding.is_const)
                binding.node = canon[static_cast<std::size_t>(binding.node)];
        }
        out.nodes.push_back(std::move(node));
    }
    for (const auto& [name, ref] : g.outputs)
        out.outputs[name] = {canon[static_cast<std::size_t>(ref.node)], ref.output};
    return out;
}

// Structural equality modulo node numbering: canonical forms compared
// node-by-node (op, exact params, remapped inputs) plus the output map.
inline bool graph_isomorphic(const Graph& a, const Graph& b) {
    if (a.nodes.size() != b.nodes.size() || a.outputs.size() != b.outputs.size()) return false;
    const Graph ca = canonicalize(a);
    const Graph cb = canonicalize(b);
    for (std::size_t i = 0; i < ca.nodes.size(); ++i) {
        const Node& x = ca.nodes[i];
        const Node& y = cb.nodes[i];
        if (x.op != y.op || x.params != y.params || x.inputs != y.inputs) return false;
    }
    return ca.outputs == cb.outputs;
}

// ---------------------------------------------------------------------------
// Parameter interpolation
// ---------------------------------------------------------------------------

// Lerps every Float / Vec2 / Vec3 / Color parameter and inline constant of
// two structurally identical graphs (same generator, different draws).
// t = 0 returns a exactly, t = 1 returns b exactly.
inline Graph interpolate_params(const Graph& a, const Graph& b, double t) {
    if (a.nodes.size() != b.nodes.size())
        raise(errc::structure_mismatch, "graphs differ in node count");

    auto lerp_value = [&](const ParamValue& x, const ParamValue& y, const std::string& where) {
        if (x.tag() != y.tag()) raise(errc::structure_mismatch, where + ": kind differs");
        if (x.tag() == "Float" || x.tag() == "Vec2" || x.tag() == "Vec3" || x.tag() == "Color") {
            std::vector<double> out(x.components().size());
            for (std::size_t c = 0; c < out.size(); ++c)
                out[c] = std::lerp(x.components()[c], y.components()[c], t);
            return ParamValue::with_tag(x.tag(), std::move(out));
        }
        if (!(x == y))
            raise(errc::structure_mismatch, where + ": non-interpolable params differ");
        return x;
    };

    Graph out = a;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const Node& na = a.nodes[i];
        const Node& nb = b.nodes[i];
        const std::string where = "node " + std::to_string(na.id);
        if (na.op != nb.op) raise(errc::structure_mismatch, where + ": op differs");
        Node& no = out.nodes[i];
        for (auto& [name, value] : no.params)
            value = lerp_value(na.params.at(name), nb.params.at(name), where + "." + name);
        for (auto& [socket, binding] : no.inputs) {
            const auto& ba = na.inputs.at(socket);
            auto itb = nb.inputs.find(socket);
            if (itb == nb.inputs.end() || ba.is_const != itb->second.is_const ||
                (!ba.is_const && !(ba == itb->second)))
                raise(errc::structure_mismatch, where + "." + socket + ": wiring differs");
            if (binding.is_const)
                binding.constant =
                    lerp_value(ba.constant, itb->second.constant, where + "." + socket);
        }
    }
    if (!(a.outputs == b.outputs)) raise(errc::structure_mismatch, "output maps differ");
    return out;
}

// ---------------------------------------------------------------------------
// Source emission
// ---------------------------------------------------------------------------

struct EmitOptions {
    int inline_max_uses = 1;    // inline expression ops consumed at most this often
    bool use_operators = true;  // render arithmetic as infix +-*/
    bool hsv_colors = false;    // write color constants as hsv literals
    int indent = 4;
    std::string function_name = "build_graph";
};

namespace transpiledetail {

inline bool is_arith(const std::string& op) {
    return op == "add" || op == "sub" || op == "mul" || op == "div" || op == "floordiv";
}

inline const char* arith_symbol(const std::string& op) {
    if (op == "add") return "+";
    if (op == "sub") return "-";
    if (op == "mul") return "*";
    if (op == "div") return "/";
    return nullptr;  // floordiv has no C++ operator
}

inline bool inlinable_op(const std::string& op) {
    return is_arith(op) || op == "mix" || op == "cast_int" || op == "cast_float" ||
           op == "cast_vec3" || op == "cast_color";
}

inline std::string number_literal(double v) { return nlohmann::json(v).dump(); }

inline std::string value_literal(const ParamValue& v) {
    switch (v.kind()) {
        case ValueKind::Float: return number_literal(v.as_double());
        case ValueKind::Int: return std::to_string(v.as_int());
        case ValueKind::Bool: return v.as_bool() ? "true" : "false";
        case ValueKind::Vec2:
            return "procgen::Vec2{" + number_literal(v.components()[0]) + ", " +
                   number_literal(v.components()[1]) + "}";
        case ValueKind::Vec3:
            return "procgen::Vec3{" + number_literal(v.components()[0]) + ", " +
                   number_literal(v.components()[1]) + ", " + number_literal(v.components()[2]) +
                   "}";
        case ValueKind::Color:
            return "procgen::ParamValue::color(" + number_literal(v.components()[0]) + ", " +
                   number_literal(v.components()[1]) + ", " + number_literal(v.components()[2]) +
                   ")";
    }
    return "0";
}

inline std::string param_literal(const ParamValue& v) {
    if (v.is_string()) return nlohmann::json(v.as_string()).dump();
    return value_literal(v);
}

}  // namespace transpiledetail

// Emits one C++ function that rebuilds the graph through the public builder
// API. Arithmetic renders as infix operators, short expressions inline, and
// color constants optionally render as hsv literals (only where the hsv
// round-trip is bit-exact, so the rebuilt graph stays isomorphic).
// Node order is canonicalized first, which makes emission idempotent across
// emit -> execute -> emit.
inline std::string emit(const Graph& graph, const EmitOptions& opts = {}) {
    if (opts.inline_max_uses < 0) raise(errc::invalid_range, "inline_max_uses must be >= 0");
    const Graph g = canonicalize(graph);
    const std::string pad(static_cast<std::size_t>(opts.indent), ' ');

    // Use counts include output references; only single-output whitelist ops
    // inline.
    std::vector<int> uses(g.nodes.size(), 0);
    for (const Node& n : g.nodes)
        for (const auto& [socket, binding] : n.inputs) {
            (void)socket;
            if (!binding.is_const) ++uses[static_cast<std::size_t>(binding.node)];
        }
    for (const auto& [name, ref] : g.outputs) {
        (void)name;
        ++uses[static_cast<std::size_t>(ref.node)];
    }

    // Dead nodes (zero uses) stay as statements so the rebuilt graph keeps
    // every node of the input.
    std::vector<bool> inlined(g.nodes.size(), false);
    for (const Node& n : g.nodes)
        inlined[static_cast<std::size_t>(n.id)] =
            transpiledetail::inlinable_op(n.op) && uses[static_cast<std::size_t>(n.id)] >= 1 &&
            uses[static_cast<std::size_t>(n.id)] <= opts.inline_max_uses;

    // Variable names <op>_<k>, k counted per op in canonical order.
    std::vector<std::string> var(g.nodes.size());
    std::map<std::string, int> op_counter;
    for (const Node& n : g.nodes)
        if (!inlined[static_cast<std::size_t>(n.id)])
            var[static_cast<std::size_t>(n.id)] =
                n.op + "_" + std::to_string(op_counter[n.op]++);

    const Catalog& catalog = Catalog::instance();

    // Expression for one input binding.
    std::function<std::string(const Node&)> expr_of;
    auto binding_expr = [&](const InputBinding& b) -> std::string {
        if (b.is_const) return transpiledetail::param_literal(b.constant);
        const Node& src = g.nodes[static_cast<std::size_t>(b.node)];
        if (inlined[static_cast<std::size_t>(src.id)]) return expr_of(src);
        const OpSignature& sig = catalog.require(src.op);
        if (sig.outputs.size() == 1) return var[static_cast<std::size_t>(src.id)];
        return var[static_cast<std::size_t>(src.id)] + ".out(" + nlohmann::json(b.output).dump() +
               ")";
    };

    auto call_expr = [&](const Node& n) -> std::string {
        const OpSignature& sig = catalog.require(n.op);
        if (n.op == "mix")
            return "ops::mix(g, " + binding_expr(n.inputs.at("a")) + ", " +
                   binding_expr(n.inputs.at("b")) + ", " + binding_expr(n.inputs.at("t")) + ")";
        if (n.op.rfind("cast_", 0) == 0)
            return "ops::" + n.op + "(g, " + binding_expr(n.inputs.at("value")) + ")";
        if (transpiledetail::is_arith(n.op)) {
            const std::string a = binding_expr(n.inputs.at("a"));
            const std::string b = binding_expr(n.inputs.at("b"));
            const char* symbol = transpiledetail::arith_symbol(n.op);
            const bool both_const =
                n.inputs.at("a").is_const && n.inputs.at("b").is_const;
            if (opts.use_operators && symbol && !both_const)
                return "(" + a + " " + symbol + " " + b + ")";
            return "ops::" + n.op + "(g, " + a + ", " + b + ")";
        }
        // General form: g.add_node("op", {params...}, {inputs...}).
        if (opts.hsv_colors && n.op == "const_color") {
            const ParamValue& c = n.param("value");
            const Vec3 rgb = c.as_vec3();
            const Vec3 hsv = rgb_to_hsv(rgb);
            if (hsv_to_rgb(hsv.x, hsv.y, hsv.z) == rgb)
                return "ops::const_color_hsv(g, " + transpiledetail::number_literal(hsv.x) +
                       ", " + transpiledetail::number_literal(hsv.y) + ", " +
                       transpiledetail::number_literal(hsv.z) + ")";
        }
        std::string call = "g.add_node(" + nlohmann::json(n.op).dump();
        std::string params;
        for (const auto& ps : sig.params) {
            const ParamValue v = n.param(ps.name);
            if (v == ps.def) continue;  // defaults stay implicit
            if (!params.empty()) params += ", ";
            params += "{" + nlohmann::json(ps.name).dump() + ", " +
                      transpiledetail::param_literal(v) + "}";
        }
        std::string inputs;
        for (const auto& [socket, binding] : n.inputs) {
            if (!inputs.empty()) inputs += ", ";
            inputs += "{" + nlohmann::json(socket).dump() + ", " + binding_expr(binding) + "}";
        }
        if (!params.empty() || !inputs.empty()) call += ", {" + params + "}";
        if (!inputs.empty()) call += ", {" + inputs + "}";
        call += ")";
        return call;
    };

    expr_of = [&](const Node& n) -> std::string { return call_expr(n); };

    std::ostringstream body;
    body << "procgen::Graph " << opts.function_name << "() {\n";
    body << pad << "procgen::GraphBuilder g;\n";
    for (const Node& n : g.nodes) {
        if (inlined[static_cast<std::size_t>(n.id)]) continue;
        const OpSignature& sig = catalog.require(n.op);
        const char* type = sig.outputs.size() == 1 ? "procgen::Value" : "procgen::NodeHandle";
        body << pad << type << " " << var[static_cast<std::size_t>(n.id)] << " = "
             << call_expr(n) << ";\n";
    }
    for (const auto& [name, ref] : g.outputs) {
        const Node& src = g.nodes[static_cast<std::size_t>(ref.node)];
        std::string expr;
        if (inlined[static_cast<std::size_t>(src.id)]) {
            expr = expr_of(src);
        } else {
            const OpSignature& sig = catalog.require(src.op);
            expr = sig.outputs.size() == 1
                       ? var[static_cast<std::size_t>(src.id)]
                       : var[static_cast<std::size_t>(src.id)] + ".out(" +
                             nlohmann::json(ref.output).dump() + ")";
        }
        body << pad << "g.output(" << nlohmann::json(name).dump() << ", " << expr << ");\n";
    }
    body << pad << "return g.build();\n";
    body << "}\n";
    return body.str();
}

}  // namespace procgen
