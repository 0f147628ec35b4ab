#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "procgen/catalog.hpp"
#include "procgen/common.hpp"
#include "procgen/kind.hpp"

namespace procgen {

using NodeId = int;

// An input socket is bound either to another node's named output or to an
// inline constant. Exactly one of the two.
struct InputBinding {
    bool is_const = false;
    NodeId node = -1;
    std::string output;
    ParamValue constant;

    static InputBinding edge(NodeId n, std::string out) {
        InputBinding b;
        b.node = n;
        b.output = std::move(out);
        return b;
    }
    static InputBinding value(ParamValue v) {
        InputBinding b;
        b.is_const = true;
        b.constant = std::move(v);
        return b;
    }
    bool operator==(const InputBinding& o) const = default;
};

struct Node {
    NodeId id = -1;
    std::string op;
    std::map<std::string, ParamValue> params;
    std::map<std::string, InputBinding> inputs;
    // Resolved output kinds in signature order; derived, not serialized.
    std::vector<ValueKind> output_kinds;

    ParamValue param(const std::string& name) const {
        auto it = params.find(name);
        if (it != params.end()) return it->second;
        const ParamSig* sig = Catalog::instance().require(op).find_param(name);
        if (!sig) raise(errc::unknown_param, op + " has no param '" + name + "'");
        return sig->def;
    }
};

struct OutputRef {
    NodeId node = -1;
    std::string output;
    bool operator==(const OutputRef& o) const = default;
};

// Immutable once built; node ids are dense integers in creation order, so
// the stored order is already a stable topological order.
class Graph {
public:
    std::vector<Node> nodes;
    std::map<std::string, OutputRef> outputs;

    const Node& node(NodeId id) const { return nodes.at(static_cast<std::size_t>(id)); }

    ValueKind kind_of(const OutputRef& ref) const {
        const Node& n = node(ref.node);
        const OpSignature& sig = Catalog::instance().require(n.op);
        for (std::size_t i = 0; i < sig.outputs.size(); ++i)
            if (sig.outputs[i].name == ref.output) return n.output_kinds[i];
        raise(errc::kind_mismatch, n.op + " has no output '" + ref.output + "'");
    }
};

class GraphBuilder;

// Handle to one named output of a node under construction.
struct Value {
    GraphBuilder* builder = nullptr;
    NodeId node = -1;
    std::string output;
    ValueKind kind = ValueKind::Float;

    OutputRef ref() const { return {node, output}; }
};

// Either a Value or an inline constant; what op helpers and overloads accept.
struct Operand {
    bool is_value = false;
    Value value;
    ParamValue constant;

    Operand(const Value& v) : is_value(true), value(v) {}
    Operand(double c) : constant(c) {}
    Operand(int c) : constant(c) {}
    Operand(std::int64_t c) : constant(c) {}
    Operand(bool c) : constant(c) {}
    Operand(const Vec2& c) : constant(c) {}
    Operand(const Vec3& c) : constant(c) {}
    Operand(const ParamValue& c) : constant(c) {}

    ValueKind kind() const { return is_value ? value.kind : constant.kind(); }
};

// Handle to a whole just-created node; converts to its first output.
struct NodeHandle {
    GraphBuilder* builder = nullptr;
    NodeId id = -1;

    Value out(const std::string& socket) const;
    Value first() const;
    operator Value() const { return first(); }
};

struct ValidationIssue {
    bool error = true;  // false = advisory warning
    std::string code;
    NodeId node = -1;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const {
        for (const auto& i : issues)
            if (i.error) return false;
        return true;
    }
    bool empty() const { return issues.empty(); }
};

// Single-owner builder. Construction never evaluates anything; it only
// appends catalog-checked nodes.
class GraphBuilder {
public:
    using ParamMap = std::map<std::string, ParamValue>;
    using InputMap = std::map<std::string, Operand>;

    NodeHandle add_node(const std::string& op, const ParamMap& params = {},
                        const InputMap& inputs = {}) {
        const OpSignature& sig = Catalog::instance().require(op);

        Node n;
        n.id = static_cast<NodeId>(graph_.nodes.size());
        n.op = op;

        for (const auto& [name, value] : params) {
            const ParamSig* ps = sig.find_param(name);
            if (!ps) raise(errc::kind_mismatch, op + " has no param '" + name + "'");
            n.params[name] = coerce_param(*ps, value, op);
        }
        for (const auto& ps : sig.params)
            if (!n.params.count(ps.name)) n.params[ps.name] = ps.def;

        std::vector<ValueKind> input_kinds;
        for (const auto& socket : sig.inputs) {
            auto it = inputs.find(socket.name);
            if (it == inputs.end())
                raise(errc::missing_input, op + ": input socket '" + socket.name + "' is unbound");
            const Operand& operand = it->second;
            if (operand.is_value) {
                if (operand.value.builder != this)
                    raise(errc::kind_mismatch, op + "." + socket.name +
                                                   ": value from a different builder");
                if (operand.value.node < 0 || operand.value.node >= n.id)
                    raise(errc::cycle_detected, op + "." + socket.name +
                                                    ": edge must point to an earlier node");
                n.inputs[socket.name] =
                    InputBinding::edge(operand.value.node, operand.value.output);
                input_kinds.push_back(operand.value.kind);
            } else {
                if (operand.constant.is_string())
                    raise(errc::kind_mismatch,
                          op + "." + socket.name + ": strings cannot feed sockets");
                n.inputs[socket.name] = InputBinding::value(operand.constant);
                input_kinds.push_back(operand.constant.kind());
            }
        }
        for (const auto& [name, operand] : inputs) {
            (void)operand;
            if (!sig.find_input(name))
                raise(errc::kind_mismatch, op + " has no input socket '" + name + "'");
        }

        n.output_kinds = infer_output_kinds(sig, input_kinds);
        graph_.nodes.push_back(std::move(n));
        return NodeHandle{this, static_cast<NodeId>(graph_.nodes.size() - 1)};
    }

    Value constant(const ParamValue& v) {
        const char* op = nullptr;
        switch (v.kind()) {
            case ValueKind::Float: op = "const_float"; break;
            case ValueKind::Int: op = "const_int"; break;
            case ValueKind::Bool: op = "const_bool"; break;
            case ValueKind::Vec2: op = "const_vec2"; break;
            case ValueKind::Vec3: op = "const_vec3"; break;
            case ValueKind::Color: op = "const_color"; break;
        }
        return add_node(op, {{"value", v}}).first();
    }

    // Arithmetic with the same inference as explicit add_node calls. Two
    // scalar literal operands fold to a single constant node.
    Value binary(const std::string& symbol, const Operand& a, const Operand& b) {
        const std::string op = op_for_symbol(symbol);
        if (!a.is_value && !b.is_value && is_scalar(a.constant.kind()) &&
            is_scalar(b.constant.kind()))
            return constant(fold_scalar(op, a.constant, b.constant));
        return add_node(op, {}, {{"a", a}, {"b", b}}).first();
    }

    Value cast(const Value& v, ValueKind target) {
        if (!cast_supported(v.kind, target))
            raise(errc::unsupported_cast, std::string(kind_name(v.kind)) + " -> " +
                                              kind_name(target) + " is not in the cast table");
        return add_node(cast_op_for(target), {}, {{"value", Operand(v)}}).first();
    }

    void output(const std::string& name, const Value& v) {
        if (v.builder != this) raise(errc::kind_mismatch, "output from a different builder");
        graph_.outputs[name] = v.ref();
    }

    Value value_of(NodeId id, const std::string& socket) const {
        const Node& n = graph_.nodes.at(static_cast<std::size_t>(id));
        const OpSignature& sig = Catalog::instance().require(n.op);
        for (std::size_t i = 0; i < sig.outputs.size(); ++i)
            if (sig.outputs[i].name == socket)
                return Value{const_cast<GraphBuilder*>(this), id, socket, n.output_kinds[i]};
        raise(errc::kind_mismatch, n.op + " has no output '" + socket + "'");
    }

    Value first_output_of(NodeId id) const {
        const Node& n = graph_.nodes.at(static_cast<std::size_t>(id));
        return value_of(id, Catalog::instance().require(n.op).outputs[0].name);
    }

    std::size_t node_count() const { return graph_.nodes.size(); }

    Graph build() { return std::move(graph_); }

private:
    static std::string op_for_symbol(const std::string& symbol) {
        if (symbol == "+") return "add";
        if (symbol == "-") return "sub";
        if (symbol == "*") return "mul";
        if (symbol == "/") return "div";
        if (symbol == "//") return "floordiv";
        raise(errc::unknown_op, "no operator '" + symbol + "'");
    }

    static ParamValue coerce_param(const ParamSig& sig, const ParamValue& v,
                                   const std::string& op) {
        if (v.tag() == sig.tag) return v;
        if (sig.tag == "Float" && v.tag() == "Int") return ParamValue(v.as_double());
        raise(errc::kind_mismatch, op + "." + sig.name + ": param expects " + sig.tag + ", got " +
                                       v.tag());
    }

    static ParamValue fold_scalar(const std::string& op, const ParamValue& a,
                                  const ParamValue& b) {
        const double x = a.as_double(), y = b.as_double();
        const bool both_int = a.kind() == ValueKind::Int && b.kind() == ValueKind::Int;
        double r = 0.0;
        if (op == "add") r = x + y;
        else if (op == "sub") r = x - y;
        else if (op == "mul") r = x * y;
        else if (op == "div") { r = x / y; return ParamValue(r); }
        else if (op == "floordiv") r = std::floor(x / y);
        if (both_int) return ParamValue(static_cast<std::int64_t>(r));
        return ParamValue(r);
    }

    Graph graph_;
};

inline Value NodeHandle::out(const std::string& socket) const {
    return builder->value_of(id, socket);
}
inline Value NodeHandle::first() const { return builder->first_output_of(id); }

inline Value operator+(const Value& a, const Operand& b) { return a.builder->binary("+", a, b); }
inline Value operator-(const Value& a, const Operand& b) { return a.builder->binary("-", a, b); }
inline Value operator*(const Value& a, const Operand& b) { return a.builder->binary("*", a, b); }
inline Value operator/(const Value& a, const Operand& b) { return a.builder->binary("/", a, b); }
inline Value operator+(double a, const Value& b) { return b.builder->binary("+", a, b); }
inline Value operator-(double a, const Value& b) { return b.builder->binary("-", a, b); }
inline Value operator*(double a, const Value& b) { return b.builder->binary("*", a, b); }
inline Value operator/(double a, const Value& b) { return b.builder->binary("/", a, b); }
inline Value floordiv(const Value& a, const Operand& b) { return a.builder->binary("//", a, b); }

// Structural well-formedness report. Errors break the Graph contract;
// warnings (unreachable nodes) are advisory. Never throws, never mutates.
inline ValidationReport validate(const Graph& g) {
    ValidationReport report;
    auto issue = [&](bool error, std::string code, NodeId node, std::string msg) {
        report.issues.push_back({error, std::move(code), node, std::move(msg)});
    };

    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const Node& n = g.nodes[i];
        if (n.id != static_cast<NodeId>(i))
            issue(true, "NonDenseId", n.id, "node ids must be dense and ordered");
        const OpSignature* sig = Catalog::instance().find(n.op);
        if (!sig) {
            issue(true, "UnknownOp", n.id, "op '" + n.op + "' not in catalog");
            continue;
        }
        for (const auto& socket : sig->inputs)
            if (!n.inputs.count(socket.name))
                issue(true, "MissingInput", n.id, n.op + "." + socket.name + " unbound");
        for (const auto& [name, binding] : n.inputs) {
            if (!sig->find_input(name)) {
                issue(true, "UnknownSocket", n.id, n.op + " has no input '" + name + "'");
                continue;
            }
            if (binding.is_const) continue;
            if (binding.node < 0 || binding.node >= static_cast<NodeId>(g.nodes.size())) {
                issue(true, "DanglingEdge", n.id,
                      n.op + "." + name + " references missing node " +
                          std::to_string(binding.node));
                continue;
            }
            if (binding.node >= n.id)
                issue(true, "CycleDetected", n.id,
                      n.op + "." + name + " references a later node");
            const Node& src = g.nodes[static_cast<std::size_t>(binding.node)];
            const OpSignature* ssig = Catalog::instance().find(src.op);
            if (ssig && !ssig->find_output(binding.output))
                issue(true, "DanglingEdge", n.id,
                      src.op + " has no output '" + binding.output + "'");
        }
    }

    for (const auto& [name, ref] : g.outputs) {
        if (ref.node < 0 || ref.node >= static_cast<NodeId>(g.nodes.size()))
            issue(true, "DanglingEdge", ref.node, "output '" + name + "' references missing node");
        else {
            const Node& src = g.nodes[static_cast<std::size_t>(ref.node)];
            const OpSignature* ssig = Catalog::instance().find(src.op);
            if (ssig && !ssig->find_output(ref.output))
                issue(true, "DanglingEdge", ref.node,
                      "output '" + name + "' references missing socket '" + ref.output + "'");
        }
    }

    // Reachability from the declared outputs.
    std::vector<char> reachable(g.nodes.size(), 0);
    std::vector<NodeId> stack;
    for (const auto& [name, ref] : g.outputs) {
        (void)name;
        if (ref.node >= 0 && ref.node < static_cast<NodeId>(g.nodes.size())) stack.push_back(ref.node);
    }
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (reachable[static_cast<std::size_t>(id)]) continue;
        reachable[static_cast<std::size_t>(id)] = 1;
        for (const auto& [name, binding] : g.nodes[static_cast<std::size_t>(id)].inputs) {
            (void)name;
            if (!binding.is_const && binding.node >= 0 &&
                binding.node < static_cast<NodeId>(g.nodes.size()))
                stack.push_back(binding.node);
        }
    }
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        if (!reachable[i] && !g.outputs.empty())
            issue(false, "DeadNode", static_cast<NodeId>(i),
                  g.nodes[i].op + " is unreachable from any output");

    return report;
}

}  // namespace procgen
