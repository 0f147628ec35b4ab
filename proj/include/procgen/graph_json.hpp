#pragma once

#include <string>

#include <json.hpp>

#include "procgen/graph.hpp"

namespace procgen {

// Graph JSON, format version 1. Strict on read: unknown fields are rejected
// so a file that parses is exactly a file we could have written.

namespace jsonio {

inline nlohmann::json tagged_value(const ParamValue& v) {
    nlohmann::json j;
    j["kind"] = v.tag();
    if (v.is_string()) {
        j["v"] = v.as_string();
    } else {
        switch (v.kind()) {
            case ValueKind::Float: j["v"] = v.as_double(); break;
            case ValueKind::Int: j["v"] = v.as_int(); break;
            case ValueKind::Bool: j["v"] = v.as_bool(); break;
            default: j["v"] = v.components(); break;
        }
    }
    return j;
}

inline void reject_unknown_fields(const nlohmann::json& obj,
                                  std::initializer_list<const char*> allowed,
                                  const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed)
            if (it.key() == a) ok = true;
        if (!ok) raise(errc::malformed_file, where + ": unknown field '" + it.key() + "'");
    }
}

inline ParamValue parse_tagged_value(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("v"))
        raise(errc::malformed_file, where + ": tagged value needs {kind, v}");
    reject_unknown_fields(j, {"kind", "v"}, where);
    const std::string tag = j.at("kind").get<std::string>();
    const nlohmann::json& v = j.at("v");
    if (tag == "String") {
        if (!v.is_string()) raise(errc::malformed_file, where + ": String payload");
        return ParamValue(v.get<std::string>());
    }
    if (tag == "Float") {
        if (!v.is_number()) raise(errc::malformed_file, where + ": Float payload");
        return ParamValue(v.get<double>());
    }
    if (tag == "Int") {
        if (!v.is_number_integer()) raise(errc::malformed_file, where + ": Int payload");
        return ParamValue(v.get<std::int64_t>());
    }
    if (tag == "Bool") {
        if (!v.is_boolean()) raise(errc::malformed_file, where + ": Bool payload");
        return ParamValue(v.get<bool>());
    }
    if (tag == "Vec2" || tag == "Vec3" || tag == "Color") {
        const std::size_t want = tag == "Vec2" ? 2 : 3;
        if (!v.is_array() || v.size() != want)
            raise(errc::malformed_file, where + ": " + tag + " payload needs " +
                                            std::to_string(want) + " numbers");
        std::vector<double> c;
        for (const auto& e : v) {
            if (!e.is_number()) raise(errc::malformed_file, where + ": " + tag + " payload");
            c.push_back(e.get<double>());
        }
        return ParamValue::with_tag(tag, std::move(c));
    }
    raise(errc::malformed_file, where + ": unknown kind tag '" + tag + "'");
}

}  // namespace jsonio

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["version"] = 1;
    j["nodes"] = nlohmann::json::array();
    for (const Node& n : g.nodes) {
        nlohmann::json jn;
        jn["id"] = n.id;
        jn["op"] = n.op;
        jn["params"] = nlohmann::json::object();
        for (const auto& [name, value] : n.params) jn["params"][name] = jsonio::tagged_value(value);
        jn["inputs"] = nlohmann::json::object();
        for (const auto& [socket, binding] : n.inputs) {
            if (binding.is_const)
                jn["inputs"][socket] = {{"const", jsonio::tagged_value(binding.constant)}};
            else
                jn["inputs"][socket] = {{"node", binding.node}, {"output", binding.output}};
        }
        j["nodes"].push_back(std::move(jn));
    }
    j["outputs"] = nlohmann::json::object();
    for (const auto& [name, ref] : g.outputs)
        j["outputs"][name] = {{"node", ref.node}, {"output", ref.output}};
    return j;
}

inline std::string serialize_graph(const Graph& g) { return graph_to_json(g).dump(2) + "\n"; }

inline Graph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object()) raise(errc::malformed_file, "graph: expected object");
    jsonio::reject_unknown_fields(j, {"version", "nodes", "outputs"}, "graph");
    if (!j.contains("version") || j.at("version") != 1)
        raise(errc::malformed_file, "graph: missing or unsupported version");
    if (!j.contains("nodes") || !j.at("nodes").is_array())
        raise(errc::malformed_file, "graph: nodes must be an array");

    Graph g;
    for (const auto& jn : j.at("nodes")) {
        const std::string where = "node " + std::to_string(g.nodes.size());
        if (!jn.is_object()) raise(errc::malformed_file, where + ": expected object");
        jsonio::reject_unknown_fields(jn, {"id", "op", "params", "inputs"}, where);
        for (const char* field : {"id", "op", "params", "inputs"})
            if (!jn.contains(field))
                raise(errc::malformed_file, where + ": missing field '" + field + "'");

        Node n;
        n.id = jn.at("id").get<NodeId>();
        if (n.id != static_cast<NodeId>(g.nodes.size()))
            raise(errc::malformed_file, where + ": ids must be dense and in order");
        n.op = jn.at("op").get<std::string>();
        const OpSignature* sig = Catalog::instance().find(n.op);
        if (!sig) raise(errc::malformed_file, where + ": unknown op '" + n.op + "'");

        for (auto it = jn.at("params").begin(); it != jn.at("params").end(); ++it) {
            if (!sig->find_param(it.key()))
                raise(errc::malformed_file, where + ": " + n.op + " has no param '" + it.key() + "'");
            n.params[it.key()] = jsonio::parse_tagged_value(it.value(), where + "." + it.key());
        }
        for (const auto& ps : sig->params)
            if (!n.params.count(ps.name)) n.params[ps.name] = ps.def;

        std::vector<ValueKind> input_kinds;
        for (const auto& socket : sig->inputs) {
            const auto& jin = jn.at("inputs");
            if (!jin.contains(socket.name))
                raise(errc::malformed_file,
                      where + ": input socket '" + socket.name + "' is unbound");
            const nlohmann::json& jb = jin.at(socket.name);
            const std::string bwhere = where + "." + socket.name;
            if (jb.contains("const")) {
                jsonio::reject_unknown_fields(jb, {"const"}, bwhere);
                ParamValue c = jsonio::parse_tagged_value(jb.at("const"), bwhere);
                if (c.is_string()) raise(errc::malformed_file, bwhere + ": strings cannot feed sockets");
                input_kinds.push_back(c.kind());
                n.inputs[socket.name] = InputBinding::value(std::move(c));
            } else {
                jsonio::reject_unknown_fields(jb, {"node", "output"}, bwhere);
                if (!jb.contains("node") || !jb.contains("output"))
                    raise(errc::malformed_file, bwhere + ": edge needs {node, output}");
                NodeId src = jb.at("node").get<NodeId>();
                std::string out = jb.at("output").get<std::string>();
                if (src < 0 || src >= n.id)
                    raise(errc::malformed_file, bwhere + ": edge must reference an earlier node");
                const Node& sn = g.nodes[static_cast<std::size_t>(src)];
                const OpSignature& ssig = Catalog::instance().require(sn.op);
                const SocketSpec* so = ssig.find_output(out);
                if (!so)
                    raise(errc::malformed_file, bwhere + ": " + sn.op + " has no output '" + out + "'");
                for (std::size_t k = 0; k < ssig.outputs.size(); ++k)
                    if (ssig.outputs[k].name == out) input_kinds.push_back(sn.output_kinds[k]);
                n.inputs[socket.name] = InputBinding::edge(src, std::move(out));
            }
        }
        for (auto it = jn.at("inputs").begin(); it != jn.at("inputs").end(); ++it)
            if (!sig->find_input(it.key()))
                raise(errc::malformed_file, where + ": " + n.op + " has no input '" + it.key() + "'");

        n.output_kinds = infer_output_kinds(*sig, input_kinds);
        g.nodes.push_back(std::move(n));
    }

    if (j.contains("outputs")) {
        if (!j.at("outputs").is_object())
            raise(errc::malformed_file, "graph: outputs must be an object");
        for (auto it = j.at("outputs").begin(); it != j.at("outputs").end(); ++it) {
            const nlohmann::json& jo = it.value();
            jsonio::reject_unknown_fields(jo, {"node", "output"}, "output " + it.key());
            NodeId src = jo.at("node").get<NodeId>();
            std::string out = jo.at("output").get<std::string>();
            if (src < 0 || src >= static_cast<NodeId>(g.nodes.size()))
                raise(errc::malformed_file, "output '" + it.key() + "': missing node");
            const Node& sn = g.nodes[static_cast<std::size_t>(src)];
            if (!Catalog::instance().require(sn.op).find_output(out))
                raise(errc::malformed_file,
                      "output '" + it.key() + "': " + sn.op + " has no output '" + out + "'");
            g.outputs[it.key()] = OutputRef{src, std::move(out)};
        }
    }
    return g;
}

inline Graph parse_graph(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) raise(errc::malformed_file, "graph: invalid JSON");
    return graph_from_json(j);
}

inline bool graphs_equal(const Graph& a, const Graph& b) {
    if (a.nodes.size() != b.nodes.size()) return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        const Node& x = a.nodes[i];
        const Node& y = b.nodes[i];
        if (x.id != y.id || x.op != y.op || x.params != y.params || x.inputs != y.inputs)
            return false;
    }
    return a.outputs == b.outputs;
}

}  // namespace procgen
