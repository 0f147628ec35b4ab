#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "procgen/colorspace.hpp"
#include "procgen/graph.hpp"
#include "procgen/masks.hpp"
#include "procgen/noise.hpp"
#include "procgen/patterns.hpp"

namespace procgen {

// Counts node evaluations. Lets tests prove that graph construction and
// tracing never touch the interpreter, and that memoization holds.
namespace instrumentation {
inline std::atomic<std::uint64_t>& node_eval_counter() {
    static std::atomic<std::uint64_t> counter{0};
    return counter;
}
inline void reset_node_evals() { node_eval_counter().store(0); }
inline std::uint64_t node_evals() { return node_eval_counter().load(); }
}  // namespace instrumentation

// Positions plus named per-point auxiliary arrays ("uv": Vec2,
// "curvature": Float, ...). All arrays cover the same points.
struct SampleBatch {
    std::vector<Vec3> points;
    std::map<std::string, std::pair<ValueKind, std::vector<double>>> aux;

    std::size_t size() const { return points.size(); }

    void set_aux(const std::string& name, ValueKind kind, std::vector<double> data) {
        aux[name] = {kind, std::move(data)};
    }

    SampleBatch slice(std::size_t begin, std::size_t end) const {
        SampleBatch s;
        s.points.assign(points.begin() + static_cast<std::ptrdiff_t>(begin),
                        points.begin() + static_cast<std::ptrdiff_t>(end));
        for (const auto& [name, entry] : aux) {
            const int arity = kind_arity(entry.first);
            std::vector<double> d(entry.second.begin() + static_cast<std::ptrdiff_t>(begin * arity),
                                  entry.second.begin() + static_cast<std::ptrdiff_t>(end * arity));
            s.aux[name] = {entry.first, std::move(d)};
        }
        return s;
    }
};

// Flat kind-tagged result array; length = batch size * kind arity.
struct FieldBuffer {
    ValueKind kind = ValueKind::Float;
    std::vector<double> data;

    std::size_t count() const { return data.empty() ? 0 : data.size() / kind_arity(kind); }
};

namespace evaldetail {

// Read-only view over one input socket: either a per-point buffer or a
// broadcast constant.
struct InView {
    const double* ptr = nullptr;
    std::size_t point_stride = 0;  // 0 broadcasts one value to every point
    int arity = 1;

    double at(std::size_t i, int component) const {
        return ptr[i * point_stride + static_cast<std::size_t>(arity == 1 ? 0 : component)];
    }
    double scalar(std::size_t i) const { return ptr[i * point_stride]; }
    Vec3 vec3(std::size_t i) const {
        const std::size_t b = i * point_stride;
        return {ptr[b], ptr[b + 1], ptr[b + 2]};
    }
    Vec2 vec2(std::size_t i) const {
        const std::size_t b = i * point_stride;
        return {ptr[b], ptr[b + 1]};
    }
};

[[noreturn]] inline void domain_error(const Node& n, const std::string& why) {
    raise(errc::eval_domain, "node " + std::to_string(n.id) + " (" + n.op + "): " + why);
}

inline void check_param_ranges(const Node& n, const OpSignature& sig) {
    for (const auto& ps : sig.params) {
        if (ps.tag != "Float" && ps.tag != "Int") continue;
        const double v = n.param(ps.name).as_double();
        if (ps.lo_exclusive ? !(v > ps.lo) : !(v >= ps.lo))
            domain_error(n, ps.name + " = " + std::to_string(v) + " below legal range");
        if (!(v <= ps.hi)) domain_error(n, ps.name + " = " + std::to_string(v) + " above legal range");
    }
}

}  // namespace evaldetail

class Evaluator {
public:
    Evaluator(const Graph& graph, const SampleBatch& batch) : graph_(graph), batch_(batch) {
        cache_.resize(graph.nodes.size());
    }

    const FieldBuffer& result(const OutputRef& ref) {
        compute_upto(ref.node);
        const auto& buffers = *cache_[static_cast<std::size_t>(ref.node)];
        const OpSignature& sig = Catalog::instance().require(graph_.node(ref.node).op);
        for (std::size_t i = 0; i < sig.outputs.size(); ++i)
            if (sig.outputs[i].name == ref.output) return buffers[i];
        raise(errc::unknown_param, "no output socket '" + ref.output + "'");
    }

private:
    void compute_upto(NodeId target) {
        // Mark the ancestor set of `target`, then evaluate in id order (ids
        // are topological by construction).
        std::vector<char> needed(graph_.nodes.size(), 0);
        std::vector<NodeId> stack{target};
        while (!stack.empty()) {
            NodeId id = stack.back();
            stack.pop_back();
            if (needed[static_cast<std::size_t>(id)]) continue;
            needed[static_cast<std::size_t>(id)] = 1;
            for (const auto& [name, b] : graph_.node(id).inputs) {
                (void)name;
                if (!b.is_const) stack.push_back(b.node);
            }
        }
        for (NodeId id = 0; id <= target; ++id)
            if (needed[static_cast<std::size_t>(id)] && !cache_[static_cast<std::size_t>(id)])
                eval_node(graph_.node(id));
    }

    evaldetail::InView view_of(const Node& n, const std::string& socket,
                               std::vector<std::vector<double>>& const_storage) {
        const InputBinding& b = n.inputs.at(socket);
        evaldetail::InView v;
        if (b.is_const) {
            const_storage.push_back(b.constant.components());
            v.ptr = const_storage.back().data();
            v.point_stride = 0;
            v.arity = kind_arity(b.constant.kind());
        } else {
            const FieldBuffer& buf = (*cache_[static_cast<std::size_t>(b.node)])[socket_index(b)];
            v.ptr = buf.data.data();
            v.arity = kind_arity(buf.kind);
            v.point_stride = static_cast<std::size_t>(v.arity);
        }
        return v;
    }

    std::size_t socket_index(const InputBinding& b) const {
        const OpSignature& sig = Catalog::instance().require(graph_.node(b.node).op);
        for (std::size_t i = 0; i < sig.outputs.size(); ++i)
            if (sig.outputs[i].name == b.output) return i;
        raise(errc::unknown_param, "no output socket '" + b.output + "'");
    }

    void eval_node(const Node& n);

    const Graph& graph_;
    const SampleBatch& batch_;
    std::vector<std::optional<std::vector<FieldBuffer>>> cache_;
};

// Evaluates one named graph output over the batch. Each node is computed at
// most once; results are independent of evaluation order and of chunking.
inline FieldBuffer evaluate(const Graph& graph, const std::string& output,
                            const SampleBatch& batch) {
    auto it = graph.outputs.find(output);
    if (it == graph.outputs.end())
        raise(errc::unknown_param, "graph has no output named '" + output + "'");
    Evaluator ev(graph, batch);
    return ev.result(it->second);
}

inline FieldBuffer evaluate_ref(const Graph& graph, const OutputRef& ref,
                                const SampleBatch& batch) {
    Evaluator ev(graph, batch);
    return ev.result(ref);
}

inline void Evaluator::eval_node(const Node& n) {
    using evaldetail::InView;
    using evaldetail::domain_error;

    instrumentation::node_eval_counter().fetch_add(1, std::memory_order_relaxed);

    const OpSignature& sig = Catalog::instance().require(n.op);
    evaldetail::check_param_ranges(n, sig);
    const std::size_t m = batch_.size();

    std::vector<std::vector<double>> const_storage;
    const_storage.reserve(n.inputs.size());
    std::vector<InView> in;
    in.reserve(sig.inputs.size());
    for (const auto& socket : sig.inputs) in.push_back(view_of(n, socket.name, const_storage));

    std::vector<FieldBuffer> out(sig.outputs.size());
    const std::vector<ValueKind>& kinds = n.output_kinds;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].kind = kinds[i];
        out[i].data.resize(m * static_cast<std::size_t>(kind_arity(kinds[i])));
    }

    const std::string& op = n.op;
    const int out_arity = kind_arity(kinds[0]);
    double* o = out[0].data.data();

    auto elementwise2 = [&](auto&& fn) {
        const InView a = in[0], b = in[1];
        if (out_arity == 1 && a.arity == 1 && b.arity == 1) {
            for (std::size_t i = 0; i < m; ++i)
                o[i] = fn(a.ptr[i * a.point_stride], b.ptr[i * b.point_stride]);
        } else {
            for (std::size_t i = 0; i < m; ++i)
                for (int c = 0; c < out_arity; ++c)
                    o[i * static_cast<std::size_t>(out_arity) + static_cast<std::size_t>(c)] =
                        fn(a.at(i, c), b.at(i, c));
        }
    };
    auto elementwise1 = [&](auto&& fn) {
        const InView a = in[0];
        for (std::size_t i = 0; i < m; ++i)
            for (int c = 0; c < out_arity; ++c)
                o[i * static_cast<std::size_t>(out_arity) + static_cast<std::size_t>(c)] =
                    fn(a.at(i, c));
    };

    if (op == "const_float" || op == "const_int" || op == "const_bool" || op == "const_vec2" ||
        op == "const_vec3" || op == "const_color") {
        const ParamValue value = n.param("value");
        const std::vector<double>& c = value.components();
        for (std::size_t i = 0; i < m; ++i)
            for (int k = 0; k < out_arity; ++k)
                o[i * static_cast<std::size_t>(out_arity) + static_cast<std::size_t>(k)] =
                    c[static_cast<std::size_t>(k)];
    } else if (op == "position") {
        for (std::size_t i = 0; i < m; ++i) {
            o[i * 3] = batch_.points[i].x;
            o[i * 3 + 1] = batch_.points[i].y;
            o[i * 3 + 2] = batch_.points[i].z;
        }
    } else if (op == "uv" || op == "aux_float") {
        const std::string name = op == "uv" ? "uv" : n.param("name").as_string();
        auto it = batch_.aux.find(name);
        if (it == batch_.aux.end())
            raise(errc::missing_aux_field, "batch has no aux field '" + name + "'");
        if (it->second.first != kinds[0])
            raise(errc::missing_aux_field, "aux field '" + name + "' has kind " +
                                               kind_name(it->second.first) + ", expected " +
                                               kind_name(kinds[0]));
        out[0].data = it->second.second;
    } else if (op == "add") {
        elementwise2([](double a, double b) { return a + b; });
    } else if (op == "sub") {
        elementwise2([](double a, double b) { return a - b; });
    } else if (op == "mul") {
        elementwise2([](double a, double b) { return a * b; });
    } else if (op == "div") {
        elementwise2([](double a, double b) { return a / b; });
    } else if (op == "floordiv") {
        elementwise2([](double a, double b) { return std::floor(a / b); });
    } else if (op == "mod") {
        // Floored modulo, consistent with floordiv.
        elementwise2([](double a, double b) { return a - b * std::floor(a / b); });
    } else if (op == "pow") {
        elementwise2([](double a, double b) { return std::pow(a, b); });
    } else if (op == "min") {
        elementwise2([](double a, double b) { return b < a ? b : a; });
    } else if (op == "max") {
        elementwise2([](double a, double b) { return a < b ? b : a; });
    } else if (op == "abs") {
        elementwise1([](double x) { return std::fabs(x); });
    } else if (op == "floor") {
        elementwise1([](double x) { return std::floor(x); });
    } else if (op == "round") {
        elementwise1([](double x) { return std::round(x); });
    } else if (op == "sign") {
        elementwise1([](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
    } else if (op == "fract") {
        elementwise1([](double x) { return x - std::floor(x); });
    } else if (op == "sqrt") {
        elementwise1([](double x) { return std::sqrt(x); });
    } else if (op == "sin") {
        elementwise1([](double x) { return std::sin(x); });
    } else if (op == "cos") {
        elementwise1([](double x) { return std::cos(x); });
    } else if (op == "step") {
        const InView e = in[0], x = in[1];
        for (std::size_t i = 0; i < m; ++i) o[i] = x.scalar(i) < e.scalar(i) ? 0.0 : 1.0;
    } else if (op == "dot") {
        const InView a = in[0], b = in[1];
        for (std::size_t i = 0; i < m; ++i) o[i] = dot(a.vec3(i), b.vec3(i));
    } else if (op == "length") {
        for (std::size_t i = 0; i < m; ++i) o[i] = in[0].vec3(i).length();
    } else if (op == "normalize") {
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3 v = in[0].vec3(i).normalized();
            o[i * 3] = v.x;
            o[i * 3 + 1] = v.y;
            o[i * 3 + 2] = v.z;
        }
    } else if (op == "combine_vec2") {
        for (std::size_t i = 0; i < m; ++i) {
            o[i * 2] = in[0].scalar(i);
            o[i * 2 + 1] = in[1].scalar(i);
        }
    } else if (op == "combine_vec3" || op == "combine_color") {
        for (std::size_t i = 0; i < m; ++i) {
            o[i * 3] = in[0].scalar(i);
            o[i * 3 + 1] = in[1].scalar(i);
            o[i * 3 + 2] = in[2].scalar(i);
        }
    } else if (op == "separate_vec2") {
        double* o1 = out[1].data.data();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec2 v = in[0].vec2(i);
            o[i] = v.x;
            o1[i] = v.y;
        }
    } else if (op == "separate_vec3" || op == "separate_color") {
        double* o1 = out[1].data.data();
        double* o2 = out[2].data.data();
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3 v = in[0].vec3(i);
            o[i] = v.x;
            o1[i] = v.y;
            o2[i] = v.z;
        }
    } else if (op == "rotate_uv90") {
        const InView uvv = in[0], steps = in[1];
        for (std::size_t i = 0; i < m; ++i) {
            const Vec2 uv = uvv.vec2(i);
            const auto k = static_cast<int>(((noise::fast_floor(steps.scalar(i)) % 4) + 4) % 4);
            Vec2 r = uv;
            if (k == 1) r = {1.0 - uv.y, uv.x};
            else if (k == 2) r = {1.0 - uv.x, 1.0 - uv.y};
            else if (k == 3) r = {uv.y, 1.0 - uv.x};
            o[i * 2] = r.x;
            o[i * 2 + 1] = r.y;
        }
    } else if (op == "map_range") {
        const double flo = n.param("from_lo").as_double();
        const double fhi = n.param("from_hi").as_double();
        const double tlo = n.param("to_lo").as_double();
        const double thi = n.param("to_hi").as_double();
        const bool do_clamp = n.param("clamp").as_bool();
        if (fhi == flo) domain_error(n, "DegenerateRange: from_lo == from_hi");
        for (std::size_t i = 0; i < m; ++i) {
            double r = (in[0].scalar(i) - flo) / (fhi - flo);
            if (do_clamp) r = clamp01(r);
            o[i] = tlo + r * (thi - tlo);
        }
    } else if (op == "mix") {
        const InView a = in[0], b = in[1], t = in[2];
        for (std::size_t i = 0; i < m; ++i) {
            const double ti = t.scalar(i);
            for (int c = 0; c < out_arity; ++c)
                o[i * static_cast<std::size_t>(out_arity) + static_cast<std::size_t>(c)] =
                    std::lerp(a.at(i, c), b.at(i, c), ti);
        }
    } else if (op == "clamp") {
        const double lo = n.param("lo").as_double();
        const double hi = n.param("hi").as_double();
        elementwise1([&](double x) { return x < lo ? lo : (x > hi ? hi : x); });
    } else if (op == "smoothstep") {
        const double lo = n.param("lo").as_double();
        const double hi = n.param("hi").as_double();
        for (std::size_t i = 0; i < m; ++i) o[i] = masks::smoothstep01(lo, hi, in[0].scalar(i));
    } else if (op == "hsv_to_rgb") {
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3 rgb = hsv_to_rgb(in[0].scalar(i), in[1].scalar(i), in[2].scalar(i));
            o[i * 3] = rgb.x;
            o[i * 3 + 1] = rgb.y;
            o[i * 3 + 2] = rgb.z;
        }
    } else if (op == "rgb_to_hsv") {
        for (std::size_t i = 0; i < m; ++i) {
            const Vec3 hsv = rgb_to_hsv(in[0].vec3(i));
            o[i * 3] = hsv.x;
            o[i * 3 + 1] = hsv.y;
            o[i * 3 + 2] = hsv.z;
        }
    } else if (op == "perlin_noise") {
        const double f = n.param("frequency").as_double();
        for (std::size_t i = 0; i < m; ++i) o[i] = noise::perlin(in[0].vec3(i), f);
    } else if (op == "fbm") {
        const double f = n.param("frequency").as_double();
        const auto oct = static_cast<int>(n.param("octaves").as_int());
        const double lac = n.param("lacunarity").as_double();
        const double gain = n.param("gain").as_double();
        for (std::size_t i = 0; i < m; ++i) o[i] = noise::fbm(in[0].vec3(i), f, oct, lac, gain);
    } else if (op == "voronoi") {
        const double f = n.param("frequency").as_double();
        double* oid = out[1].data.data();
        double* oc = out[2].data.data();
        for (std::size_t i = 0; i < m; ++i) {
            const noise::WorleyResult w = noise::worley(in[0].vec3(i) * f);
            o[i] = w.f1 / f;
            oid[i] = w.cell_id;
            oc[i * 3] = w.feature.x / f;
            oc[i * 3 + 1] = w.feature.y / f;
            oc[i * 3 + 2] = w.feature.z / f;
        }
    } else if (op == "white_noise") {
        for (std::size_t i = 0; i < m; ++i) o[i] = noise::white(in[0].vec3(i));
    } else if (op == "brick_grid" || op == "tile_grid" || op == "plank_grid") {
        double* oid = out[1].data.data();
        double* ouv = out[2].data.data();
        auto emit = [&](std::size_t i, const patterns::CellSample& s) {
            o[i] = s.mask;
            oid[i] = s.cell_id;
            ouv[i * 2] = s.cell_uv.x;
            ouv[i * 2 + 1] = s.cell_uv.y;
        };
        try {
            if (op == "brick_grid") {
                const std::int64_t rows = n.param("rows").as_int();
                const std::int64_t cols = n.param("cols").as_int();
                const double mortar = n.param("mortar_width").as_double();
                const double offset = n.param("row_offset").as_double();
                for (std::size_t i = 0; i < m; ++i)
                    emit(i, patterns::brick_grid(in[0].vec2(i), rows, cols, mortar, offset));
            } else if (op == "tile_grid") {
                const std::int64_t nx = n.param("nx").as_int();
                const std::int64_t ny = n.param("ny").as_int();
                const double grout = n.param("grout").as_double();
                for (std::size_t i = 0; i < m; ++i)
                    emit(i, patterns::tile_grid(in[0].vec2(i), nx, ny, grout));
            } else {
                const double w = n.param("plank_width").as_double();
                const double len = n.param("length_mean").as_double();
                const double gap = n.param("gap").as_double();
                for (std::size_t i = 0; i < m; ++i)
                    emit(i, patterns::plank_grid(in[0].vec2(i), w, len, gap));
            }
        } catch (const Error& e) {
            if (e.code() == errc::invalid_mortar) domain_error(n, e.what());
            throw;
        }
    } else if (op == "scratches") {
        const double density = n.param("density").as_double();
        const double len = n.param("length").as_double();
        const double width = n.param("width").as_double();
        const double seed = n.param("seed_offset").as_double();
        if (width >= len) domain_error(n, "width must be smaller than length");
        for (std::size_t i = 0; i < m; ++i)
            o[i] = masks::scratches(in[0].vec3(i), density, len, width, seed);
    } else if (op == "cracks") {
        const double scale = n.param("scale").as_double();
        const double width = n.param("width").as_double();
        for (std::size_t i = 0; i < m; ++i) o[i] = masks::cracks(in[0].vec3(i), scale, width);
    } else if (op == "smudges") {
        const double scale = n.param("scale").as_double();
        const double coverage = n.param("coverage").as_double();
        for (std::size_t i = 0; i < m; ++i) o[i] = masks::smudges(in[0].vec3(i), scale, coverage);
    } else if (op == "edge_wear") {
        const double intensity = n.param("intensity").as_double();
        const double nscale = n.param("noise_scale").as_double();
        for (std::size_t i = 0; i < m; ++i)
            o[i] = masks::edge_wear(in[0].vec3(i), in[1].scalar(i), intensity, nscale);
    } else if (op == "cast_int") {
        elementwise1([](double x) { return std::trunc(x); });
    } else if (op == "cast_float") {
        const InView a = in[0];
        if (a.arity == 3) {
            for (std::size_t i = 0; i < m; ++i) {
                const Vec3 v = a.vec3(i);
                o[i] = (v.x + v.y + v.z) / 3.0;
            }
        } else {
            for (std::size_t i = 0; i < m; ++i) o[i] = a.scalar(i);
        }
    } else if (op == "cast_vec3") {
        const InView a = in[0];
        if (a.arity == 1) {
            for (std::size_t i = 0; i < m; ++i) {
                const double x = a.scalar(i);
                o[i * 3] = x;
                o[i * 3 + 1] = x;
                o[i * 3 + 2] = x;
            }
        } else {
            for (std::size_t i = 0; i < m; ++i)
                for (int c = 0; c < 3; ++c)
                    o[i * 3 + static_cast<std::size_t>(c)] = a.at(i, c);
        }
    } else if (op == "cast_color") {
        for (std::size_t i = 0; i < m; ++i)
            for (int c = 0; c < 3; ++c) o[i * 3 + static_cast<std::size_t>(c)] = in[0].at(i, c);
    } else {
        raise(errc::unknown_op, "evaluator has no rule for op '" + op + "'");
    }

    cache_[static_cast<std::size_t>(n.id)] = std::move(out);
}

}  // namespace procgen
