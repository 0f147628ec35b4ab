#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "procgen/graph_json.hpp"
#include "procgen/sampler.hpp"

namespace procgen {

// ---------------------------------------------------------------------------
// Instance-level tracing
// ---------------------------------------------------------------------------

// The exact control-flow path one seed took: every draw, choice and call, in
// order, plus the graph the run produced.
struct InstanceTrace {
    std::string sampler_id;
    std::uint64_t seed = 0;
    std::vector<TraceEvent> events;
    Graph graph;
};

// Tracing executes the sampler in a recording context. Graph building is
// cheap and happens; field evaluation never does (the interpreter counter
// stays untouched).
inline InstanceTrace trace_instance(const SamplerDef& def, std::uint64_t seed) {
    RunResult r = run_sampler(def, seed);
    InstanceTrace t;
    t.sampler_id = def.id;
    t.seed = seed;
    t.events = std::move(r.events);
    t.graph = std::move(r.graph);
    return t;
}

// ---------------------------------------------------------------------------
// Distribution-level tracing
// ---------------------------------------------------------------------------

// One item of a control tree. A Choice absorbs the remainder of its frame
// into per-branch subtrees; a SubRef points into the memoized component
// table of the owning DistributionGraph.
struct ControlNode {
    enum class Type { Draw, Choice, SubRef, Call, Output };

    Type type = Type::Draw;
    std::string name;             // frame-unique local name / label
    ParamSpec spec;               // Draw
    std::vector<double> weights;  // Choice
    std::vector<std::vector<ControlNode>> branches;  // Choice: one sequence per branch
    std::string sub_id;           // SubRef
};

using ControlSeq = std::vector<ControlNode>;

// Control-flow super-graph of a sampler: all paths of the top-level body
// plus one memoized tree per distinct sub-sampler id.
struct DistributionGraph {
    std::string sampler_id;
    ControlSeq root;
    std::map<std::string, ControlSeq> subs;
};

struct TraceOptions {
    std::size_t max_paths = 1'000'000;
};

namespace tracedetail {

struct Session {
    TraceOptions options;
    std::map<std::string, ControlSeq>* subs = nullptr;
    std::set<std::string> in_progress;
    std::size_t total_runs = 0;
};

// Enumeration context: draws return representative values, generator calls
// are skipped entirely, and choices follow a script. The first unscripted
// choice of a run takes branch 0 and reports itself, so the driver can queue
// the sibling branches.
class EnumerateContext final : public SamplerContext {
public:
    EnumerateContext(Session& session, const std::vector<int>& script)
        : session_(session), script_(script) {
        push_frame("");
    }

    GraphBuilder& graph() override {
        raise(errc::untraceable_control_flow,
              "graph access outside call() while tracing the distribution");
    }
    bool executing() const override { return false; }

    std::vector<TraceEvent> take_events() { return std::move(events_); }
    const std::vector<std::size_t>& fork_points() const { return fork_points_; }
    const std::vector<std::size_t>& fork_arity() const { return fork_arity_; }

protected:
    double on_draw(const ParamSpec& spec, const std::string& local,
                   const std::string&) override {
        TraceEvent e;
        e.type = TraceEvent::Type::Draw;
        e.name = local;
        e.spec = spec;
        e.value = spec.placeholder();
        events_.push_back(std::move(e));
        return spec.placeholder();
    }

    int on_choice(const std::string& local, const std::string&,
                  const std::vector<double>& weights) override {
        int taken = 0;
        if (choice_index_ < script_.size()) {
            taken = script_[choice_index_];
        } else {
            fork_points_.push_back(choice_index_);
            fork_arity_.push_back(weights.size());
        }
        ++choice_index_;
        TraceEvent e;
        e.type = TraceEvent::Type::Choice;
        e.name = local;
        e.weights = weights;
        e.taken = taken;
        events_.push_back(std::move(e));
        return taken;
    }

    void on_call_begin(const std::string& local) override {
        TraceEvent e;
        e.type = TraceEvent::Type::CallBegin;
        e.name = local;
        events_.push_back(std::move(e));
    }
    void on_call_end() override {
        TraceEvent e;
        e.type = TraceEvent::Type::CallEnd;
        events_.push_back(std::move(e));
    }

    void begin_sub_frame(const std::string&, const std::string&) override {}
    void end_sub_frame() override {}

    void on_sub_ref(const std::string& local, const std::string& id, ErasedBody body) override;

    void on_output(const std::string& name, const Value&) override {
        TraceEvent e;
        e.type = TraceEvent::Type::Output;
        e.name = name;
        events_.push_back(std::move(e));
    }

private:
    Session& session_;
    const std::vector<int>& script_;
    std::size_t choice_index_ = 0;
    std::vector<TraceEvent> events_;
    std::vector<std::size_t> fork_points_;
    std::vector<std::size_t> fork_arity_;
};

// Runs the body once per control path (choices scripted depth-first) and
// returns one event list per path.
inline std::vector<std::vector<TraceEvent>> enumerate_paths(
    Session& session, const std::function<void(SamplerContext&)>& body) {
    std::vector<std::vector<TraceEvent>> runs;
    std::vector<std::vector<int>> pending{{}};
    while (!pending.empty()) {
        std::vector<int> script = std::move(pending.back());
        pending.pop_back();
        if (++session.total_runs > session.options.max_paths)
            raise(errc::path_explosion,
                  "more than " + std::to_string(session.options.max_paths) + " control paths");
        EnumerateContext ctx(session, script);
        body(ctx);
        // Queue the sibling branches of every choice this run discovered.
        const auto& points = ctx.fork_points();
        const auto& arity = ctx.fork_arity();
        for (std::size_t i = 0; i < points.size(); ++i) {
            std::vector<int> sibling(script);
            sibling.resize(points[i], 0);
            for (std::size_t b = 1; b < arity[i]; ++b) {
                sibling.push_back(static_cast<int>(b));
                pending.push_back(sibling);
                sibling.pop_back();
            }
        }
        runs.push_back(ctx.take_events());
    }
    return runs;
}

struct RunView {
    const std::vector<TraceEvent>* events;
    std::size_t pos = 0;
};

// Merges per-path event lists into a control tree. Runs that share a choice
// prefix must agree on everything before the next choice; disagreement means
// the body branched outside choice().
inline ControlSeq merge_runs(std::vector<RunView> runs) {
    ControlSeq seq;
    if (runs.empty()) return seq;
    for (;;) {
        const bool done0 = runs[0].pos >= runs[0].events->size();
        for (const RunView& r : runs)
            if ((r.pos >= r.events->size()) != done0)
                raise(errc::untraceable_control_flow,
                      "control paths diverge outside choice()");
        if (done0) return seq;

        const TraceEvent& head = (*runs[0].events)[runs[0].pos];
        for (const RunView& r : runs)
            if (!structurally_equal((*r.events)[r.pos], head))
                raise(errc::untraceable_control_flow,
                      "control paths diverge outside choice() near '" + head.name + "'");

        if (head.type == TraceEvent::Type::Choice) {
            ControlNode node;
            node.type = ControlNode::Type::Choice;
            node.name = head.name;
            node.weights = head.weights;
            node.branches.resize(head.weights.size());
            std::vector<std::vector<RunView>> groups(head.weights.size());
            for (RunView r : runs) {
                const int taken = (*r.events)[r.pos].taken;
                r.pos += 1;
                groups[static_cast<std::size_t>(taken)].push_back(r);
            }
            for (std::size_t b = 0; b < groups.size(); ++b) {
                if (groups[b].empty())
                    raise(errc::untraceable_control_flow,
                          "branch " + std::to_string(b) + " of '" + head.name + "' never explored");
                node.branches[b] = merge_runs(std::move(groups[b]));
            }
            seq.push_back(std::move(node));
            return seq;  // the choice absorbed the rest of this frame
        }

        ControlNode node;
        switch (head.type) {
            case TraceEvent::Type::Draw:
                node.type = ControlNode::Type::Draw;
                node.name = head.name;
                node.spec = head.spec;
                seq.push_back(std::move(node));
                break;
            case TraceEvent::Type::SubRef:
                node.type = ControlNode::Type::SubRef;
                node.name = head.name;
                node.sub_id = head.sub_id;
                seq.push_back(std::move(node));
                break;
            case TraceEvent::Type::CallBegin:
                node.type = ControlNode::Type::Call;
                node.name = head.name;
                seq.push_back(std::move(node));
                break;
            case TraceEvent::Type::Output:
                node.type = ControlNode::Type::Output;
                node.name = head.name;
                seq.push_back(std::move(node));
                break;
            default: break;  // CallEnd carries no structure
        }
        for (RunView& r : runs) r.pos += 1;
    }
}

inline ControlSeq trace_component(Session& session,
                                  const std::function<void(SamplerContext&)>& body) {
    auto runs = enumerate_paths(session, body);
    std::vector<RunView> views;
    views.reserve(runs.size());
    for (const auto& r : runs) views.push_back(RunView{&r, 0});
    return merge_runs(std::move(views));
}

inline void EnumerateContext::on_sub_ref(const std::string& local, const std::string& id,
                                         ErasedBody body) {
    if (!session_.subs->count(id)) {
        if (session_.in_progress.count(id))
            raise(errc::path_explosion, "recursive sampler '" + id + "'");
        session_.in_progress.insert(id);
        (*session_.subs)[id] = trace_component(session_, body);
        session_.in_progress.erase(id);
    }
    TraceEvent e;
    e.type = TraceEvent::Type::SubRef;
    e.name = local;
    e.sub_id = id;
    events_.push_back(std::move(e));
}

}  // namespace tracedetail

// Explores every control path of the sampler without executing generator
// internals. Shared sub-samplers are traced once and referenced.
inline DistributionGraph trace_distribution(const SamplerDef& def, TraceOptions options = {}) {
    DistributionGraph g;
    g.sampler_id = def.id;
    tracedetail::Session session;
    session.options = options;
    session.subs = &g.subs;
    g.root = tracedetail::trace_component(session, def.body);
    return g;
}

// ---------------------------------------------------------------------------
// Path counting
// ---------------------------------------------------------------------------

namespace tracedetail {

inline double seq_path_count(const DistributionGraph& g, const ControlSeq& seq);

inline double node_path_count(const DistributionGraph& g, const ControlNode& n) {
    switch (n.type) {
        case ControlNode::Type::Choice: {
            double total = 0.0;
            for (const auto& b : n.branches) total += seq_path_count(g, b);
            return total;
        }
        case ControlNode::Type::SubRef: return seq_path_count(g, g.subs.at(n.sub_id));
        default: return 1.0;
    }
}

inline double seq_path_count(const DistributionGraph& g, const ControlSeq& seq) {
    double product = 1.0;
    for (const auto& n : seq) product *= node_path_count(g, n);
    return product;
}

}  // namespace tracedetail

inline double path_count(const DistributionGraph& g) {
    return tracedetail::seq_path_count(g, g.root);
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

// Re-runs the traced sampler with the original seed, substituting the given
// qualified parameter values (continuous draws or choice branch indices).
// Untouched parameters reproduce their recorded values because the stream is
// identical.
inline Graph replay(const SamplerDef& def, const InstanceTrace& trace,
                    const std::map<std::string, double>& overrides) {
    if (def.id != trace.sampler_id)
        raise(errc::unknown_param, "trace belongs to sampler '" + trace.sampler_id + "'");
    for (const auto& [name, value] : overrides) {
        const TraceEvent* found = nullptr;
        for (const auto& e : trace.events) {
            if ((e.type == TraceEvent::Type::Draw || e.type == TraceEvent::Type::Choice) &&
                e.qualified == name) {
                found = &e;
                break;
            }
        }
        if (!found) raise(errc::unknown_param, "no parameter named '" + name + "' in trace");
        if (found->type == TraceEvent::Type::Draw) {
            if (!found->spec.value_in_range(value))
                raise(errc::out_of_range, name + " = " + std::to_string(value) +
                                              " outside the declared range");
        } else {
            if (value != std::floor(value) || value < 0.0 ||
                value >= static_cast<double>(found->weights.size()))
                raise(errc::out_of_range, name + ": invalid branch index");
        }
    }
    samplerdetail::ExecuteContext ctx(def.id, RandomStream::root(trace.seed), &overrides);
    def.body(ctx);
    return ctx.finish().graph;
}

// ---------------------------------------------------------------------------
// Parameter manifests
// ---------------------------------------------------------------------------

struct ManifestEntry {
    std::string qualified;
    ParamSpec spec;
    bool is_choice = false;
    std::vector<double> weights;  // for choices
    bool has_value = false;       // instance manifests carry the drawn value
    double value = 0.0;
};

inline std::vector<ManifestEntry> list_params(const InstanceTrace& trace) {
    std::vector<ManifestEntry> entries;
    for (const auto& e : trace.events) {
        if (e.type == TraceEvent::Type::Draw) {
            ManifestEntry m;
            m.qualified = e.qualified;
            m.spec = e.spec;
            m.has_value = true;
            m.value = e.value;
            entries.push_back(std::move(m));
        } else if (e.type == TraceEvent::Type::Choice) {
            ManifestEntry m;
            m.qualified = e.qualified;
            m.is_choice = true;
            m.weights = e.weights;
            m.has_value = true;
            m.value = e.taken;
            entries.push_back(std::move(m));
        }
    }
    return entries;
}

namespace tracedetail {

inline void collect_params(const DistributionGraph& g, const ControlSeq& seq, std::string prefix,
                           std::vector<ManifestEntry>& out) {
    for (const auto& n : seq) {
        switch (n.type) {
            case ControlNode::Type::Draw: {
                ManifestEntry m;
                m.qualified = prefix + n.name;
                m.spec = n.spec;
                out.push_back(std::move(m));
                break;
            }
            case ControlNode::Type::Choice: {
                ManifestEntry m;
                m.qualified = prefix + n.name;
                m.is_choice = true;
                m.weights = n.weights;
                out.push_back(std::move(m));
                for (std::size_t b = 0; b < n.branches.size(); ++b)
                    collect_params(g, n.branches[b],
                                   prefix + n.name + "=" + std::to_string(b) + ".", out);
                break;
            }
            case ControlNode::Type::SubRef:
                collect_params(g, g.subs.at(n.sub_id), prefix + n.name + ".", out);
                break;
            default: break;
        }
    }
}

}  // namespace tracedetail

// Flattens the distribution graph into (path-qualified name, spec) entries,
// expanding memoized components at each reference site. Stable DFS order.
inline std::vector<ManifestEntry> list_params(const DistributionGraph& g) {
    std::vector<ManifestEntry> out;
    tracedetail::collect_params(g, g.root, g.sampler_id + ".", out);
    return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace tracedetail {

inline nlohmann::json spec_to_json(const ParamSpec& s) {
    nlohmann::json j;
    j["name"] = s.name;
    switch (s.kind) {
        case ParamSpec::Kind::Uniform:
            j["dist"] = "uniform";
            j["lo"] = s.lo;
            j["hi"] = s.hi;
            break;
        case ParamSpec::Kind::Normal:
            j["dist"] = "normal";
            j["mu"] = s.mu;
            j["sigma"] = s.sigma;
            break;
        case ParamSpec::Kind::Discrete:
            j["dist"] = "discrete";
            j["weights"] = s.weights;
            break;
    }
    return j;
}

inline const char* event_type_name(TraceEvent::Type t) {
    switch (t) {
        case TraceEvent::Type::Draw: return "draw";
        case TraceEvent::Type::Choice: return "choice";
        case TraceEvent::Type::CallBegin: return "call_begin";
        case TraceEvent::Type::CallEnd: return "call_end";
        case TraceEvent::Type::SubBegin: return "sub_begin";
        case TraceEvent::Type::SubEnd: return "sub_end";
        case TraceEvent::Type::SubRef: return "sub_ref";
        case TraceEvent::Type::Output: return "output";
    }
    return "?";
}

inline nlohmann::json control_seq_to_json(const ControlSeq& seq) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& n : seq) {
        nlohmann::json j;
        j["ctrl"] = true;
        switch (n.type) {
            case ControlNode::Type::Draw:
                j["op"] = "param";
                j["name"] = n.name;
                j["spec"] = spec_to_json(n.spec);
                break;
            case ControlNode::Type::Choice: {
                j["op"] = "choice";
                j["name"] = n.name;
                j["weights"] = n.weights;
                double total = 0.0;
                for (double w : n.weights) total += w;
                nlohmann::json probs = nlohmann::json::array();
                for (double w : n.weights) probs.push_back(w / total);
                j["probabilities"] = probs;
                nlohmann::json branches = nlohmann::json::array();
                for (const auto& b : n.branches) branches.push_back(control_seq_to_json(b));
                j["branches"] = branches;
                break;
            }
            case ControlNode::Type::SubRef:
                j["op"] = "sub";
                j["name"] = n.name;
                j["sampler"] = n.sub_id;
                break;
            case ControlNode::Type::Call:
                j["op"] = "call";
                j["name"] = n.name;
                break;
            case ControlNode::Type::Output:
                j["op"] = "output";
                j["name"] = n.name;
                break;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace tracedetail

inline nlohmann::json trace_to_json(const InstanceTrace& t) {
    nlohmann::json j;
    j["sampler"] = t.sampler_id;
    j["seed"] = t.seed;
    j["events"] = nlohmann::json::array();
    for (const auto& e : t.events) {
        nlohmann::json je;
        je["type"] = tracedetail::event_type_name(e.type);
        switch (e.type) {
            case TraceEvent::Type::Draw:
                je["name"] = e.qualified;
                je["spec"] = tracedetail::spec_to_json(e.spec);
                je["value"] = e.value;
                break;
            case TraceEvent::Type::Choice:
                je["name"] = e.qualified;
                je["weights"] = e.weights;
                je["taken"] = e.taken;
                break;
            case TraceEvent::Type::CallBegin:
            case TraceEvent::Type::SubBegin:
                je["name"] = e.qualified;
                if (!e.sub_id.empty()) je["sampler"] = e.sub_id;
                break;
            case TraceEvent::Type::CallEnd:
                je["nodes_begin"] = e.produced_begin;
                je["nodes_end"] = e.produced_end;
                break;
            case TraceEvent::Type::Output: je["name"] = e.name; break;
            default: break;
        }
        j["events"].push_back(std::move(je));
    }
    j["graph"] = graph_to_json(t.graph);
    return j;
}

inline nlohmann::json distribution_to_json(const DistributionGraph& g) {
    nlohmann::json j;
    j["version"] = 1;
    j["sampler"] = g.sampler_id;
    j["nodes"] = tracedetail::control_seq_to_json(g.root);
    j["subs"] = nlohmann::json::object();
    for (const auto& [id, seq] : g.subs)
        j["subs"][id] = tracedetail::control_seq_to_json(seq);
    j["path_count"] = path_count(g);
    return j;
}

}  // namespace procgen
