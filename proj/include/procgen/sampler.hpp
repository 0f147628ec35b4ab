#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "procgen/graph.hpp"
#include "procgen/rng.hpp"

namespace procgen {

// One record in a sampler execution: a parameter draw, a control-flow
// choice, a deterministic-generator call, a nested sub-sampler, or an output
// declaration. Instance traces are flat lists of these; the distribution
// tracer merges them into a control tree.
struct TraceEvent {
    enum class Type { Draw, Choice, CallBegin, CallEnd, SubBegin, SubEnd, SubRef, Output };

    Type type = Type::Draw;
    std::string name;       // frame-unique local name or label
    std::string qualified;  // full dotted path (execute mode)
    ParamSpec spec;         // Draw
    double value = 0.0;     // Draw result
    std::vector<double> weights;  // Choice
    int taken = -1;               // Choice result
    std::string sub_id;           // SubBegin / SubRef
    NodeId produced_begin = -1;   // CallEnd: graph nodes created by the call
    NodeId produced_end = -1;
};

// Equality of everything except the outcome fields; two control paths agree
// structurally when their events match under this comparison.
inline bool structurally_equal(const TraceEvent& a, const TraceEvent& b) {
    return a.type == b.type && a.name == b.name && a.spec == b.spec && a.weights == b.weights &&
           a.sub_id == b.sub_id;
}

// The base sampler context. A sampler body receives one of these and must
// route all randomness through draw()/choice(), all graph building through
// call()/sub(), and outputs through set_output(). That restriction is what
// makes the same body runnable (run_sampler), replayable, and statically
// traceable.
class SamplerContext {
public:
    virtual ~SamplerContext() = default;

    double draw(const ParamSpec& spec) {
        const std::string local = unique_name(spec.name);
        return on_draw(spec, local, qualified(local));
    }

    double uniform(const std::string& name, double lo, double hi) {
        return draw(ParamSpec::make_uniform(name, lo, hi));
    }
    double normal(const std::string& name, double mu, double sigma) {
        return draw(ParamSpec::make_normal(name, mu, sigma));
    }
    int discrete(const std::string& name, std::vector<double> weights) {
        return static_cast<int>(draw(ParamSpec::make_discrete(name, std::move(weights))));
    }

    // Constant-weighted control-flow branch. The only legal way for a
    // sampler body to branch.
    int choice(const std::string& name, const std::vector<double>& weights) {
        if (weights.empty()) raise(errc::empty_weights, name + ": no weights");
        for (double w : weights)
            if (!(w > 0.0)) raise(errc::non_positive_weight, name + ": weights must be > 0");
        const std::string local = unique_name(name);
        const int taken = on_choice(local, qualified(local), weights);
        scope_.push_back(local + "=" + std::to_string(taken));
        return taken;
    }

    // Invokes a deterministic generator. The generator gets the builder and
    // cannot draw: randomness stays outside by construction.
    template <typename F>
    auto call(const std::string& label, F&& fn) -> std::invoke_result_t<F&, GraphBuilder&> {
        using R = std::invoke_result_t<F&, GraphBuilder&>;
        const std::string local = unique_name(label);
        on_call_begin(local);
        if (executing()) {
            if constexpr (std::is_void_v<R>) {
                fn(graph());
                on_call_end();
                return;
            } else {
                R r = fn(graph());
                on_call_end();
                return r;
            }
        }
        on_call_end();
        if constexpr (!std::is_void_v<R>) return R{};
    }

    // Invokes a nested sampler under an independent split of the stream.
    // `id` identifies the component for memoized distribution tracing.
    template <typename F>
    auto sub(const std::string& label, const std::string& id, F&& fn)
        -> std::invoke_result_t<F&, SamplerContext&> {
        using R = std::invoke_result_t<F&, SamplerContext&>;
        const std::string local = unique_name(label);
        if (executing()) {
            begin_sub_frame(local, id);
            if constexpr (std::is_void_v<R>) {
                fn(*this);
                end_sub_frame();
                return;
            } else {
                R r = fn(*this);
                end_sub_frame();
                return r;
            }
        }
        on_sub_ref(local, id, [&fn](SamplerContext& c) { (void)fn(c); });
        if constexpr (!std::is_void_v<R>) return R{};
    }

    void set_output(const std::string& name, const Value& v) { on_output(name, v); }

    virtual GraphBuilder& graph() = 0;
    virtual bool executing() const = 0;

protected:
    using ErasedBody = std::function<void(SamplerContext&)>;

    virtual double on_draw(const ParamSpec& spec, const std::string& local,
                           const std::string& qualified) = 0;
    virtual int on_choice(const std::string& local, const std::string& qualified,
                          const std::vector<double>& weights) = 0;
    virtual void on_call_begin(const std::string& local) = 0;
    virtual void on_call_end() = 0;
    virtual void begin_sub_frame(const std::string& local, const std::string& id) = 0;
    virtual void end_sub_frame() = 0;
    virtual void on_sub_ref(const std::string& local, const std::string& id,
                            ErasedBody body) = 0;
    virtual void on_output(const std::string& name, const Value& v) = 0;

    struct Frame {
        std::size_t scope_depth = 0;
        std::map<std::string, int> name_counts;
    };

    std::string unique_name(const std::string& base) {
        int& count = frames_.back().name_counts[base];
        ++count;
        return count == 1 ? base : base + "#" + std::to_string(count);
    }

    std::string qualified(const std::string& local) const {
        std::string q;
        for (const auto& s : scope_) {
            q += s;
            q += '.';
        }
        return q + local;
    }

    void push_frame(const std::string& scope_element) {
        scope_.push_back(scope_element);
        frames_.push_back(Frame{scope_.size(), {}});
    }
    void pop_frame() {
        scope_.resize(frames_.back().scope_depth - 1);
        frames_.pop_back();
    }

    std::vector<std::string> scope_;
    std::vector<Frame> frames_;
};

// A registered random sampler: an id plus a body. The body builds an asset
// graph through the context and declares the graph outputs.
struct SamplerDef {
    std::string id;
    std::function<void(SamplerContext&)> body;
};

struct RunResult {
    Graph graph;
    std::vector<TraceEvent> events;  // the instance parameter record
};

namespace samplerdetail {

// Execution context: draws really come from the stream, generators really
// run, and the graph really gets built. Doubles as the replay context when
// an override map is supplied.
class ExecuteContext final : public SamplerContext {
public:
    ExecuteContext(const std::string& sampler_id, RandomStream stream,
                   const std::map<std::string, double>* overrides = nullptr)
        : overrides_(overrides) {
        streams_.push_back(stream);
        push_frame(sampler_id);
    }

    GraphBuilder& graph() override { return builder_; }
    bool executing() const override { return true; }

    RunResult finish() {
        RunResult r;
        r.graph = builder_.build();
        r.events = std::move(events_);
        return r;
    }

protected:
    double on_draw(const ParamSpec& spec, const std::string& local,
                   const std::string& qualified) override {
        double value = spec.draw_from(streams_.back());
        if (overrides_) {
            auto it = overrides_->find(qualified);
            if (it != overrides_->end()) value = it->second;
        }
        TraceEvent e;
        e.type = TraceEvent::Type::Draw;
        e.name = local;
        e.qualified = qualified;
        e.spec = spec;
        e.value = value;
        events_.push_back(std::move(e));
        return value;
    }

    int on_choice(const std::string& local, const std::string& qualified,
                  const std::vector<double>& weights) override {
        int taken = procgen::choice(streams_.back(), weights);
        if (overrides_) {
            auto it = overrides_->find(qualified);
            if (it != overrides_->end()) taken = static_cast<int>(it->second);
        }
        TraceEvent e;
        e.type = TraceEvent::Type::Choice;
        e.name = local;
        e.qualified = qualified;
        e.weights = weights;
        e.taken = taken;
        events_.push_back(std::move(e));
        return taken;
    }

    void on_call_begin(const std::string& local) override {
        TraceEvent e;
        e.type = TraceEvent::Type::CallBegin;
        e.name = local;
        e.qualified = qualified(local);
        events_.push_back(std::move(e));
        call_starts_.push_back(static_cast<NodeId>(builder_.node_count()));
    }

    void on_call_end() override {
        TraceEvent e;
        e.type = TraceEvent::Type::CallEnd;
        e.produced_begin = call_starts_.back();
        e.produced_end = static_cast<NodeId>(builder_.node_count());
        call_starts_.pop_back();
        events_.push_back(std::move(e));
    }

    void begin_sub_frame(const std::string& local, const std::string& id) override {
        TraceEvent e;
        e.type = TraceEvent::Type::SubBegin;
        e.name = local;
        e.qualified = qualified(local);
        e.sub_id = id;
        events_.push_back(std::move(e));
        streams_.push_back(split(streams_.back(), local));
        push_frame(local);
    }

    void end_sub_frame() override {
        pop_frame();
        streams_.pop_back();
        TraceEvent e;
        e.type = TraceEvent::Type::SubEnd;
        events_.push_back(std::move(e));
    }

    void on_sub_ref(const std::string&, const std::string&, ErasedBody) override {}

    void on_output(const std::string& name, const Value& v) override {
        builder_.output(name, v);
        TraceEvent e;
        e.type = TraceEvent::Type::Output;
        e.name = name;
        events_.push_back(std::move(e));
    }

private:
    GraphBuilder builder_;
    std::vector<RandomStream> streams_;
    std::vector<NodeId> call_starts_;
    std::vector<TraceEvent> events_;
    const std::map<std::string, double>* overrides_;
};

}  // namespace samplerdetail

// Runs a sampler against a random stream: the normal generation entry
// point. Returns the built graph plus the ordered parameter record.
inline RunResult run_sampler(const SamplerDef& def, RandomStream stream) {
    samplerdetail::ExecuteContext ctx(def.id, stream);
    def.body(ctx);
    return ctx.finish();
}

inline RunResult run_sampler(const SamplerDef& def, std::uint64_t seed) {
    return run_sampler(def, RandomStream::root(seed));
}

}  // namespace procgen
