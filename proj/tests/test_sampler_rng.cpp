#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "procgen/builder_ops.hpp"
#include "procgen/graph_json.hpp"
#include "procgen/sampler.hpp"

using namespace procgen;

TEST(RandomStream, DegenerateUniform) {
    RandomStream s = RandomStream::root(1);
    EXPECT_EQ(uniform(s, 5.0, 5.0), 5.0);
}

TEST(RandomStream, UniformMean) {
    RandomStream s = RandomStream::root(2);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += uniform(s, 0.0, 1.0);
    EXPECT_NEAR(sum / n, 0.5, 0.002);
}

TEST(RandomStream, InvalidRanges) {
    RandomStream s = RandomStream::root(3);
    EXPECT_THROW(uniform(s, 2.0, 1.0), Error);
    EXPECT_THROW(normal(s, 0.0, -1.0), Error);
    EXPECT_THROW(randint(s, 0), Error);
}

TEST(RandomStream, DrawCountsAreFixed) {
    // uniform consumes 1 raw draw, normal 2, choice 1. The tracer depends on
    // choice consuming exactly one.
    RandomStream s = RandomStream::root(4);
    uniform(s, 0.0, 1.0);
    EXPECT_EQ(s.counter, 1u);
    normal(s, 0.0, 1.0);
    EXPECT_EQ(s.counter, 3u);
    choice(s, {1.0, 2.0});
    EXPECT_EQ(s.counter, 4u);
    randint(s, 7);
    EXPECT_EQ(s.counter, 5u);
}

TEST(Choice, SingleWeightAlwaysZero) {
    RandomStream s = RandomStream::root(5);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(choice(s, {1.0}), 0);
}

TEST(Choice, FairAndWeightedFrequencies) {
    RandomStream s = RandomStream::root(6);
    int count = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) count += choice(s, {1.0, 1.0}) == 0 ? 1 : 0;
    EXPECT_NEAR(static_cast<double>(count) / n, 0.5, 0.005);

    count = 0;
    for (int i = 0; i < n; ++i) count += choice(s, {3.0, 1.0}) == 0 ? 1 : 0;
    EXPECT_NEAR(static_cast<double>(count) / n, 0.75, 0.01);
}

TEST(Choice, Errors) {
    RandomStream s = RandomStream::root(7);
    try {
        choice(s, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::empty_weights);
    }
    try {
        choice(s, {1.0, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::non_positive_weight);
    }
}

TEST(Split, PureAndCounterIndependent) {
    RandomStream parent = RandomStream::root(8);
    RandomStream a1 = split(parent, "x");
    uniform(parent, 0.0, 1.0);  // consume parent draws in between
    uniform(parent, 0.0, 1.0);
    RandomStream a2 = split(parent, "x");
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a1.next_raw(), a2.next_raw());
}

TEST(Split, SiblingIsolation) {
    RandomStream parent = RandomStream::root(9);
    RandomStream a = split(parent, "a");
    RandomStream b1 = split(parent, "b");
    // Consuming draws on sibling "a" must not change "b".
    for (int i = 0; i < 50; ++i) a.next_raw();
    RandomStream b2 = split(parent, "b");
    for (int i = 0; i < 100; ++i) EXPECT_EQ(b1.next_raw(), b2.next_raw());
}

TEST(Split, DistinctLabelsDistinctSequences) {
    RandomStream parent = RandomStream::root(10);
    RandomStream x = split(parent, "x");
    RandomStream y = split(parent, "y");
    bool any_differ = false;
    for (int i = 0; i < 100; ++i)
        if (x.next_raw() != y.next_raw()) any_differ = true;
    EXPECT_TRUE(any_differ);
}

TEST(Split, PairwiseCorrelationLow) {
    RandomStream parent = RandomStream::root(11);
    RandomStream a = split(parent, "a");
    RandomStream b = split(parent, "b");
    const int n = 100000;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a.next_unit();
        const double y = b.next_unit();
        sa += x;
        sb += y;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    const double corr = cov / std::sqrt((saa / n - (sa / n) * (sa / n)) *
                                        (sbb / n - (sb / n) * (sb / n)));
    EXPECT_LT(std::fabs(corr), 0.01);
}

TEST(ParamSpec, NormalClippedToFourSigma) {
    ParamSpec spec = ParamSpec::make_normal("x", 1.0, 0.5);
    RandomStream s = RandomStream::root(12);
    for (int i = 0; i < 100000; ++i) {
        const double v = spec.draw_from(s);
        EXPECT_GE(v, 1.0 - 2.0);
        EXPECT_LE(v, 1.0 + 2.0);
    }
    EXPECT_EQ(spec.range_lo(), -1.0);
    EXPECT_EQ(spec.range_hi(), 3.0);
}

namespace {

const SamplerDef kDeterministic{"det", [](SamplerContext& ctx) {
    Value v = ctx.call("build", [](GraphBuilder& g) { return ops::const_float(g, 2.0); });
    ctx.set_output("value", v);
}};

const SamplerDef kTwoBranch{"two_branch", [](SamplerContext& ctx) {
    const int k = ctx.choice("k", {1, 1});
    Value v = ctx.call("build", [&](GraphBuilder& g) {
        return ops::const_float(g, static_cast<double>(k));
    });
    ctx.set_output("value", v);
}};

}  // namespace

TEST(RunSampler, DeterministicSamplerIgnoresSeed) {
    const std::string a = serialize_graph(run_sampler(kDeterministic, 1).graph);
    for (std::uint64_t seed : {2ull, 77ull, 123456ull})
        EXPECT_EQ(serialize_graph(run_sampler(kDeterministic, seed).graph), a);
}

TEST(RunSampler, SameSeedByteIdentical) {
    for (std::uint64_t seed : {0ull, 5ull, 99ull})
        EXPECT_EQ(serialize_graph(run_sampler(kTwoBranch, seed).graph),
                  serialize_graph(run_sampler(kTwoBranch, seed).graph));
}

TEST(RunSampler, BothBranchesObserved) {
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 10000; ++seed)
        seen.insert(serialize_graph(run_sampler(kTwoBranch, seed).graph));
    EXPECT_EQ(seen.size(), 2u);
}

TEST(RunSampler, OrderIndependentSiblingSubs) {
    // Drawing material A then B under sibling splits equals B then A: each
    // child's draw values depend only on its own split label.
    auto sub_body = [](SamplerContext& ctx) { return ctx.uniform("x", 0.0, 1.0); };

    double a_first = 0, b_first = 0, a_second = 0, b_second = 0;
    const SamplerDef ab{"ab", [&](SamplerContext& ctx) {
        a_first = ctx.sub("A", "leaf", sub_body);
        b_first = ctx.sub("B", "leaf", sub_body);
        Value v = ctx.call("emit", [](GraphBuilder& g) { return ops::const_float(g, 0.0); });
        ctx.set_output("value", v);
    }};
    const SamplerDef ba{"ab", [&](SamplerContext& ctx) {  // same id: same stream namespace
        b_second = ctx.sub("B", "leaf", sub_body);
        a_second = ctx.sub("A", "leaf", sub_body);
        Value v = ctx.call("emit", [](GraphBuilder& g) { return ops::const_float(g, 0.0); });
        ctx.set_output("value", v);
    }};

    run_sampler(ab, 42);
    run_sampler(ba, 42);
    EXPECT_EQ(a_first, a_second);
    EXPECT_EQ(b_first, b_second);
}

TEST(RunSampler, InstanceRecordCarriesDrawsAndChoices) {
    const SamplerDef def{"rec", [](SamplerContext& ctx) {
        ctx.uniform("a", 0.0, 2.0);
        ctx.choice("k", {1, 1, 1});
        ctx.normal("b", 0.0, 1.0);
        Value v = ctx.call("emit", [](GraphBuilder& g) { return ops::const_float(g, 0.0); });
        ctx.set_output("value", v);
    }};
    RunResult r = run_sampler(def, 3);
    int draws = 0, choices = 0;
    for (const TraceEvent& e : r.events) {
        if (e.type == TraceEvent::Type::Draw) ++draws;
        if (e.type == TraceEvent::Type::Choice) ++choices;
    }
    EXPECT_EQ(draws, 2);
    EXPECT_EQ(choices, 1);
}
