#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "procgen/analytics.hpp"
#include "procgen/builder_ops.hpp"
#include "procgen/materials/samplers.hpp"
#include "procgen/noise.hpp"

using namespace procgen;

namespace {

Value emit_const(SamplerContext& ctx) {
    return ctx.call("emit", [](GraphBuilder& g) { return ops::const_float(g, 0.0); });
}

// Brute-force path enumeration oracle, fully independent of the DP: walks
// every control path, accumulating probability, draw counts and per-path
// entropy terms.
struct PathInfo {
    double prob = 1.0;
    double cont = 0.0;
    double disc = 0.0;
    double disc_entropy = 0.0;  // sum of H(weights) of non-branching discrete draws
};

double weights_entropy(const std::vector<double>& w) {
    double total = 0.0;
    for (double x : w) total += x;
    double h = 0.0;
    for (double x : w) h -= (x / total) * std::log2(x / total);
    return h;
}

void enumerate_paths(const DistributionGraph& g, const ControlSeq& seq, PathInfo info,
                     std::size_t item, std::vector<PathInfo>& out) {
    for (std::size_t i = item; i < seq.size(); ++i) {
        const ControlNode& n = seq[i];
        if (n.type == ControlNode::Type::Draw) {
            if (n.spec.continuous()) info.cont += 1.0;
            else {
                info.disc += 1.0;
                info.disc_entropy += weights_entropy(n.spec.weights);
            }
        } else if (n.type == ControlNode::Type::Choice) {
            double total = 0.0;
            for (double w : n.weights) total += w;
            for (std::size_t b = 0; b < n.branches.size(); ++b) {
                PathInfo branch_info = info;
                branch_info.prob *= n.weights[b] / total;
                branch_info.disc += 1.0;
                enumerate_paths(g, n.branches[b], branch_info, 0, out);
            }
            return;  // choice absorbs the remainder of the frame
        } else if (n.type == ControlNode::Type::SubRef) {
            // Expand the component inline: enumerate its paths, then resume.
            std::vector<PathInfo> sub_paths;
            enumerate_paths(g, g.subs.at(n.sub_id), PathInfo{}, 0, sub_paths);
            for (const PathInfo& sp : sub_paths) {
                PathInfo merged = info;
                merged.prob *= sp.prob;
                merged.cont += sp.cont;
                merged.disc += sp.disc;
                merged.disc_entropy += sp.disc_entropy;
                enumerate_paths(g, seq, merged, i + 1, out);
            }
            return;
        }
    }
    out.push_back(info);
}

struct Oracle {
    double cont_mean = 0.0;
    double disc_mean = 0.0;
    double entropy = 0.0;
    std::size_t paths = 0;
};

Oracle brute_force(const DistributionGraph& g) {
    std::vector<PathInfo> paths;
    enumerate_paths(g, g.root, PathInfo{}, 0, paths);
    Oracle o;
    o.paths = paths.size();
    for (const PathInfo& p : paths) {
        o.cont_mean += p.prob * p.cont;
        o.disc_mean += p.prob * p.disc;
        o.entropy += p.prob * (-std::log2(p.prob) + 3.0 * p.cont + p.disc_entropy);
    }
    return o;
}

}  // namespace

TEST(CountParams, HandExpectation) {
    // One fair 2-way choice; branch A draws 2 uniforms, branch B draws 4.
    const SamplerDef def{"hand", [](SamplerContext& ctx) {
        const int k = ctx.choice("k", {1, 1});
        const int draws = k == 0 ? 2 : 4;
        for (int i = 0; i < draws; ++i) ctx.uniform("p" + std::to_string(i), 0.0, 1.0);
        ctx.set_output("value", emit_const(ctx));
    }};
    auto [cont, disc] = count_params(trace_distribution(def));
    EXPECT_DOUBLE_EQ(cont, 3.0);
    EXPECT_DOUBLE_EQ(disc, 1.0);
}

TEST(CountParams, DeterministicSamplerIsZero) {
    const SamplerDef def{"det", [](SamplerContext& ctx) {
        ctx.set_output("value", emit_const(ctx));
    }};
    auto [cont, disc] = count_params(trace_distribution(def));
    EXPECT_EQ(cont, 0.0);
    EXPECT_EQ(disc, 0.0);
}

TEST(Cyclomatic, HandCases) {
    const SamplerDef five_way{"five", [](SamplerContext& ctx) {
        ctx.choice("k", {1, 1, 1, 1, 1});
        ctx.set_output("value", emit_const(ctx));
    }};
    EXPECT_EQ(cyclomatic(trace_distribution(five_way)), 5);

    const SamplerDef sequential{"seq", [](SamplerContext& ctx) {
        ctx.choice("a", {1, 1});
        ctx.choice("b", {1, 1, 1});
        ctx.set_output("value", emit_const(ctx));
    }};
    EXPECT_EQ(cyclomatic(trace_distribution(sequential)), 4);  // k1 + k2 - 1

    const SamplerDef straight{"straight", [](SamplerContext& ctx) {
        ctx.uniform("x", 0.0, 1.0);
        ctx.set_output("value", emit_const(ctx));
    }};
    EXPECT_EQ(cyclomatic(trace_distribution(straight)), 1);
}

TEST(Entropy, HandCases) {
    // Fair binary choice; a uniform drawn only on branch 0:
    // H = 1 + 0.5 * 3 = 2.5 bits.
    const SamplerDef conditional{"cond", [](SamplerContext& ctx) {
        if (ctx.choice("k", {1, 1}) == 0) ctx.uniform("x", 0.0, 1.0);
        ctx.set_output("value", emit_const(ctx));
    }};
    EXPECT_NEAR(entropy(trace_distribution(conditional)), 2.5, 1e-12);

    // One uniform, no choices: exactly one 3-bit symbol.
    const SamplerDef just_uniform{"uni", [](SamplerContext& ctx) {
        ctx.uniform("x", 0.0, 1.0);
        ctx.set_output("value", emit_const(ctx));
    }};
    EXPECT_NEAR(entropy(trace_distribution(just_uniform)), 3.0, 1e-12);
}

TEST(Entropy, ToyJointDistributionOracle) {
    // Fair binary choice plus one always-drawn uniform: 2 * 8 = 16
    // equiprobable discretized outcomes -> 4 bits. Computed here as a
    // literal joint distribution.
    const SamplerDef toy{"toy", [](SamplerContext& ctx) {
        ctx.choice("k", {1, 1});
        ctx.uniform("x", 0.0, 1.0);
        ctx.set_output("value", emit_const(ctx));
    }};
    const double dp = entropy(trace_distribution(toy));

    double joint = 0.0;
    for (int branch = 0; branch < 2; ++branch)
        for (int bin = 0; bin < 8; ++bin) {
            const double p = 0.5 * (1.0 / 8.0);
            joint -= p * std::log2(p);
        }
    EXPECT_NEAR(dp, 4.0, 1e-12);
    EXPECT_NEAR(dp, joint, 1e-9);
}

TEST(Entropy, UnboundedParamRejected) {
    const SamplerDef bad{"bad", [](SamplerContext& ctx) {
        ctx.draw(ParamSpec::make_uniform("x", 0.0,
                                         std::numeric_limits<double>::infinity()));
        ctx.set_output("value", emit_const(ctx));
    }};
    EXPECT_THROW(entropy(trace_distribution(bad)), Error);
}

TEST(Analytics, DpEqualsBruteForceOnToys) {
    std::vector<SamplerDef> defs;
    defs.push_back({"t1", [](SamplerContext& ctx) {
        ctx.uniform("a", 0.0, 1.0);
        if (ctx.choice("k", {2, 3}) == 1) {
            ctx.uniform("b", 0.0, 2.0);
            ctx.choice("m", {1, 1, 1, 1});
        }
        ctx.discrete("d", {1, 2, 3});
        ctx.set_output("value", emit_const(ctx));
    }});
    defs.push_back({"t2", [](SamplerContext& ctx) {
        for (int i = 0; i < 3; ++i) {
            ctx.choice("c" + std::to_string(i), {1, 2});
            ctx.uniform("u" + std::to_string(i), 0.0, 1.0);
        }
        ctx.set_output("value", emit_const(ctx));
    }});
    defs.push_back({"t3", [](SamplerContext& ctx) {
        auto leaf = [](SamplerContext& c) {
            c.uniform("x", 0.0, 1.0);
            c.choice("k", {1, 1});
            return 0;
        };
        ctx.sub("first", "leaf", leaf);
        ctx.sub("second", "leaf", leaf);
        if (ctx.choice("top", {1, 1, 1}) == 2) ctx.sub("third", "leaf", leaf);
        ctx.set_output("value", emit_const(ctx));
    }});

    for (const SamplerDef& def : defs) {
        const DistributionGraph d = trace_distribution(def);
        const Oracle oracle = brute_force(d);
        ASSERT_LE(oracle.paths, 1000u);
        auto [cont, disc] = count_params(d);
        EXPECT_NEAR(cont, oracle.cont_mean, 1e-9) << def.id;
        EXPECT_NEAR(disc, oracle.disc_mean, 1e-9) << def.id;
        EXPECT_NEAR(entropy(d), oracle.entropy, 1e-9) << def.id;
        EXPECT_EQ(path_count(d), static_cast<double>(oracle.paths)) << def.id;
    }
}

TEST(Analytics, DpEqualsBruteForceOnLibrarySamplers) {
    for (const SamplerDef& def : materials::sampler_registry()) {
        const DistributionGraph d = trace_distribution(def);
        if (path_count(d) > 1000.0) continue;
        const Oracle oracle = brute_force(d);
        auto [cont, disc] = count_params(d);
        EXPECT_NEAR(cont, oracle.cont_mean, 1e-9) << def.id;
        EXPECT_NEAR(disc, oracle.disc_mean, 1e-9) << def.id;
        EXPECT_NEAR(entropy(d), oracle.entropy, 1e-9) << def.id;
    }
}

TEST(Analytics, MeansMatchMonteCarlo) {
    // Empirical draw counts over seeds agree with the DP expectation to 2%.
    const SamplerDef& def = materials::find_sampler("composed");
    auto [cont, disc] = count_params(trace_distribution(def));
    double mc_cont = 0.0, mc_disc = 0.0;
    const int n = 4000;
    for (int seed = 0; seed < n; ++seed) {
        const RunResult r = run_sampler(def, static_cast<std::uint64_t>(seed));
        for (const TraceEvent& e : r.events) {
            if (e.type == TraceEvent::Type::Draw) {
                if (e.spec.continuous()) mc_cont += 1.0;
                else mc_disc += 1.0;
            } else if (e.type == TraceEvent::Type::Choice) {
                mc_disc += 1.0;
            }
        }
    }
    EXPECT_NEAR(mc_cont / n, cont, 0.02 * cont);
    EXPECT_NEAR(mc_disc / n, disc, 0.02 * disc);
}

TEST(Analytics, CompositionMonotonicity) {
    // Wrapping a sampler in a fair 2-way choice between two distinct
    // components strictly increases entropy and cyclomatic complexity.
    for (const char* name : {"wood", "marble", "concrete"}) {
        const SamplerDef& base = materials::find_sampler(name);
        const std::string wide_id = std::string(name) + "_wide";
        const SamplerDef& wide = materials::find_sampler(wide_id);
        SamplerDef wrapped{"wrapped", [&base, &wide](SamplerContext& ctx) {
            if (ctx.choice("pick", {1, 1}) == 0)
                ctx.sub("left", base.id, [&](SamplerContext& c) {
                    base.body(c);
                    return 0;
                });
            else
                ctx.sub("right", wide.id, [&](SamplerContext& c) {
                    wide.body(c);
                    return 0;
                });
            ctx.set_output("value", emit_const(ctx));
        }};
        const DistributionGraph base_d = trace_distribution(base);
        const DistributionGraph wrapped_d = trace_distribution(wrapped);
        EXPECT_GT(entropy(wrapped_d), entropy(base_d)) << name;
        EXPECT_GT(cyclomatic(wrapped_d), cyclomatic(base_d)) << name;
    }
}

TEST(Analytics, EntropyAtLeastDiscreteAlone) {
    for (const char* name : {"base", "composed"}) {
        const DistributionGraph d = trace_distribution(materials::find_sampler(name));
        const Oracle oracle = brute_force(d);
        double path_entropy = 0.0;
        std::vector<PathInfo> paths;
        enumerate_paths(d, d.root, PathInfo{}, 0, paths);
        for (const PathInfo& p : paths) path_entropy -= p.prob * std::log2(p.prob);
        EXPECT_GE(entropy(d) + 1e-12, path_entropy);
        (void)oracle;
    }
}

// ---------------------------------------------------------------------------
// Normal variation
// ---------------------------------------------------------------------------

namespace {

Image constant_normals(int w, int h, const Vec3& n) {
    Image img(w, h, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = n.x;
            img.at(x, y, 1) = n.y;
            img.at(x, y, 2) = n.z;
        }
    return img;
}

// Naive reference: straight double loop over the window, no shared code
// with the implementation.
double reference_v(const Image& img, int x, int y, int window) {
    const int r = window / 2;
    const Vec3 ni = pixel3(img, x, y);
    if (ni.length() == 0.0) return 0.0;
    double v = 0.0;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            const int xx = x + dx, yy = y + dy;
            if (xx < 0 || yy < 0 || xx >= img.width || yy >= img.height) continue;
            const Vec3 nj = pixel3(img, xx, yy);
            if (nj.length() == 0.0) continue;
            v += std::acos(std::min(1.0, std::max(-1.0, dot(ni, nj))));
        }
    return v;
}

}  // namespace

TEST(NormalVariation, ConstantMapIsZero) {
    const Image img = constant_normals(32, 32, Vec3{0, 0, 1});
    const NormalVariationResult r = normal_variation(img, 15);
    EXPECT_EQ(r.mean, 0.0);
    for (double v : r.variation.data) EXPECT_EQ(v, 0.0);
}

TEST(NormalVariation, TwoRegionOracle) {
    // Left half points +z, right half points +x (90 degrees apart).
    Image img(32, 32, 3);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            const Vec3 n = x < 16 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
            img.at(x, y, 0) = n.x;
            img.at(x, y, 1) = n.y;
            img.at(x, y, 2) = n.z;
        }
    const NormalVariationResult r = normal_variation(img, 15);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            EXPECT_NEAR(r.variation.at(x, y, 0), reference_v(img, x, y, 15), 1e-9);

    // Center-line pixels: V = (cross-region neighbors) * pi/2 exactly.
    const int x = 15, y = 16;
    const int cross = 7 * 15;  // columns 16..22 within the window, all rows
    EXPECT_NEAR(r.variation.at(x, y, 0), cross * 1.5707963267948966, 1e-9);
}

TEST(NormalVariation, RotationInvariance) {
    RandomStream s = RandomStream::root(77);
    Image img(24, 24, 3);
    for (int y = 0; y < 24; ++y)
        for (int x = 0; x < 24; ++x) {
            const Vec3 n = noise::hash_unit_vector(hash_coords(x, y, 0, 5));
            img.at(x, y, 0) = n.x;
            img.at(x, y, 1) = n.y;
            img.at(x, y, 2) = n.z;
        }
    const NormalVariationResult base = normal_variation(img, 7);

    // Rotations by 90-degree multiples about z negate and swap components
    // exactly; the dot products come out bit-identical (the products only
    // commute, they never regroup).
    {
        for (auto rotate : {+[](const Vec3& v) { return Vec3{-v.y, v.x, v.z}; },
                            +[](const Vec3& v) { return Vec3{-v.x, -v.y, v.z}; },
                            +[](const Vec3& v) { return Vec3{v.y, -v.x, v.z}; }}) {
            Image rotated(24, 24, 3);
            for (int y = 0; y < 24; ++y)
                for (int x = 0; x < 24; ++x) {
                    const Vec3 n = rotate(pixel3(img, x, y));
                    rotated.at(x, y, 0) = n.x;
                    rotated.at(x, y, 1) = n.y;
                    rotated.at(x, y, 2) = n.z;
                }
            EXPECT_EQ(normal_variation(rotated, 7).mean, base.mean);
        }
    }

    // Generic rotations: angles are preserved up to acos round-off, which
    // amplifies near parallel pairs; relative 1e-9 covers the worst case.
    for (int trial = 0; trial < 5; ++trial) {
        const Vec3 axis = noise::hash_unit_vector(s.next_raw());
        const double angle = uniform(s, 0.1, 3.0);
        const double c = std::cos(angle), sn = std::sin(angle);
        auto rotate = [&](const Vec3& v) {
            return v * c + cross(axis, v) * sn + axis * (dot(axis, v) * (1.0 - c));
        };
        Image rotated(24, 24, 3);
        for (int y = 0; y < 24; ++y)
            for (int x = 0; x < 24; ++x) {
                const Vec3 n = rotate(pixel3(img, x, y)).normalized();
                rotated.at(x, y, 0) = n.x;
                rotated.at(x, y, 1) = n.y;
                rotated.at(x, y, 2) = n.z;
            }
        const NormalVariationResult r = normal_variation(rotated, 7);
        EXPECT_NEAR(r.mean, base.mean, 1e-9 * base.mean);
    }
}

TEST(NormalVariation, InvalidPixelsExcluded) {
    Image img = constant_normals(16, 16, Vec3{0, 0, 1});
    img.at(8, 8, 0) = 0.0;
    img.at(8, 8, 1) = 0.0;
    img.at(8, 8, 2) = 0.0;  // invalid pixel
    const NormalVariationResult r = normal_variation(img, 5);
    EXPECT_EQ(r.valid_pixels, 255u);
    EXPECT_EQ(r.variation.at(8, 8, 0), 0.0);
    EXPECT_EQ(r.mean, 0.0);  // remaining pairs are all parallel
}

TEST(NormalVariation, EvenWindowRejected) {
    const Image img = constant_normals(8, 8, Vec3{0, 0, 1});
    try {
        normal_variation(img, 8);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::even_window);
    }
}

TEST(NormalVariation, DefaultWindowIsFifteen) {
    EXPECT_EQ(kNormalVariationWindow, 15);
}
