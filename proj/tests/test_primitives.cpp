#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "procgen/colorspace.hpp"
#include "procgen/masks.hpp"
#include "procgen/noise.hpp"
#include "procgen/patterns.hpp"
#include "procgen/rng.hpp"

using namespace procgen;

namespace {

Vec3 random_point(RandomStream& s, double extent) {
    return {uniform(s, -extent, extent), uniform(s, -extent, extent),
            uniform(s, -extent, extent)};
}

}  // namespace

TEST(Perlin, ExactlyZeroAtLatticePoints) {
    RandomStream s = RandomStream::root(11);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::floor(uniform(s, -50, 50));
        const double y = std::floor(uniform(s, -50, 50));
        const double z = std::floor(uniform(s, -50, 50));
        EXPECT_EQ(noise::perlin(x, y, z), 0.0);
    }
}

TEST(Perlin, BoundedByOneOverMillionSamples) {
    RandomStream s = RandomStream::root(12);
    double max_abs = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const Vec3 p = random_point(s, 40.0);
        max_abs = std::max(max_abs, std::fabs(noise::perlin(p, 1.7)));
    }
    EXPECT_LE(max_abs, 1.0);
    EXPECT_GT(max_abs, 0.5);  // the bound is not vacuous
}

TEST(Perlin, DeterministicBitIdentical) {
    RandomStream s = RandomStream::root(13);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 p = random_point(s, 20.0);
        EXPECT_EQ(noise::perlin(p, 2.3), noise::perlin(p, 2.3));
    }
}

TEST(Fbm, SingleOctaveEqualsPerlin) {
    RandomStream s = RandomStream::root(14);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 p = random_point(s, 10.0);
        EXPECT_EQ(noise::fbm(p, 1.9, 1, 2.0, 0.5), noise::perlin(p, 1.9));
    }
}

TEST(Fbm, GeometricBound) {
    RandomStream s = RandomStream::root(15);
    const double bound = 1.0 + 0.5 + 0.25;  // octaves=3, gain=0.5
    for (int i = 0; i < 1000000; ++i) {
        const Vec3 p = random_point(s, 30.0);
        EXPECT_LE(std::fabs(noise::fbm(p, 1.3, 3, 2.0, 0.5)), bound);
    }
}

TEST(Fbm, ZeroAtLatticeWithIntegerLacunarity) {
    // All octave lattice points coincide: frequency 1, lacunarity 2.
    RandomStream s = RandomStream::root(16);
    for (int i = 0; i < 200; ++i) {
        const Vec3 p{std::floor(uniform(s, -20, 20)), std::floor(uniform(s, -20, 20)),
                     std::floor(uniform(s, -20, 20))};
        for (int octaves = 1; octaves <= 5; ++octaves)
            EXPECT_EQ(noise::fbm(p, 1.0, octaves, 2.0, 0.5), 0.0);
    }
}

TEST(Voronoi, ZeroDistanceAtFeaturePoint) {
    RandomStream s = RandomStream::root(17);
    for (int i = 0; i < 200; ++i) {
        const Vec3 q = random_point(s, 20.0);
        const noise::WorleyResult w = noise::worley(q);
        // Query exactly at the winning feature point.
        const noise::WorleyResult at_feature = noise::worley(w.feature);
        EXPECT_EQ(at_feature.f1, 0.0);
    }
}

TEST(Voronoi, DistanceBoundedBySqrt3) {
    RandomStream s = RandomStream::root(18);
    const double bound = std::sqrt(3.0);
    for (int i = 0; i < 200000; ++i) {
        const Vec3 q = random_point(s, 50.0);
        EXPECT_LE(noise::worley(q).f1, bound);
    }
}

TEST(Voronoi, CellIdConstantNearFeature) {
    RandomStream s = RandomStream::root(19);
    for (int i = 0; i < 500; ++i) {
        const Vec3 q = random_point(s, 20.0);
        const noise::WorleyResult w = noise::worley(q);
        const double eps = 1e-4;
        for (const Vec3 d : {Vec3{eps, 0, 0}, Vec3{0, eps, 0}, Vec3{0, 0, eps}}) {
            const noise::WorleyResult near = noise::worley(w.feature + d);
            EXPECT_EQ(near.cell_id, w.cell_id);
        }
    }
}

TEST(WhiteNoise, DeterministicAndUniform) {
    RandomStream s = RandomStream::root(20);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
        const Vec3 p = random_point(s, 100.0);
        const double v = noise::white(p);
        EXPECT_EQ(noise::white(p), v);
        EXPECT_GE(v, 0.0);
        EXPECT_LT(v, 1.0);
        sum += v;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(WhiteNoise, KolmogorovSmirnovAgainstUniform) {
    RandomStream s = RandomStream::root(21);
    const int n = 100000;
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = noise::white(random_point(s, 200.0));
    std::sort(values.begin(), values.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = values[static_cast<std::size_t>(i)];
        ks = std::max(ks, std::fabs(cdf - static_cast<double>(i) / n));
        ks = std::max(ks, std::fabs(cdf - static_cast<double>(i + 1) / n));
    }
    EXPECT_LT(ks, 0.01);
}

TEST(Color, HsvPrimaries) {
    EXPECT_EQ(hsv_to_rgb(0.0, 1.0, 1.0), (Vec3{1, 0, 0}));
    EXPECT_EQ(hsv_to_rgb(1.0 / 3.0, 1.0, 1.0), (Vec3{0, 1, 0}));
}

TEST(Color, RoundTripTenThousandColors) {
    RandomStream s = RandomStream::root(22);
    double max_err = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double h = uniform(s, 0, 1);
        const double sat = uniform(s, 0.01, 1);
        const double v = uniform(s, 0.01, 1);
        const Vec3 rgb = hsv_to_rgb(h, sat, v);
        const Vec3 hsv = rgb_to_hsv(rgb);
        const Vec3 rgb2 = hsv_to_rgb(hsv.x, hsv.y, hsv.z);
        max_err = std::max({max_err, std::fabs(rgb2.x - rgb.x), std::fabs(rgb2.y - rgb.y),
                            std::fabs(rgb2.z - rgb.z)});
    }
    EXPECT_LT(max_err, 1e-12);
}

TEST(BrickGrid, CenterMidlineAndCellUv) {
    // 2x4 grid, no row offset so cell centers are easy to name.
    const patterns::CellSample center =
        patterns::brick_grid({0.125 / 2 + 0.125, 0.25}, 2, 8, 0.02, 0.0);
    EXPECT_EQ(center.mask, 1.0);
    EXPECT_NEAR(center.cell_uv.x, 0.5, 1e-12);
    EXPECT_NEAR(center.cell_uv.y, 0.5, 1e-12);

    // A horizontal mortar midline is a cell boundary in v.
    const patterns::CellSample mortar = patterns::brick_grid({0.3, 0.5}, 2, 8, 0.02, 0.0);
    EXPECT_EQ(mortar.mask, 0.0);
}

// Analytic area oracle: the brick fraction is
// (1 - mortar*cols) * (1 - mortar*rows). Parameters are chosen so every
// brick edge lands exactly on the 2048 pixel grid, making the pixel-center
// estimate exact.
TEST(BrickGrid, AreaFractionMatchesAnalyticOracle) {
    const std::int64_t rows = 2, cols = 4;
    const double mortar = 64.0 / 2048.0;
    const double expected = (1.0 - mortar * cols) * (1.0 - mortar * rows);
    const int res = 2048;
    std::int64_t inside = 0;
    for (int j = 0; j < res; ++j)
        for (int i = 0; i < res; ++i) {
            const Vec2 uv{(i + 0.5) / res, (j + 0.5) / res};
            inside += patterns::brick_grid(uv, rows, cols, mortar, 0.5).mask > 0.5 ? 1 : 0;
        }
    const double measured = static_cast<double>(inside) / (static_cast<double>(res) * res);
    EXPECT_NEAR(measured, expected, 1e-3);
}

TEST(BrickGrid, InvalidMortar) {
    EXPECT_THROW(patterns::brick_grid({0.5, 0.5}, 4, 4, 0.25, 0.5), Error);
    EXPECT_THROW(patterns::brick_grid({0.5, 0.5}, 4, 4, -0.01, 0.5), Error);
}

TEST(TileGrid, ZeroGroutIsAllMask) {
    RandomStream s = RandomStream::root(23);
    for (int i = 0; i < 20000; ++i) {
        const Vec2 uv{uniform(s, 0, 1), uniform(s, 0, 1)};
        EXPECT_EQ(patterns::tile_grid(uv, 5, 3, 0.0).mask, 1.0);
    }
}

TEST(PlankGrid, PeriodicInUWithPeriodOne) {
    RandomStream s = RandomStream::root(24);
    for (int i = 0; i < 20000; ++i) {
        const Vec2 uv{uniform(s, 0, 1), uniform(s, 0, 1)};
        const patterns::CellSample a = patterns::plank_grid(uv, 0.1, 0.3, 0.01);
        const patterns::CellSample b =
            patterns::plank_grid({uv.x + 1.0, uv.y}, 0.1, 0.3, 0.01);
        EXPECT_EQ(a.mask, b.mask);
        EXPECT_EQ(a.cell_id, b.cell_id);
    }
}

TEST(PlankGrid, AdjacentCellIdsDistinct) {
    // Horizontally adjacent planks within a row, and vertically adjacent
    // rows; hashes should almost never collide.
    int distinct = 0;
    const int n = 10000;
    RandomStream s = RandomStream::root(25);
    for (int i = 0; i < n; ++i) {
        const double v = uniform(s, 0, 1);
        const std::int64_t row = noise::fast_floor(v / 0.1);
        const std::int64_t planks = patterns::planks_per_row(row, 0.3);
        const double u = uniform(s, 0, 1);
        const patterns::CellSample a = patterns::plank_grid({u, v}, 0.1, 0.3, 0.0);
        const patterns::CellSample b =
            patterns::plank_grid({u + 1.0 / static_cast<double>(planks), v}, 0.1, 0.3, 0.0);
        const patterns::CellSample c = patterns::plank_grid({u, v + 0.1}, 0.1, 0.3, 0.0);
        if (a.cell_id != b.cell_id) ++distinct;
        if (a.cell_id != c.cell_id) ++distinct;
    }
    EXPECT_GT(static_cast<double>(distinct) / (2 * n), 0.99);
}

TEST(Masks, ScratchesZeroDensityIsEmpty) {
    RandomStream s = RandomStream::root(26);
    for (int i = 0; i < 10000; ++i)
        EXPECT_EQ(masks::scratches(random_point(s, 5.0), 0.0, 0.3, 0.01, 0.0), 0.0);
}

TEST(Masks, ScratchesBinaryAndPresent) {
    RandomStream s = RandomStream::root(27);
    double mean = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = masks::scratches(random_point(s, 5.0), 2.0, 0.3, 0.02, 7.0);
        EXPECT_TRUE(v == 0.0 || v == 1.0);
        mean += v;
    }
    mean /= n;
    EXPECT_GT(mean, 0.001);
    EXPECT_LT(mean, 0.5);
}

TEST(Masks, CracksZeroWidthHasZeroMeasure) {
    RandomStream s = RandomStream::root(28);
    double mean = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) mean += masks::cracks(random_point(s, 10.0), 3.0, 0.0);
    EXPECT_LT(mean / n, 1e-3);
}

TEST(Masks, SmudgeCoverageCalibration) {
    RandomStream s = RandomStream::root(29);
    double mean = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) mean += masks::smudges(random_point(s, 40.0), 2.0, 0.3);
    EXPECT_NEAR(mean / n, 0.3, 0.05);
}

TEST(Masks, SmudgeCoverageAcrossLevels) {
    RandomStream s = RandomStream::root(30);
    for (double coverage : {0.1, 0.5, 0.7}) {
        double mean = 0.0;
        const int n = 400000;
        for (int i = 0; i < n; ++i) mean += masks::smudges(random_point(s, 40.0), 1.5, coverage);
        EXPECT_NEAR(mean / n, coverage, 0.05) << coverage;
    }
}

TEST(Masks, EdgeWearZeroCurvatureAndZeroIntensity) {
    RandomStream s = RandomStream::root(31);
    for (int i = 0; i < 10000; ++i) {
        const Vec3 p = random_point(s, 5.0);
        EXPECT_EQ(masks::edge_wear(p, 0.0, 2.0, 4.0), 0.0);
        EXPECT_EQ(masks::edge_wear(p, 1.5, 0.0, 4.0), 0.0);
    }
}

TEST(Masks, AllMaskOutputsInUnitInterval) {
    RandomStream s = RandomStream::root(32);
    for (int i = 0; i < 200000; ++i) {
        const Vec3 p = random_point(s, 20.0);
        for (double v : {masks::scratches(p, 1.5, 0.3, 0.01, 1.0), masks::cracks(p, 3.0, 0.08),
                         masks::smudges(p, 2.0, 0.4), masks::edge_wear(p, 0.7, 1.5, 4.0)}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Masks, SmoothstepHalfwayAndDegenerate) {
    EXPECT_EQ(masks::smoothstep01(0.0, 1.0, 0.5), 0.5);
    EXPECT_EQ(masks::smoothstep01(0.5, 0.5, 0.4), 0.0);  // degenerate -> step
    EXPECT_EQ(masks::smoothstep01(0.5, 0.5, 0.6), 1.0);
}
