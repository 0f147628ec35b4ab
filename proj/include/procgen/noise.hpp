#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

#include "procgen/common.hpp"
#include "procgen/hashing.hpp"

namespace procgen::noise {

inline std::int64_t fast_floor(double x) {
    auto i = static_cast<std::int64_t>(x);
    return x < static_cast<double>(i) ? i - 1 : i;
}

// Quintic fade, zero first and second derivative at the lattice.
inline double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

inline double lerp(double a, double b, double t) { return a + (b - a) * t; }

// The 12 cube-edge gradient directions of classic gradient noise.
inline constexpr double kGradients[12][3] = {
    {1, 1, 0}, {-1, 1, 0}, {1, -1, 0}, {-1, -1, 0},
    {1, 0, 1}, {-1, 0, 1}, {1, 0, -1}, {-1, 0, -1},
    {0, 1, 1}, {0, -1, 1}, {0, 1, -1}, {0, -1, -1},
};

inline constexpr std::uint64_t kPerlinSalt = 0x9d39247e33776d41ull;

// Keeps the gradient-noise output inside [-1, 1]. The raw dot-product sum
// with cube-edge gradients peaks at ~1.013 over 4e7 adversarial samples;
// dividing by 1.06 leaves margin while preserving the exact zero at lattice
// points.
inline constexpr double kPerlinNormalize = 1.0 / 1.06;

inline double grad_dot(std::int64_t ix, std::int64_t iy, std::int64_t iz, double fx, double fy,
                       double fz) {
    const std::uint64_t h = hash_coords(ix, iy, iz, kPerlinSalt);
    const double* g = kGradients[h % 12];
    return g[0] * fx + g[1] * fy + g[2] * fz;
}

// Classic gradient noise of p (already scaled by the caller's frequency).
// Exactly 0.0 at integer lattice points; output in [-1, 1].
inline double perlin(double x, double y, double z) {
    const std::int64_t ix = fast_floor(x), iy = fast_floor(y), iz = fast_floor(z);
    const double fx = x - static_cast<double>(ix);
    const double fy = y - static_cast<double>(iy);
    const double fz = z - static_cast<double>(iz);
    const double u = fade(fx), v = fade(fy), w = fade(fz);

    const double n000 = grad_dot(ix, iy, iz, fx, fy, fz);
    const double n100 = grad_dot(ix + 1, iy, iz, fx - 1, fy, fz);
    const double n010 = grad_dot(ix, iy + 1, iz, fx, fy - 1, fz);
    const double n110 = grad_dot(ix + 1, iy + 1, iz, fx - 1, fy - 1, fz);
    const double n001 = grad_dot(ix, iy, iz + 1, fx, fy, fz - 1);
    const double n101 = grad_dot(ix + 1, iy, iz + 1, fx - 1, fy, fz - 1);
    const double n011 = grad_dot(ix, iy + 1, iz + 1, fx, fy - 1, fz - 1);
    const double n111 = grad_dot(ix + 1, iy + 1, iz + 1, fx - 1, fy - 1, fz - 1);

    const double nx00 = lerp(n000, n100, u);
    const double nx10 = lerp(n010, n110, u);
    const double nx01 = lerp(n001, n101, u);
    const double nx11 = lerp(n011, n111, u);
    const double nxy0 = lerp(nx00, nx10, v);
    const double nxy1 = lerp(nx01, nx11, v);
    return lerp(nxy0, nxy1, w) * kPerlinNormalize;
}

inline double perlin(const Vec3& p, double frequency) {
    return perlin(p.x * frequency, p.y * frequency, p.z * frequency);
}

// Fractal sum: sum_i gain^i * perlin(p, frequency * lacunarity^i).
// |result| <= sum_i gain^i.
inline double fbm(const Vec3& p, double frequency, int octaves, double lacunarity, double gain) {
    double sum = 0.0;
    double amp = 1.0;
    double freq = frequency;
    for (int i = 0; i < octaves; ++i) {
        sum += amp * perlin(p, freq);
        freq *= lacunarity;
        amp *= gain;
    }
    return sum;
}

inline constexpr std::uint64_t kWhiteSalt = 0xc2b2ae3d27d4eb4full;
inline constexpr double kWhiteQuantization = 4096.0;

// Hash noise of quantized p in [0, 1); the per-cell randomization primitive.
inline double white(const Vec3& p) {
    return hash_to_unit(hash_coords(fast_floor(p.x * kWhiteQuantization),
                                    fast_floor(p.y * kWhiteQuantization),
                                    fast_floor(p.z * kWhiteQuantization), kWhiteSalt));
}

inline double white_cell(std::int64_t ix, std::int64_t iy, std::int64_t iz, std::uint64_t salt) {
    return hash_to_unit(hash_coords(ix, iy, iz, salt));
}

inline constexpr std::uint64_t kWorleySalt = 0xa0761d6478bd642full;

struct WorleyResult {
    double f1 = 0.0;            // distance to nearest feature (in query space)
    double f2 = 0.0;            // distance to second-nearest feature
    double cell_id = 0.0;       // hash of the winning cell, in [0, 1)
    Vec3 feature{0, 0, 0};      // winning feature point (in query space)
};

// One feature point per unit cell, hashed uniform inside the cell; nearest
// two features over the 3x3x3 neighborhood.
inline WorleyResult worley(const Vec3& q) {
    const std::int64_t cx = fast_floor(q.x), cy = fast_floor(q.y), cz = fast_floor(q.z);
    WorleyResult r;
    double best1 = 1e30, best2 = 1e30;
    for (std::int64_t dz = -1; dz <= 1; ++dz)
        for (std::int64_t dy = -1; dy <= 1; ++dy)
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                const std::int64_t ix = cx + dx, iy = cy + dy, iz = cz + dz;
                const std::uint64_t h = hash_coords(ix, iy, iz, kWorleySalt);
                const Vec3 feature{static_cast<double>(ix) + hash_to_unit(h),
                                   static_cast<double>(iy) + hash_to_unit(mix64(h + 1)),
                                   static_cast<double>(iz) + hash_to_unit(mix64(h + 2))};
                const double d = distance(q, feature);
                if (d < best1) {
                    best2 = best1;
                    best1 = d;
                    r.feature = feature;
                    r.cell_id = hash_to_unit(mix64(h + 3));
                } else if (d < best2) {
                    best2 = d;
                }
            }
    r.f1 = best1;
    r.f2 = best2;
    return r;
}

// Random unit vector from a hash (uniform over the sphere).
inline Vec3 hash_unit_vector(std::uint64_t h) {
    const double z = 2.0 * hash_to_unit(h) - 1.0;
    const double phi = 6.283185307179586476925286766559 * hash_to_unit(mix64(h + 1));
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

inline std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

}  // namespace procgen::noise
