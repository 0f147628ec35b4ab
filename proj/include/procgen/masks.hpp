#pragma once

#include <cmath>
#include <cstdint>

#include "procgen/common.hpp"
#include "procgen/hashing.hpp"
#include "procgen/noise.hpp"

namespace procgen::masks {

inline constexpr std::uint64_t kScratchSalt = 0x1bdd7d4e4b4cf2b1ull;

// Smoothstep with the cubic 3t^2 - 2t^3 profile, tolerant of lo == hi
// (degenerates to a step).
inline double smoothstep01(double lo, double hi, double x) {
    if (lo == hi) return x < lo ? 0.0 : 1.0;
    const double t = clamp01((x - lo) / (hi - lo));
    return t * t * (3.0 - 2.0 * t);
}

// Union of hashed line segments; a point is scratched when it lies within
// `width` (capsule radius) of any segment. Segments live in cells of size
// `length` so each one reaches at most one cell over; the 3x3x3 neighborhood
// covers every candidate as long as width < length.
inline double scratches(const Vec3& p, double density, double length, double width,
                        double seed_offset) {
    if (density <= 0.0) return 0.0;
    const std::uint64_t seed_salt = mix64(kScratchSalt ^ noise::double_bits(seed_offset));
    const double inv = 1.0 / length;
    const std::int64_t cx = noise::fast_floor(p.x * inv);
    const std::int64_t cy = noise::fast_floor(p.y * inv);
    const std::int64_t cz = noise::fast_floor(p.z * inv);

    for (std::int64_t dz = -1; dz <= 1; ++dz)
        for (std::int64_t dy = -1; dy <= 1; ++dy)
            for (std::int64_t dx = -1; dx <= 1; ++dx) {
                const std::int64_t ix = cx + dx, iy = cy + dy, iz = cz + dz;
                std::uint64_t h = hash_coords(ix, iy, iz, seed_salt);
                const std::int64_t count =
                    static_cast<std::int64_t>(density) +
                    (hash_to_unit(h) < density - std::floor(density) ? 1 : 0);
                for (std::int64_t k = 0; k < count; ++k) {
                    h = mix64(h + 0x632be59bd9b4e019ull);
                    const Vec3 origin{(static_cast<double>(ix) + hash_to_unit(h)) * length,
                                      (static_cast<double>(iy) + hash_to_unit(mix64(h + 1))) * length,
                                      (static_cast<double>(iz) + hash_to_unit(mix64(h + 2))) * length};
                    const Vec3 dir = noise::hash_unit_vector(mix64(h + 3));
                    const Vec3 to_p = p - origin;
                    const double t = std::min(length, std::max(0.0, dot(to_p, dir)));
                    const Vec3 closest = origin + dir * t;
                    if (distance(p, closest) < width) return 1.0;
                }
            }
    return 0.0;
}

// Cell-boundary mask: 1 where the two nearest Worley features are nearly
// equidistant. `width` is measured in the scaled (cell) domain.
inline double cracks(const Vec3& p, double scale, double width) {
    const noise::WorleyResult w = noise::worley(p * scale);
    return (w.f2 - w.f1) < width ? 1.0 : 0.0;
}

// Inverse CDF of the smudge field (fbm with 3 octaves, lacunarity 2, gain
// 0.5, sampled at unit frequency), measured once by Monte Carlo over 4e7
// points. kSmudgeQuantiles[i] is the threshold t with P(field < t) = i/32.
inline constexpr double kSmudgeQuantiles[33] = {
    -1.25589, -0.53861, -0.45151, -0.39153, -0.34366, -0.30291, -0.26684, -0.23409,
    -0.20375, -0.17502, -0.14775, -0.12150, -0.09612, -0.07144, -0.04726, -0.02348,
    0.00008,  0.02366,  0.04745,  0.07161,  0.09627,  0.12165,  0.14784,  0.17511,
    0.20379,  0.23422,  0.26701,  0.30306,  0.34376,  0.39159,  0.45149,  0.53854,
    1.25355,
};

inline double smudge_threshold(double coverage) {
    const double prob = clamp01(1.0 - coverage);
    const double s = prob * 32.0;
    const int i = std::min(31, static_cast<int>(s));
    const double f = s - static_cast<double>(i);
    return kSmudgeQuantiles[i] + (kSmudgeQuantiles[i + 1] - kSmudgeQuantiles[i]) * f;
}

inline constexpr double kSmudgeSoftness = 0.05;

// Thresholded fbm blobs whose expected area fraction tracks `coverage`.
inline double smudges(const Vec3& p, double scale, double coverage) {
    if (coverage <= 0.0) return 0.0;
    if (coverage >= 1.0) return 1.0;
    const double field = noise::fbm(p * scale, 1.0, 3, 2.0, 0.5);
    const double t = smudge_threshold(coverage);
    return smoothstep01(t - kSmudgeSoftness, t + kSmudgeSoftness, field);
}

// Wear concentrated on high-curvature geometry, broken up by fbm. The
// modulation stays in [0.25, 1] so curved regions always wear at least a
// little.
inline double edge_wear(const Vec3& p, double curvature, double intensity, double noise_scale) {
    const double base = clamp01(curvature * intensity);
    const double detail = noise::fbm(p, noise_scale, 2, 2.0, 0.5);
    const double modulation = clamp01(0.7 + 0.3 * detail);
    return base * modulation;
}

}  // namespace procgen::masks
