#pragma once

#include <cmath>
#include <cstdint>

#include "procgen/common.hpp"
#include "procgen/hashing.hpp"
#include "procgen/noise.hpp"

namespace procgen::patterns {

struct CellSample {
    double mask = 0.0;     // 1 inside the cell body, 0 in the mortar/grout/gap
    double cell_id = 0.0;  // hash of the integer cell coordinates, in [0, 1)
    Vec2 cell_uv{0, 0};    // local coordinates, [0,1]^2 where mask == 1
};

inline constexpr std::uint64_t kBrickSalt = 0xe7037ed1a0b428dbull;
inline constexpr std::uint64_t kTileSalt = 0x8ebc6af09c88c6e3ull;
inline constexpr std::uint64_t kPlankSalt = 0x589965cc75374cc3ull;

namespace detail {

// Remaps a cell-local coordinate so the solid region spans [0, 1].
// `half` is the half band width in cell-local units. When half == 0 this is
// exactly the identity ((l - 0) / 1), which composition tests rely on.
inline double remap_inner(double l, double half) { return (l - half) / (1.0 - 2.0 * half); }

}  // namespace detail

// Running-bond brick layout on the unit square. Every odd row is shifted by
// row_offset of a cell width; the mortar band of total width `mortar_width`
// (in uv units) is centered on the cell boundaries.
inline CellSample brick_grid(const Vec2& uv, std::int64_t rows, std::int64_t cols,
                             double mortar_width, double row_offset) {
    const double cell_w = 1.0 / static_cast<double>(cols);
    const double cell_h = 1.0 / static_cast<double>(rows);
    if (mortar_width < 0.0 || mortar_width >= std::min(cell_w, cell_h))
        raise(errc::invalid_mortar, "mortar_width must lie in [0, min cell extent)");

    const double vr = uv.y * static_cast<double>(rows);
    const std::int64_t row = noise::fast_floor(vr);
    const double lv = vr - static_cast<double>(row);

    const bool odd = (row % 2 + 2) % 2 == 1;
    const double shifted_u = odd ? uv.x + row_offset * cell_w : uv.x;
    const double ur = shifted_u * static_cast<double>(cols);
    const std::int64_t col = noise::fast_floor(ur);
    const double lu = ur - static_cast<double>(col);

    // Half band width, converted to cell-local units per axis.
    const double half_u = 0.5 * mortar_width * static_cast<double>(cols);
    const double half_v = 0.5 * mortar_width * static_cast<double>(rows);

    CellSample s;
    s.mask = (lu >= half_u && lu <= 1.0 - half_u && lv >= half_v && lv <= 1.0 - half_v) ? 1.0 : 0.0;
    s.cell_id = noise::white_cell(col, row, 0, kBrickSalt);
    s.cell_uv = {detail::remap_inner(lu, half_u), detail::remap_inner(lv, half_v)};
    return s;
}

// Rectangular tiles: bricks without the row shift.
inline CellSample tile_grid(const Vec2& uv, std::int64_t nx, std::int64_t ny, double grout) {
    const double cell_w = 1.0 / static_cast<double>(nx);
    const double cell_h = 1.0 / static_cast<double>(ny);
    if (grout < 0.0 || grout >= std::min(cell_w, cell_h))
        raise(errc::invalid_mortar, "grout must lie in [0, min cell extent)");

    const double ur = uv.x * static_cast<double>(nx);
    const double vr = uv.y * static_cast<double>(ny);
    const std::int64_t col = noise::fast_floor(ur);
    const std::int64_t row = noise::fast_floor(vr);
    const double lu = ur - static_cast<double>(col);
    const double lv = vr - static_cast<double>(row);
    const double half_u = 0.5 * grout * static_cast<double>(nx);
    const double half_v = 0.5 * grout * static_cast<double>(ny);

    CellSample s;
    s.mask = (lu >= half_u && lu <= 1.0 - half_u && lv >= half_v && lv <= 1.0 - half_v) ? 1.0 : 0.0;
    s.cell_id = noise::white_cell(col, row, 0, kTileSalt);
    s.cell_uv = {detail::remap_inner(lu, half_u), detail::remap_inner(lv, half_v)};
    return s;
}

// Number of planks in a row: 1/length_mean rounded, jittered by -1/0/+1 per
// row. Plank length is exactly 1/n so rows tile the unit interval and the
// whole pattern is periodic in u with period 1.
inline std::int64_t planks_per_row(std::int64_t row, double length_mean) {
    const auto base = static_cast<std::int64_t>(std::llround(1.0 / length_mean));
    const double jitter_u = noise::white_cell(row, 17, 0, kPlankSalt);
    const std::int64_t jitter = jitter_u < 1.0 / 3.0 ? -1 : (jitter_u < 2.0 / 3.0 ? 0 : 1);
    return std::max<std::int64_t>(1, base + jitter);
}

inline CellSample plank_grid(const Vec2& uv, double plank_width, double length_mean, double gap) {
    const auto n_base = static_cast<std::int64_t>(std::llround(1.0 / length_mean));
    const double min_len = 1.0 / static_cast<double>(n_base + 1);
    if (gap < 0.0 || gap >= std::min(plank_width, min_len))
        raise(errc::invalid_mortar, "gap must lie in [0, min(plank_width, shortest plank))");

    const double vr = uv.y / plank_width;
    const std::int64_t row = noise::fast_floor(vr);
    const double lv = vr - static_cast<double>(row);

    const std::int64_t n = planks_per_row(row, length_mean);
    const double offset = noise::white_cell(row, 31, 0, kPlankSalt);
    const double ur = (uv.x - offset) * static_cast<double>(n);
    const std::int64_t plank = noise::fast_floor(ur);
    const double lu = ur - static_cast<double>(plank);
    // Wrap the plank index so ids repeat with period 1 in u.
    const std::int64_t wrapped = ((plank % n) + n) % n;

    const double half_u = 0.5 * gap * static_cast<double>(n);
    const double half_v = 0.5 * gap / plank_width;

    CellSample s;
    s.mask = (lu >= half_u && lu <= 1.0 - half_u && lv >= half_v && lv <= 1.0 - half_v) ? 1.0 : 0.0;
    s.cell_id = noise::white_cell(wrapped, row, 1, kPlankSalt);
    s.cell_uv = {detail::remap_inner(lu, half_u), detail::remap_inner(lv, half_v)};
    return s;
}

}  // namespace procgen::patterns
