#pragma once

#include <cmath>

#include "procgen/common.hpp"

namespace procgen {

// Standard hexcone HSV <-> RGB. Hue wraps mod 1; conversion round-trips to
// well under 1e-12 for s > 0, v > 0.

inline Vec3 hsv_to_rgb(double h, double s, double v) {
    h -= std::floor(h);  // wrap to [0, 1)
    const double h6 = h * 6.0;
    const int sector = static_cast<int>(h6) % 6;
    const double f = h6 - std::floor(h6);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (sector) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

inline Vec3 rgb_to_hsv(const Vec3& c) {
    const double mx = std::max(c.x, std::max(c.y, c.z));
    const double mn = std::min(c.x, std::min(c.y, c.z));
    const double delta = mx - mn;
    double h = 0.0;
    if (delta > 0.0) {
        if (mx == c.x) h = (c.y - c.z) / delta;
        else if (mx == c.y) h = 2.0 + (c.z - c.x) / delta;
        else h = 4.0 + (c.x - c.y) / delta;
        h /= 6.0;
        if (h < 0.0) h += 1.0;
    }
    const double s = mx > 0.0 ? delta / mx : 0.0;
    return {h, s, mx};
}

// sRGB transfer function, applied only when writing 8-bit previews.
inline double linear_to_srgb(double v) {
    v = clamp01(v);
    return v <= 0.0031308 ? v * 12.92 : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

}  // namespace procgen
