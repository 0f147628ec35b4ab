#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "procgen/common.hpp"
#include "procgen/rng.hpp"

namespace procgen {

struct CameraSpec {
    Vec3 position{0, 0, 0};
    Vec3 look_at{0, 1, 0};
    double fov_y = 1.0471975511965976;  // 60 degrees
    int width = 128;
    int height = 128;
    double stereo_baseline = 0.0;  // > 0 marks the left camera of a pair

    void check() const {
        if (position == look_at) raise(errc::invalid_range, "camera position equals look_at");
        if (!(fov_y > 0.0 && fov_y < 3.141592653589793))
            raise(errc::invalid_range, "fov must lie in (0, pi)");
    }

    Vec3 forward() const { return (look_at - position).normalized(); }

    // Right-handed basis; right = forward x up, with a fallback when the
    // view is vertical.
    void basis(Vec3& right, Vec3& up, Vec3& fwd) const {
        fwd = forward();
        Vec3 world_up{0, 0, 1};
        if (std::fabs(dot(fwd, world_up)) > 0.999) world_up = {0, 1, 0};
        right = cross(fwd, world_up).normalized();
        up = cross(right, fwd);
    }

    double focal_px() const {
        return (static_cast<double>(height) / 2.0) / std::tan(fov_y / 2.0);
    }
};

// n cameras equally spaced in azimuth on a horizontal circle, all looking
// at the same target.
inline std::vector<CameraSpec> circular_rig(const Vec3& center, double radius, int n,
                                            const Vec3& look_at, double fov_y = 1.0471975511965976,
                                            int width = 128, int height = 128) {
    if (n < 1) raise(errc::invalid_range, "circular_rig: n must be >= 1");
    std::vector<CameraSpec> cams;
    for (int k = 0; k < n; ++k) {
        const double a = 6.283185307179586 * k / n;
        CameraSpec cam;
        cam.position = center + Vec3{radius * std::cos(a), radius * std::sin(a), 0.0};
        cam.look_at = look_at;
        cam.fov_y = fov_y;
        cam.width = width;
        cam.height = height;
        cam.check();
        cams.push_back(cam);
    }
    return cams;
}

inline Vec3 camera_right_vector(const CameraSpec& cam) {
    Vec3 r, u, f;
    cam.basis(r, u, f);
    return r;
}

// Monocular (or stereo, when baseline > 0) cameras with positions uniform
// in the box, rejection-sampled against the free-space oracle. The stereo
// partner sits `baseline` along the right vector and looks at a target
// shifted the same way, so the two view directions are parallel.
template <typename Free>
std::vector<CameraSpec> random_cameras(RandomStream& s, const Aabb& bbox, int n, Free&& is_free,
                                       double stereo_baseline = 0.0,
                                       double fov_y = 1.0471975511965976, int width = 128,
                                       int height = 128) {
    if (n < 1) raise(errc::invalid_range, "random_cameras: n must be >= 1");
    const Vec3 extent = bbox.hi - bbox.lo;
    std::vector<CameraSpec> cams;
    for (int k = 0; k < n; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
            const Vec3 pos{bbox.lo.x + extent.x * s.next_unit(),
                           bbox.lo.y + extent.y * s.next_unit(),
                           bbox.lo.z + extent.z * s.next_unit()};
            const Vec3 target{bbox.lo.x + extent.x * s.next_unit(),
                              bbox.lo.y + extent.y * s.next_unit(),
                              bbox.lo.z + extent.z * s.next_unit()};
            if (distance(pos, target) < 1e-6) continue;
            CameraSpec cam;
            cam.position = pos;
            cam.look_at = target;
            cam.fov_y = fov_y;
            cam.width = width;
            cam.height = height;
            cam.stereo_baseline = stereo_baseline;
            if (!is_free(pos)) continue;
            if (stereo_baseline > 0.0 &&
                !is_free(pos + camera_right_vector(cam) * stereo_baseline))
                continue;
            cams.push_back(cam);
            placed = true;
        }
        if (!placed)
            raise(errc::placement_exhausted,
                  "no collision-free camera position after 100 attempts");
    }
    return cams;
}

inline CameraSpec stereo_partner(const CameraSpec& left) {
    CameraSpec right = left;
    const Vec3 r = camera_right_vector(left);
    right.position = left.position + r * left.stereo_baseline;
    right.look_at = left.look_at + r * left.stereo_baseline;
    right.stereo_baseline = 0.0;
    return right;
}

// Cameras along a polyline at fixed arc-length spacing, each looking at the
// point `look_ahead` meters further along the path.
inline std::vector<CameraSpec> path_to_cameras(const std::vector<Vec3>& path, double spacing,
                                               double look_ahead,
                                               double fov_y = 1.0471975511965976,
                                               int width = 128, int height = 128) {
    if (path.empty()) raise(errc::invalid_range, "path_to_cameras: empty path");
    if (!(spacing > 0.0)) raise(errc::invalid_range, "path_to_cameras: spacing must be > 0");

    std::vector<double> cumulative{0.0};
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        cumulative.push_back(cumulative.back() + distance(path[i], path[i + 1]));
    const double total = cumulative.back();

    auto point_at = [&](double sdist) {
        if (sdist <= 0.0) return path.front();
        if (sdist >= total) return path.back();
        std::size_t seg = 0;
        while (seg + 1 < cumulative.size() && cumulative[seg + 1] < sdist) ++seg;
        const double seg_len = cumulative[seg + 1] - cumulative[seg];
        const double t = seg_len > 0.0 ? (sdist - cumulative[seg]) / seg_len : 0.0;
        return path[seg] + (path[seg + 1] - path[seg]) * t;
    };

    std::vector<CameraSpec> cams;
    for (double sdist = 0.0; sdist <= total + 1e-12; sdist += spacing) {
        CameraSpec cam;
        cam.position = point_at(sdist);
        cam.look_at = point_at(sdist + look_ahead);
        if (distance(cam.position, cam.look_at) < 1e-9) {
            // Past the end of the path: keep looking along the final segment.
            const Vec3 dir = path.size() >= 2
                                 ? (path.back() - path[path.size() - 2]).normalized()
                                 : Vec3{0, 1, 0};
            cam.look_at = cam.position + dir;
        }
        cam.fov_y = fov_y;
        cam.width = width;
        cam.height = height;
        cams.push_back(cam);
        if (total == 0.0) break;
    }
    return cams;
}

}  // namespace procgen
