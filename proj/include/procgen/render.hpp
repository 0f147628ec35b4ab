#pragma once

#include <cmath>
#include <limits>

#include "procgen/cameras.hpp"
#include "procgen/image.hpp"
#include "procgen/scene.hpp"

namespace procgen {

// Raycast ground truth: planar depth in meters (inf on miss) and unit
// normals in camera space (zero on miss). Depth is the forward-axis
// component of the hit offset, so the rectified-stereo relation
// disparity = focal_px * baseline / depth holds exactly.
struct GTFrame {
    Image depth;   // 1 channel
    Image normal;  // 3 channels, camera space
};

namespace renderdetail {

struct SceneHit {
    bool hit = false;
    double t = 1e300;  // along the unit world ray
    Vec3 normal{0, 0, 0};
};

// Per-vertex normals interpolated barycentrically at the hit; falls back to
// the geometric face normal when the mesh predates normal computation.
inline SceneHit raycast_object(const SceneObject& obj, const Bvh& bvh, const Vec3& origin,
                               const Vec3& dir) {
    SceneHit out;
    const Vec3 local_origin = obj.transform.invert(origin);
    // Inverse-rotate the (unit) direction; a local parameter t_local then
    // corresponds to t_local * scale meters in world space.
    const double c = std::cos(-obj.transform.z_rotation);
    const double s = std::sin(-obj.transform.z_rotation);
    const Vec3 local_dir{c * dir.x - s * dir.y, s * dir.x + c * dir.y, dir.z};

    const RayHit hit = bvh.raycast(local_origin, local_dir);
    if (!hit.hit) return out;
    out.hit = true;
    out.t = hit.t * obj.transform.scale;

    const Mesh& mesh = *obj.mesh;
    // Recover the triangle's vertex indices to interpolate normals.
    std::size_t tri_index = hit.triangle;
    for (const auto& f : mesh.faces) {
        const std::size_t fan = f.size() - 2;
        if (tri_index < fan) {
            const std::uint32_t i0 = f[0];
            const std::uint32_t i1 = f[tri_index + 1];
            const std::uint32_t i2 = f[tri_index + 2];
            Vec3 n;
            if (mesh.normals.size() == mesh.vertices.size()) {
                n = mesh.normals[i0] * (1.0 - hit.u - hit.v) + mesh.normals[i1] * hit.u +
                    mesh.normals[i2] * hit.v;
            } else {
                n = cross(mesh.vertices[i1] - mesh.vertices[i0],
                          mesh.vertices[i2] - mesh.vertices[i0]);
            }
            n = n.normalized();
            out.normal = obj.transform.apply_direction(n);
            return out;
        }
        tri_index -= fan;
    }
    out.hit = false;
    return out;
}

}  // namespace renderdetail

// One primary ray per pixel center through a pinhole camera. Pixel (0, 0)
// is the bottom-left of the image, matching PFM's bottom-up row order.
inline GTFrame render_gt(Scene& scene, const CameraSpec& camera, int width = 0, int height = 0) {
    camera.check();
    const int w = width > 0 ? width : camera.width;
    const int h = height > 0 ? height : camera.height;

    Vec3 right, up, fwd;
    camera.basis(right, up, fwd);
    const double tan_half = std::tan(camera.fov_y / 2.0);
    const double aspect = static_cast<double>(w) / static_cast<double>(h);

    std::vector<std::shared_ptr<const Bvh>> bvhs;
    bvhs.reserve(scene.objects.size());
    for (const SceneObject& obj : scene.objects) bvhs.push_back(scene.colliders.get(*obj.mesh));

    GTFrame frame;
    frame.depth = Image(w, h, 1);
    frame.normal = Image(w, h, 3);
    const double inf = std::numeric_limits<double>::infinity();

    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            const double ndc_x = (2.0 * (i + 0.5) / w - 1.0) * tan_half * aspect;
            const double ndc_y = (2.0 * (j + 0.5) / h - 1.0) * tan_half;
            const Vec3 dir = (right * ndc_x + up * ndc_y + fwd).normalized();

            renderdetail::SceneHit best;
            for (std::size_t o = 0; o < scene.objects.size(); ++o) {
                const renderdetail::SceneHit hit =
                    renderdetail::raycast_object(scene.objects[o], *bvhs[o], camera.position, dir);
                if (hit.hit && hit.t < best.t) best = hit;
            }

            if (best.hit) {
                frame.depth.at(i, j, 0) = best.t * dot(dir, fwd);  // planar depth
                frame.normal.at(i, j, 0) = dot(best.normal, right);
                frame.normal.at(i, j, 1) = dot(best.normal, up);
                frame.normal.at(i, j, 2) = dot(best.normal, fwd);
            } else {
                frame.depth.at(i, j, 0) = inf;
            }
        }
    return frame;
}

// d = focal_px * baseline / depth; misses (inf depth) map to 0 disparity.
inline Image disparity_from_depth(const Image& depth, double focal_px, double baseline) {
    if (!(focal_px > 0.0) || !(baseline > 0.0))
        raise(errc::invalid_range, "focal_px and baseline must be > 0");
    Image out(depth.width, depth.height, 1);
    for (std::size_t i = 0; i < depth.data.size(); ++i)
        out.data[i] = std::isinf(depth.data[i]) ? 0.0 : focal_px * baseline / depth.data[i];
    return out;
}

}  // namespace procgen
