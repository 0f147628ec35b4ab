#pragma once

#include <string>

#include "procgen/eval.hpp"
#include "procgen/image.hpp"

namespace procgen {

inline constexpr int kMaxBakeResolution = 16384;

// Pixel-center sample batch over the unit square at z = 0: point (i, j)
// sits at uv = ((i+0.5)/R, (j+0.5)/R). Position and the "uv" aux agree. The
// bake plane is flat, so the "curvature" aux is identically zero; materials
// with edge-wear terms bake to their pristine look.
inline SampleBatch make_bake_batch(int resolution) {
    SampleBatch batch;
    const std::size_t n = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
    batch.points.reserve(n);
    std::vector<double> uv;
    uv.reserve(n * 2);
    for (int j = 0; j < resolution; ++j)
        for (int i = 0; i < resolution; ++i) {
            const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(resolution);
            const double v = (static_cast<double>(j) + 0.5) / static_cast<double>(resolution);
            batch.points.push_back({u, v, 0.0});
            uv.push_back(u);
            uv.push_back(v);
        }
    batch.set_aux("uv", ValueKind::Vec2, std::move(uv));
    batch.set_aux("curvature", ValueKind::Float, std::vector<double>(n, 0.0));
    return batch;
}

// Evaluates one Color or Float channel of a material graph over the pixel
// grid. Float channels replicate to grayscale; everything stays linear --
// sRGB encoding happens only in the PNG writer.
inline Image bake_texture(const Graph& material, const std::string& channel, int resolution) {
    if (resolution < 1 || resolution > kMaxBakeResolution)
        raise(errc::out_of_range, "resolution must lie in [1, 16384]");
    auto it = material.outputs.find(channel);
    if (it == material.outputs.end())
        raise(errc::unknown_param, "graph has no output named '" + channel + "'");
    const ValueKind kind = material.kind_of(it->second);
    if (kind != ValueKind::Color && kind != ValueKind::Float)
        raise(errc::kind_mismatch, "channel '" + channel + "' is " + kind_name(kind) +
                                       ", need Color or Float");

    const SampleBatch batch = make_bake_batch(resolution);
    const FieldBuffer buf = evaluate(material, channel, batch);

    Image img(resolution, resolution, 3);
    const int arity = kind_arity(kind);
    for (int j = 0; j < resolution; ++j)
        for (int i = 0; i < resolution; ++i) {
            const std::size_t p = static_cast<std::size_t>(j) * static_cast<std::size_t>(resolution) +
                                  static_cast<std::size_t>(i);
            if (arity == 1) {
                const double v = buf.data[p];
                img.at(i, j, 0) = v;
                img.at(i, j, 1) = v;
                img.at(i, j, 2) = v;
            } else {
                img.at(i, j, 0) = buf.data[p * 3];
                img.at(i, j, 1) = buf.data[p * 3 + 1];
                img.at(i, j, 2) = buf.data[p * 3 + 2];
            }
        }
    return img;
}

}  // namespace procgen
