#pragma once

#include <cstddef>
#include <vector>

#include "procgen/common.hpp"

namespace procgen {

// Planar float image, row 0 at v = 0 (bottom). `channels` is 1 or 3.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, int c) : width(w), height(h), channels(c),
                                 data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
                                      static_cast<std::size_t>(c), 0.0) {}

    double& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels) +
                    static_cast<std::size_t>(c)];
    }
    double at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels) +
                    static_cast<std::size_t>(c)];
    }
};

inline Vec3 pixel3(const Image& img, int x, int y) {
    return {img.at(x, y, 0), img.at(x, y, img.channels > 1 ? 1 : 0),
            img.at(x, y, img.channels > 1 ? 2 : 0)};
}

}  // namespace procgen
