#pragma once

#include <json.hpp>

#include "procgen/materials/core.hpp"

namespace procgen::materials {

// Shape generators: vector in, (mask, cell_id, cell_uv) out. The canonical
// members of the brick / tile / plank families; further variants extend
// these files.

struct BrickShapeParams {
    std::int64_t rows = 6;
    std::int64_t cols = 12;
    double mortar_width = 0.012;
    double row_offset = 0.5;

    void check() const {
        pdetail::require(rows >= 1 && rows <= 4096, "brick.rows");
        pdetail::require(cols >= 1 && cols <= 4096, "brick.cols");
        pdetail::require(mortar_width >= 0.0 &&
                             mortar_width < std::min(1.0 / static_cast<double>(rows),
                                                     1.0 / static_cast<double>(cols)),
                         "brick.mortar_width");
        pdetail::require(row_offset >= 0.0 && row_offset <= 1.0, "brick.row_offset");
    }
};

struct TileShapeParams {
    std::int64_t nx = 8;
    std::int64_t ny = 8;
    double grout = 0.01;

    void check() const {
        pdetail::require(nx >= 1 && nx <= 4096, "tile.nx");
        pdetail::require(ny >= 1 && ny <= 4096, "tile.ny");
        pdetail::require(grout >= 0.0 && grout < std::min(1.0 / static_cast<double>(nx),
                                                          1.0 / static_cast<double>(ny)),
                         "tile.grout");
    }
};

struct PlankShapeParams {
    double plank_width = 0.11;
    double length_mean = 0.4;
    double gap = 0.006;

    void check() const {
        pdetail::require(plank_width > 0.0 && plank_width <= 1.0, "plank.plank_width");
        pdetail::require(length_mean > 0.02 && length_mean <= 1.0, "plank.length_mean");
        const double n_base = std::round(1.0 / length_mean);
        pdetail::require(gap >= 0.0 && gap < std::min(plank_width, 1.0 / (n_base + 1.0)),
                         "plank.gap");
    }
};

namespace shapedetail {

inline Value uv_from_vector(GraphBuilder& g, Value vector) {
    auto xyz = ops::separate_vec3(g, vector);
    return ops::combine_vec2(g, xyz.out("x"), xyz.out("y"));
}

inline ShapeResult from_node(GraphBuilder&, NodeHandle node) {
    ShapeResult s;
    s.mask = node.out("mask");
    s.cell_id = node.out("cell_id");
    s.cell_uv = node.out("cell_uv");
    return s;
}

}  // namespace shapedetail

inline ShapeResult make_brick_shape(GraphBuilder& g, const BrickShapeParams& p, Value vector) {
    p.check();
    Value uv = shapedetail::uv_from_vector(g, vector);
    return shapedetail::from_node(
        g, ops::brick_grid(g, uv, p.rows, p.cols, p.mortar_width, p.row_offset));
}

inline ShapeResult make_tile_shape(GraphBuilder& g, const TileShapeParams& p, Value vector) {
    p.check();
    Value uv = shapedetail::uv_from_vector(g, vector);
    return shapedetail::from_node(g, ops::tile_grid(g, uv, p.nx, p.ny, p.grout));
}

inline ShapeResult make_plank_shape(GraphBuilder& g, const PlankShapeParams& p, Value vector) {
    p.check();
    Value uv = shapedetail::uv_from_vector(g, vector);
    return shapedetail::from_node(
        g, ops::plank_grid(g, uv, p.plank_width, p.length_mean, p.gap));
}

}  // namespace procgen::materials
