#pragma once

#include <cmath>
#include <numbers>

#include "cheeger/grid_domain.hpp"

namespace cheeger::testing {

inline ShapeExpr unit_square() { return ShapeExpr::rect({0.0, 0.0}, 1.0, 1.0); }
inline ShapeExpr unit_disk() { return ShapeExpr::disk({0.0, 0.0}, 1.0); }
inline ShapeExpr unit_hexagon() {
  return ShapeExpr::regular_polygon(6, {0.0, 0.0}, std::sqrt(2.0 / (3.0 * std::sqrt(3.0))));
}
inline ShapeExpr two_disks() {
  return ShapeExpr::make_union({ShapeExpr::disk({-1.5, 0.0}, 1.0), ShapeExpr::disk({1.5, 0.0}, 1.0)});
}

inline DomainMask raster(const ShapeExpr& s, double spacing) { return rasterize(s, grid_for(s, spacing)); }

// Region of an axis-aligned pixel block [x0, x0 + w) × [y0, y0 + h).
inline Region block(const GridSpec& g, int x0, int y0, int w, int h) {
  Region r(g);
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x) r.insert(g.index(x, y));
  return r;
}

inline GridSpec plain_grid(int nx, int ny, double spacing = 1.0) { return GridSpec{nx, ny, spacing, {0.0, 0.0}}; }

}  // namespace cheeger::testing
