#include "cheeger/hex_lattice.hpp"

#include <algorithm>
#include <cmath>

namespace cheeger {

namespace {

// Tiles are flat-topped (a vertex on the x axis): columns 1.5 R apart,
// alternate columns shifted by half a tile height.
struct Lattice {
  Point a1;
  Point a2;
};

Lattice lattice_for(double r) { return {{1.5 * r, std::sqrt(3.0) * r / 2.0}, {0.0, std::sqrt(3.0) * r}}; }

// Pixel-index window of the tile's bounding box, clipped to the grid.
struct Window {
  int x0, x1, y0, y1;
};

Window window(const GridSpec& g, Point c, double r) {
  auto lo = [&](double v, double o) { return static_cast<int>(std::floor((v - o) / g.spacing)); };
  auto hi = [&](double v, double o) { return static_cast<int>(std::ceil((v - o) / g.spacing)); };
  return {std::max(0, lo(c.x - r, g.origin.x)), std::min(g.nx - 1, hi(c.x + r, g.origin.x)),
          std::max(0, lo(c.y - r, g.origin.y)), std::min(g.ny - 1, hi(c.y + r, g.origin.y))};
}

// True iff every pixel centre inside the tile is in `allowed` and at least
// one is.
bool tile_fits(const GridSpec& g, const Region& allowed, const std::vector<Point>& verts, Point c, double r) {
  const Window w = window(g, c, r);
  bool any = false;
  for (int y = w.y0; y <= w.y1; ++y)
    for (int x = w.x0; x <= w.x1; ++x) {
      if (!polygon_contains(verts, g.center(x, y))) continue;
      if (!allowed.contains(g.index(x, y))) return false;
      any = true;
    }
  return any;
}

}  // namespace

double hex_circumradius(double delta) { return std::sqrt(2.0 * delta / (3.0 * std::sqrt(3.0))); }

Region eroded_interior(const DomainMask& domain) {
  const GridSpec& g = domain.grid();
  const Region& in = domain.inside();
  Region out(g);
  for (std::size_t i : in.indices()) {
    const int x = g.column(i);
    const int y = g.row(i);
    bool ok = true;
    for (int dy = -1; dy <= 1 && ok; ++dy)
      for (int dx = -1; dx <= 1 && ok; ++dx) ok = in.contains(x + dx, y + dy);
    if (ok) out.insert(i);
  }
  return out;
}

Region hexagon_pixels(const GridSpec& grid, Point centre, double delta, double rotation) {
  const double r = hex_circumradius(delta);
  const auto verts = RegularPolygon{6, centre, r, rotation}.vertices();
  Region out(grid);
  const Window w = window(grid, centre, r);
  for (int y = w.y0; y <= w.y1; ++y)
    for (int x = w.x0; x <= w.x1; ++x)
      if (polygon_contains(verts, grid.center(x, y))) out.insert(grid.index(x, y));
  return out;
}

HexPlacement place_hexagons(const DomainMask& domain, const Region& eroded, double delta, Point offset) {
  if (!(delta > 0.0)) throw InvalidArgument("hexagon area must be positive");
  HexPlacement p;
  p.delta = delta;
  p.offset = offset;
  const GridSpec& g = domain.grid();
  const double r = hex_circumradius(delta);
  const double ry = std::sqrt(3.0) * r / 2.0;
  const Lattice lat = lattice_for(r);

  // Bounding box of the eroded region.
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (std::size_t i : eroded.indices()) {
    const Point c = g.center(i);
    xmin = std::min(xmin, c.x);
    xmax = std::max(xmax, c.x);
    ymin = std::min(ymin, c.y);
    ymax = std::max(ymax, c.y);
  }
  if (xmin > xmax) return p;

  // Lattice point (i, j) sits at base + i a1 + j a2.
  const Point base{xmin + offset.x * lat.a1.x, ymin + offset.x * lat.a1.y + offset.y * lat.a2.y};
  const int i0 = static_cast<int>(std::floor((xmin - r - base.x) / lat.a1.x)) - 1;
  const int i1 = static_cast<int>(std::ceil((xmax + r - base.x) / lat.a1.x)) + 1;
  const auto unit = RegularPolygon{6, {0.0, 0.0}, r, p.rotation}.vertices();
  std::vector<Point> verts(unit.size());
  for (int i = i0; i <= i1; ++i) {
    const double cx = base.x + i * lat.a1.x;
    const double ybase = base.y + i * lat.a1.y;
    const int j0 = static_cast<int>(std::floor((ymin - r - ybase) / lat.a2.y)) - 1;
    const int j1 = static_cast<int>(std::ceil((ymax + r - ybase) / lat.a2.y)) + 1;
    for (int j = j0; j <= j1; ++j) {
      const Point c{cx, ybase + j * lat.a2.y};
      if (c.x - r < xmin - g.spacing || c.x + r > xmax + g.spacing || c.y - ry < ymin - g.spacing ||
          c.y + ry > ymax + g.spacing)
        continue;
      for (std::size_t v = 0; v < unit.size(); ++v) verts[v] = {unit[v].x + c.x, unit[v].y + c.y};
      if (tile_fits(g, eroded, verts, c, r)) p.centres.push_back(c);
    }
  }
  p.k = static_cast<int>(p.centres.size());
  return p;
}

HexPlacement best_placement(const DomainMask& domain, const Region& eroded, double delta) {
  HexPlacement best;
  bool have = false;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      HexPlacement p = place_hexagons(domain, eroded, delta, {a / 5.0, b / 5.0});
      if (!have || p.k > best.k) {
        best = std::move(p);
        have = true;
      }
    }
  return best;
}

}  // namespace cheeger
