#pragma once

// Regular hexagonal tilings of the plane laid over a rasterized domain:
// which tiles of area δ sit compactly inside Ω.

#include <vector>

#include "cheeger/grid_domain.hpp"

namespace cheeger {

struct HexPlacement {
  double delta = 0.0;        // area of each hexagon
  Point offset;              // lattice shift in units of the lattice basis, [0, 1)²
  int k = 0;                 // hexagons compactly inside Ω
  std::vector<Point> centres;
  double rotation = 0.0;     // angle of the first vertex; same for every tile
};

// Circumradius of the regular hexagon of area δ.
double hex_circumradius(double delta);

// Pixels whose 3×3 neighbourhood lies in Ω (the one-pixel safety margin).
Region eroded_interior(const DomainMask& domain);

// Tiles of area δ of the lattice shifted by `offset` whose rasterization is
// nonempty and inside eroded_interior(domain). Pass the eroded region when
// calling repeatedly.
HexPlacement place_hexagons(const DomainMask& domain, const Region& eroded, double delta, Point offset);

// Largest k over a 5×5 grid of lattice offsets (first offset wins ties).
HexPlacement best_placement(const DomainMask& domain, const Region& eroded, double delta);

// Region covered by one tile on the domain grid.
Region hexagon_pixels(const GridSpec& grid, Point centre, double delta, double rotation = 0.0);

}  // namespace cheeger
