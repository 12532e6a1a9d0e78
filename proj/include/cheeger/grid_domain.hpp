#pragma once

// Discrete ambient space: CSG shapes, rasterization onto a uniform pixel
// grid, and the discrete area / perimeter functionals.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "cheeger/error.hpp"

namespace cheeger {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct BoundingBox {
  Point min;
  Point max;
};

// Uniform grid of nx × ny pixels with spacing `spacing`; pixel (0, 0) is
// centred at `origin`. Pixel index = iy * nx + ix.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double spacing = 0.0;
  Point origin;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix);
  }
  int column(std::size_t idx) const { return static_cast<int>(idx % static_cast<std::size_t>(nx)); }
  int row(std::size_t idx) const { return static_cast<int>(idx / static_cast<std::size_t>(nx)); }
  bool in_bounds(int ix, int iy) const { return ix >= 0 && iy >= 0 && ix < nx && iy < ny; }
  Point center(int ix, int iy) const {
    return {origin.x + ix * spacing, origin.y + iy * spacing};
  }
  Point center(std::size_t idx) const { return center(column(idx), row(idx)); }
  double pixel_area() const { return spacing * spacing; }

  // Throws InvalidGrid unless nx, ny >= 2 and spacing > 0.
  void check() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

// Pixel subset of a grid, stored as one byte per pixel.
class Region {
 public:
  Region() = default;
  explicit Region(const GridSpec& grid) : grid_(grid), bits_(grid.size(), 0) {}
  Region(const GridSpec& grid, std::vector<std::uint8_t> bits);

  const GridSpec& grid() const { return grid_; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  bool contains(std::size_t idx) const { return bits_[idx] != 0; }
  bool contains(int ix, int iy) const { return grid_.in_bounds(ix, iy) && bits_[grid_.index(ix, iy)] != 0; }
  void insert(std::size_t idx) { bits_[idx] = 1; }
  void erase(std::size_t idx) { bits_[idx] = 0; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<std::size_t> indices() const;

  bool intersects(const Region& other) const;
  bool subset_of(const Region& other) const;
  Region& operator|=(const Region& other);
  Region& operator&=(const Region& other);
  Region operator-(const Region& other) const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  GridSpec grid_;
  std::vector<std::uint8_t> bits_;
};

// ---------------------------------------------------------------------------
// Shapes

struct Disk {
  Point center;
  double radius = 0.0;
};

struct Rect {
  Point corner;  // lower-left
  double width = 0.0;
  double height = 0.0;
};

struct RegularPolygon {
  int sides = 0;
  Point center;
  double circumradius = 0.0;
  double rotation = 0.0;  // angle of the first vertex, radians

  std::vector<Point> vertices() const;
};

enum class CsgOp { kUnion, kIntersection, kDifference };

// Tree of primitives combined by union / intersection / difference.
// Membership is the open-set predicate: boundary points are outside.
// Difference is `first minus every later child`.
class ShapeExpr {
 public:
  struct Composite {
    CsgOp op;
    std::vector<ShapeExpr> children;
  };
  using Node = std::variant<Disk, Rect, RegularPolygon, Composite>;

  ShapeExpr(Disk d);
  ShapeExpr(Rect r);
  ShapeExpr(RegularPolygon p);
  ShapeExpr(CsgOp op, std::vector<ShapeExpr> children);

  static ShapeExpr disk(Point center, double radius) { return ShapeExpr(Disk{center, radius}); }
  static ShapeExpr rect(Point corner, double width, double height) {
    return ShapeExpr(Rect{corner, width, height});
  }
  static ShapeExpr regular_polygon(int sides, Point center, double circumradius, double rotation = 0.0) {
    return ShapeExpr(RegularPolygon{sides, center, circumradius, rotation});
  }
  static ShapeExpr make_union(std::vector<ShapeExpr> c) { return ShapeExpr(CsgOp::kUnion, std::move(c)); }
  static ShapeExpr make_intersection(std::vector<ShapeExpr> c) {
    return ShapeExpr(CsgOp::kIntersection, std::move(c));
  }
  static ShapeExpr make_difference(std::vector<ShapeExpr> c) {
    return ShapeExpr(CsgOp::kDifference, std::move(c));
  }

  const Node& node() const { return *node_; }
  bool contains(Point p) const;
  BoundingBox bounding_box() const;

 private:
  std::shared_ptr<const Node> node_;
};

// Membership predicate for a convex polygon given counter-clockwise vertices.
bool polygon_contains(std::span<const Point> ccw_vertices, Point p);

// ---------------------------------------------------------------------------
// Domain, stencil, labeling

// Rasterized domain Ω: a nonempty Region.
class DomainMask {
 public:
  explicit DomainMask(Region inside);

  const GridSpec& grid() const { return inside_.grid(); }
  const Region& inside() const { return inside_; }
  double area() const;

 private:
  Region inside_;
};

struct Direction {
  int dx;
  int dy;
  double weight;  // length contributed by one cut pair in this direction
};

// Eight undirected directions of the 16-neighbourhood with Cauchy–Crofton
// type weights (length units).
class NeighborStencil {
 public:
  static constexpr std::array<std::array<int, 2>, 8> kOffsets = {
      {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 1}, {1, 2}, {2, -1}, {1, -2}}};

  // Default stencil: per-class weights (axis, diagonal, knight) solved so
  // that axis-aligned and 45° boundaries are measured exactly and the mean
  // over all boundary orientations is exact.
  static NeighborStencil calibrated(double spacing);

  // Textbook sector weights w_k = h Δφ_k / (2 |e_k|), Δφ_k the half-gap sum
  // to the angularly adjacent directions.
  static NeighborStencil sector_crofton(double spacing);

  std::span<const Direction> directions() const { return dirs_; }

  // Length per unit boundary length measured by this stencil for a straight
  // boundary whose normal makes angle `theta` with the x axis.
  double straight_boundary_factor(double theta) const;

 private:
  explicit NeighborStencil(double spacing) : spacing_(spacing) {}
  double spacing_;
  std::array<Direction, 8> dirs_{};
};

// Per-pixel chamber assignment. Label 0 is the exterior chamber E(0),
// 1..N are chambers, kOutside marks pixels outside Ω.
class Labeling {
 public:
  static constexpr int kOutside = -1;

  Labeling(const GridSpec& grid, int chambers, std::vector<int> labels);
  // All in-domain pixels get `fill`.
  Labeling(const DomainMask& domain, int chambers, int fill);

  const GridSpec& grid() const { return grid_; }
  int chambers() const { return chambers_; }
  std::span<const int> labels() const { return labels_; }
  int at(std::size_t idx) const { return labels_[idx]; }
  int at(int ix, int iy) const { return labels_[grid_.index(ix, iy)]; }
  void set(std::size_t idx, int label) { labels_[idx] = label; }

  Region chamber(int label) const;
  // Throws InvalidArgument unless labels match the domain and every chamber
  // 1..N is nonempty.
  void check(const DomainMask& domain) const;

  friend bool operator==(const Labeling&, const Labeling&) = default;

 private:
  GridSpec grid_;
  int chambers_;
  std::vector<int> labels_;
};

// ---------------------------------------------------------------------------
// Operations

// Throws InvalidGrid unless the pixel extent contains the shape's bounding
// box with a margin of at least two pixels.
void check_margin(const ShapeExpr& shape, const GridSpec& grid);

enum class GridAlignment {
  kCellCentred,    // pixel cells tile the bounding box exactly
  kVertexCentred,  // pixel centres lie on the bounding box edges
};

// Grid covering the shape's bounding box plus `margin` pixels on each side.
GridSpec grid_for(const ShapeExpr& shape, double spacing, int margin = 4,
                  GridAlignment align = GridAlignment::kCellCentred);

// Pixel is inside iff its centre satisfies the membership predicate.
// Throws EmptyDomain if no pixel is inside.
DomainMask rasterize(const ShapeExpr& shape, const GridSpec& grid);

double area(const Region& region);

// Σ of stencil weights over pixel pairs with exactly one endpoint in the
// region; pairs leaving the grid count as complement.
double perimeter(const Region& region, const NeighborStencil& stencil);
double perimeter(const Region& region);  // calibrated stencil

// Stencil weight of pairs with one endpoint in a and the other in b.
double interface_weight(const Region& a, const Region& b, const NeighborStencil& stencil);

// Maximal 4-connected components, ordered by smallest pixel index.
std::vector<Region> components(const Region& region);

struct PerimeterIdentity {
  double lhs;  // perimeter of the union
  double rhs;  // Σ perimeters − 2 Σ_{i<j} interface weights
};

// Throws OverlapError if two regions intersect.
PerimeterIdentity union_perimeter_identity(std::span<const Region> regions, const NeighborStencil& stencil);

}  // namespace cheeger
