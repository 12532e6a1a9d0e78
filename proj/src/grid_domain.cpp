#include "cheeger/grid_domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>
#include <type_traits>

namespace cheeger {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Direction class of an offset: 0 axis, 1 diagonal, 2 knight.
int direction_class(int dx, int dy) {
  const int a = std::abs(dx);
  const int b = std::abs(dy);
  if (a == 0 || b == 0) return 0;
  if (a == b) return 1;
  return 2;
}

double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

void GridSpec::check() const {
  if (nx < 2 || ny < 2) throw InvalidGrid("grid needs nx >= 2 and ny >= 2");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InvalidGrid("grid spacing must be positive");
}

// ---------------------------------------------------------------------------
// Region

Region::Region(const GridSpec& grid, std::vector<std::uint8_t> bits) : grid_(grid), bits_(std::move(bits)) {
  if (bits_.size() != grid_.size()) throw InvalidArgument("region size does not match grid");
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t Region::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> Region::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(i);
  return out;
}

bool Region::intersects(const Region& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && other.bits_[i]) return true;
  return false;
}

bool Region::subset_of(const Region& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

Region& Region::operator|=(const Region& other) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

Region& Region::operator&=(const Region& other) {
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
  return *this;
}

Region Region::operator-(const Region& other) const {
  Region out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (other.bits_[i]) out.bits_[i] = 0;
  return out;
}

// ---------------------------------------------------------------------------
// Shapes

std::vector<Point> RegularPolygon::vertices() const {
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(sides));
  for (int i = 0; i < sides; ++i) {
    const double a = rotation + 2.0 * std::numbers::pi * i / sides;
    v.push_back({center.x + circumradius * std::cos(a), center.y + circumradius * std::sin(a)});
  }
  return v;
}

bool polygon_contains(std::span<const Point> ccw_vertices, Point p) {
  const std::size_t n = ccw_vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(ccw_vertices[i], ccw_vertices[(i + 1) % n], p) <= 0.0) return false;
  }
  return n >= 3;
}

ShapeExpr::ShapeExpr(Disk d) {
  if (!(d.radius > 0.0)) throw InvalidArgument("disk radius must be positive");
  node_ = std::make_shared<const Node>(d);
}

ShapeExpr::ShapeExpr(Rect r) {
  if (!(r.width > 0.0) || !(r.height > 0.0)) throw InvalidArgument("rect width and height must be positive");
  node_ = std::make_shared<const Node>(r);
}

ShapeExpr::ShapeExpr(RegularPolygon p) {
  if (p.sides < 3) throw InvalidArgument("regular polygon needs at least 3 sides");
  if (!(p.circumradius > 0.0)) throw InvalidArgument("regular polygon circumradius must be positive");
  node_ = std::make_shared<const Node>(p);
}

ShapeExpr::ShapeExpr(CsgOp op, std::vector<ShapeExpr> children) {
  if (children.empty()) throw InvalidArgument("CSG node needs at least one child");
  node_ = std::make_shared<const Node>(Composite{op, std::move(children)});
}

bool ShapeExpr::contains(Point p) const {
  return std::visit(
      Overloaded{
          [&](const Disk& d) {
            const double dx = p.x - d.center.x;
            const double dy = p.y - d.center.y;
            return dx * dx + dy * dy < d.radius * d.radius;
          },
          [&](const Rect& r) {
            return p.x > r.corner.x && p.x < r.corner.x + r.width && p.y > r.corner.y &&
                   p.y < r.corner.y + r.height;
          },
          [&](const RegularPolygon& poly) {
            const auto v = poly.vertices();
            return polygon_contains(v, p);
          },
          [&](const Composite& c) {
            switch (c.op) {
              case CsgOp::kUnion:
                return std::any_of(c.children.begin(), c.children.end(),
                                   [&](const ShapeExpr& s) { return s.contains(p); });
              case CsgOp::kIntersection:
                return std::all_of(c.children.begin(), c.children.end(),
                                   [&](const ShapeExpr& s) { return s.contains(p); });
              case CsgOp::kDifference:
                if (!c.children.front().contains(p)) return false;
                return std::none_of(c.children.begin() + 1, c.children.end(),
                                    [&](const ShapeExpr& s) { return s.contains(p); });
            }
            return false;
          },
      },
      *node_);
}

BoundingBox ShapeExpr::bounding_box() const {
  return std::visit(
      Overloaded{
          [](const Disk& d) {
            return BoundingBox{{d.center.x - d.radius, d.center.y - d.radius},
                               {d.center.x + d.radius, d.center.y + d.radius}};
          },
          [](const Rect& r) {
            return BoundingBox{r.corner, {r.corner.x + r.width, r.corner.y + r.height}};
          },
          [](const RegularPolygon& poly) {
            BoundingBox b{{1e300, 1e300}, {-1e300, -1e300}};
            for (const Point& v : poly.vertices()) {
              b.min.x = std::min(b.min.x, v.x);
              b.min.y = std::min(b.min.y, v.y);
              b.max.x = std::max(b.max.x, v.x);
              b.max.y = std::max(b.max.y, v.y);
            }
            return b;
          },
          [](const Composite& c) {
            if (c.op == CsgOp::kDifference) return c.children.front().bounding_box();
            BoundingBox b = c.children.front().bounding_box();
            for (std::size_t i = 1; i < c.children.size(); ++i) {
              const BoundingBox o = c.children[i].bounding_box();
              if (c.op == CsgOp::kUnion) {
                b.min = {std::min(b.min.x, o.min.x), std::min(b.min.y, o.min.y)};
                b.max = {std::max(b.max.x, o.max.x), std::max(b.max.y, o.max.y)};
              } else {
                b.min = {std::max(b.min.x, o.min.x), std::max(b.min.y, o.min.y)};
                b.max = {std::min(b.max.x, o.max.x), std::min(b.max.y, o.max.y)};
              }
            }
            return b;
          },
      },
      *node_);
}

// ---------------------------------------------------------------------------
// Domain, stencil, labeling

DomainMask::DomainMask(Region inside) : inside_(std::move(inside)) {
  if (inside_.empty()) throw EmptyDomain("domain has no inside pixel");
}

double DomainMask::area() const { return cheeger::area(inside_); }

NeighborStencil NeighborStencil::sector_crofton(double spacing) {
  NeighborStencil s(spacing);
  std::array<double, 8> angle{};
  for (std::size_t k = 0; k < 8; ++k) {
    angle[k] = std::atan2(kOffsets[k][1], kOffsets[k][0]);
    if (angle[k] < 0.0) angle[k] += std::numbers::pi;
  }
  for (std::size_t k = 0; k < 8; ++k) {
    // Nearest direction on each side, angles taken modulo π.
    double below = std::numbers::pi;
    double above = std::numbers::pi;
    for (std::size_t m = 0; m < 8; ++m) {
      if (m == k) continue;
      const double up = std::fmod(angle[m] - angle[k] + 2.0 * std::numbers::pi, std::numbers::pi);
      above = std::min(above, up);
      below = std::min(below, std::numbers::pi - up);
    }
    const double dphi = 0.5 * (above + below);
    const double len = std::hypot(kOffsets[k][0], kOffsets[k][1]);
    s.dirs_[k] = {kOffsets[k][0], kOffsets[k][1], spacing * dphi / (2.0 * len)};
  }
  return s;
}

NeighborStencil NeighborStencil::calibrated(double spacing) {
  // Unknowns: per-direction "crossing length" u for the axis, diagonal and
  // knight classes. Measured length factor for normal angle θ is
  // Σ_k u_k |cos(φ_k − θ)|; its mean over θ is (2/π) Σ_k u_k.
  std::array<std::array<double, 3>, 3> m{};
  const std::array<double, 3> rhs{1.0, 1.0, 1.0};
  for (const auto& off : kOffsets) {
    const int c = direction_class(off[0], off[1]);
    const double phi = std::atan2(off[1], off[0]);
    m[0][static_cast<std::size_t>(c)] += std::abs(std::cos(phi));
    m[1][static_cast<std::size_t>(c)] += std::abs(std::cos(phi - std::numbers::pi / 4.0));
    m[2][static_cast<std::size_t>(c)] += 2.0 / std::numbers::pi;
  }
  const double d = det3(m);
  std::array<double, 3> u{};
  for (std::size_t col = 0; col < 3; ++col) {
    auto mc = m;
    for (std::size_t r = 0; r < 3; ++r) mc[r][col] = rhs[r];
    u[col] = det3(mc) / d;
  }
  NeighborStencil s(spacing);
  for (std::size_t k = 0; k < 8; ++k) {
    const int c = direction_class(kOffsets[k][0], kOffsets[k][1]);
    const double len = std::hypot(kOffsets[k][0], kOffsets[k][1]);
    s.dirs_[k] = {kOffsets[k][0], kOffsets[k][1], spacing * u[static_cast<std::size_t>(c)] / len};
  }
  return s;
}

double NeighborStencil::straight_boundary_factor(double theta) const {
  double sum = 0.0;
  for (const Direction& d : dirs_) {
    sum += d.weight * std::abs(d.dx * std::cos(theta) + d.dy * std::sin(theta)) / spacing_;
  }
  return sum;
}

Labeling::Labeling(const GridSpec& grid, int chambers, std::vector<int> labels)
    : grid_(grid), chambers_(chambers), labels_(std::move(labels)) {
  if (chambers_ < 0) throw InvalidArgument("chamber count must be non-negative");
  if (labels_.size() != grid_.size()) throw InvalidArgument("labeling size does not match grid");
  for (int l : labels_) {
    if (l != kOutside && (l < 0 || l > chambers_)) throw InvalidArgument("label out of range");
  }
}

Labeling::Labeling(const DomainMask& domain, int chambers, int fill)
    : grid_(domain.grid()), chambers_(chambers), labels_(domain.grid().size(), kOutside) {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (domain.inside().contains(i)) labels_[i] = fill;
}

Region Labeling::chamber(int label) const {
  Region r(grid_);
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) r.insert(i);
  return r;
}

void Labeling::check(const DomainMask& domain) const {
  if (!(grid_ == domain.grid())) throw InvalidArgument("labeling grid differs from domain grid");
  std::vector<std::size_t> counts(static_cast<std::size_t>(chambers_) + 1, 0);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const bool inside = domain.inside().contains(i);
    if (inside != (labels_[i] != kOutside)) {
      std::ostringstream msg;
      msg << "label at pixel " << i << " disagrees with the domain mask";
      throw InvalidArgument(msg.str());
    }
    if (inside) ++counts[static_cast<std::size_t>(labels_[i])];
  }
  for (int c = 1; c <= chambers_; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw InvalidArgument("chamber " + std::to_string(c) + " is empty");
    }
  }
}

// ---------------------------------------------------------------------------
// Operations

void check_margin(const ShapeExpr& shape, const GridSpec& grid) {
  grid.check();
  const BoundingBox b = shape.bounding_box();
  const double h = grid.spacing;
  const double x0 = grid.origin.x - 0.5 * h;
  const double y0 = grid.origin.y - 0.5 * h;
  const double x1 = x0 + grid.nx * h;
  const double y1 = y0 + grid.ny * h;
  const double margin = 2.0 * h * (1.0 - 1e-9);
  if (b.min.x - x0 < margin || b.min.y - y0 < margin || x1 - b.max.x < margin || y1 - b.max.y < margin) {
    throw InvalidGrid("grid extent must contain the shape with a margin of at least two pixels");
  }
}

GridSpec grid_for(const ShapeExpr& shape, double spacing, int margin, GridAlignment align) {
  if (!(spacing > 0.0)) throw InvalidGrid("grid spacing must be positive");
  const BoundingBox b = shape.bounding_box();
  const int cells_x = static_cast<int>(std::ceil((b.max.x - b.min.x) / spacing - 1e-9));
  const int cells_y = static_cast<int>(std::ceil((b.max.y - b.min.y) / spacing - 1e-9));
  GridSpec g;
  g.spacing = spacing;
  if (align == GridAlignment::kCellCentred) {
    g.origin = {b.min.x + (0.5 - margin) * spacing, b.min.y + (0.5 - margin) * spacing};
    g.nx = cells_x + 2 * margin;
    g.ny = cells_y + 2 * margin;
  } else {
    g.origin = {b.min.x - margin * spacing, b.min.y - margin * spacing};
    g.nx = cells_x + 2 * margin + 1;
    g.ny = cells_y + 2 * margin + 1;
  }
  return g;
}

DomainMask rasterize(const ShapeExpr& shape, const GridSpec& grid) {
  check_margin(shape, grid);
  Region inside(grid);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix)
      if (shape.contains(grid.center(ix, iy))) inside.insert(grid.index(ix, iy));
  if (inside.empty()) throw EmptyDomain("no pixel centre lies inside the shape");
  return DomainMask(std::move(inside));
}

double area(const Region& region) {
  return static_cast<double>(region.count()) * region.grid().pixel_area();
}

namespace {

using DirectionCounts = std::array<long long, 8>;

// Per-direction number of stencil pairs with one endpoint in a and the
// other satisfying `other` (an out-of-grid endpoint is passed as nullopt).
template <class Pred>
DirectionCounts count_pairs(const Region& a, const NeighborStencil& stencil, Pred other) {
  const GridSpec& g = a.grid();
  DirectionCounts counts{};
  const auto dirs = stencil.directions();
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (!a.contains(g.index(ix, iy))) continue;
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        if (other(ix + dirs[k].dx, iy + dirs[k].dy)) ++counts[k];
        if (other(ix - dirs[k].dx, iy - dirs[k].dy)) ++counts[k];
      }
    }
  }
  return counts;
}

DirectionCounts boundary_counts(const Region& region, const NeighborStencil& stencil) {
  return count_pairs(region, stencil, [&](int x, int y) { return !region.contains(x, y); });
}

DirectionCounts interface_counts(const Region& a, const Region& b, const NeighborStencil& stencil) {
  return count_pairs(a, stencil, [&](int x, int y) { return b.contains(x, y); });
}

double weigh(const DirectionCounts& counts, const NeighborStencil& stencil) {
  double total = 0.0;
  const auto dirs = stencil.directions();
  for (std::size_t k = 0; k < dirs.size(); ++k) total += static_cast<double>(counts[k]) * dirs[k].weight;
  return total;
}

}  // namespace

double perimeter(const Region& region, const NeighborStencil& stencil) {
  return weigh(boundary_counts(region, stencil), stencil);
}

double perimeter(const Region& region) {
  return perimeter(region, NeighborStencil::calibrated(region.grid().spacing));
}

double interface_weight(const Region& a, const Region& b, const NeighborStencil& stencil) {
  return weigh(interface_counts(a, b, stencil), stencil);
}

std::vector<Region> components(const Region& region) {
  const GridSpec& g = region.grid();
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::vector<Region> out;
  std::queue<std::size_t> frontier;
  constexpr int kDx[4] = {1, -1, 0, 0};
  constexpr int kDy[4] = {0, 0, 1, -1};
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (!region.contains(start) || seen[start]) continue;
    Region comp(g);
    seen[start] = 1;
    frontier.push(start);
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop();
      comp.insert(p);
      const int x = g.column(p);
      const int y = g.row(p);
      for (int k = 0; k < 4; ++k) {
        const int qx = x + kDx[k];
        const int qy = y + kDy[k];
        if (!g.in_bounds(qx, qy)) continue;
        const std::size_t q = g.index(qx, qy);
        if (region.contains(q) && !seen[q]) {
          seen[q] = 1;
          frontier.push(q);
        }
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

PerimeterIdentity union_perimeter_identity(std::span<const Region> regions, const NeighborStencil& stencil) {
  if (regions.empty()) return {0.0, 0.0};
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j)
      if (regions[i].intersects(regions[j])) {
        throw OverlapError("regions " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      }
  // Pair counts are combined as integers per direction, so both sides are
  // weighed from identical integers when the identity holds.
  Region all(regions.front().grid());
  DirectionCounts rhs{};
  for (const Region& r : regions) {
    all |= r;
    const DirectionCounts c = boundary_counts(r, stencil);
    for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += c[k];
  }
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      const DirectionCounts c = interface_counts(regions[i], regions[j], stencil);
      for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] -= 2 * c[k];
    }
  return {perimeter(all, stencil), weigh(rhs, stencil)};
}

}  // namespace cheeger
