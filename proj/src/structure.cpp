#include "cheeger/structure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cheeger {

namespace {

// Dual grid: corner (cx, cy), 0 ≤ cx ≤ nx, 0 ≤ cy ≤ ny, sits at the lower
// left of pixel (cx, cy). Horizontal edge h(cx, cy) joins corners (cx, cy)
// and (cx + 1, cy) between pixels (cx, cy − 1) below and (cx, cy) above;
// vertical edge v(cx, cy) joins (cx, cy) and (cx, cy + 1) between pixels
// (cx − 1, cy) left and (cx, cy) right.
class DualGrid {
 public:
  explicit DualGrid(const Labeling& lab) : lab_(lab), g_(lab.grid()) {}

  int label(int x, int y) const { return g_.in_bounds(x, y) ? lab_.at(x, y) : Labeling::kOutside; }

  std::size_t corner_count() const { return static_cast<std::size_t>(g_.nx + 1) * static_cast<std::size_t>(g_.ny + 1); }
  std::size_t corner(int cx, int cy) const {
    return static_cast<std::size_t>(cy) * static_cast<std::size_t>(g_.nx + 1) + static_cast<std::size_t>(cx);
  }
  int corner_x(std::size_t c) const { return static_cast<int>(c % static_cast<std::size_t>(g_.nx + 1)); }
  int corner_y(std::size_t c) const { return static_cast<int>(c / static_cast<std::size_t>(g_.nx + 1)); }
  Point position(std::size_t c) const {
    return {g_.origin.x + (corner_x(c) - 0.5) * g_.spacing, g_.origin.y + (corner_y(c) - 0.5) * g_.spacing};
  }

  // Labels around a corner: (cx−1, cy−1), (cx, cy−1), (cx−1, cy), (cx, cy).
  std::array<int, 4> window(std::size_t c) const {
    const int x = corner_x(c);
    const int y = corner_y(c);
    return {label(x - 1, y - 1), label(x, y - 1), label(x - 1, y), label(x, y)};
  }

  // Edges: index e < nh are horizontal, the rest vertical.
  std::size_t horizontal_count() const { return static_cast<std::size_t>(g_.nx) * static_cast<std::size_t>(g_.ny + 1); }
  std::size_t edge_count() const {
    return horizontal_count() + static_cast<std::size_t>(g_.nx + 1) * static_cast<std::size_t>(g_.ny);
  }
  std::size_t h_edge(int cx, int cy) const {
    return static_cast<std::size_t>(cy) * static_cast<std::size_t>(g_.nx) + static_cast<std::size_t>(cx);
  }
  std::size_t v_edge(int cx, int cy) const {
    return horizontal_count() + static_cast<std::size_t>(cy) * static_cast<std::size_t>(g_.nx + 1) +
           static_cast<std::size_t>(cx);
  }

  struct EdgeInfo {
    std::size_t a, b;  // corners
    int first, second;  // below/left label, above/right label
  };
  EdgeInfo edge(std::size_t e) const {
    if (e < horizontal_count()) {
      const int cx = static_cast<int>(e % static_cast<std::size_t>(g_.nx));
      const int cy = static_cast<int>(e / static_cast<std::size_t>(g_.nx));
      return {corner(cx, cy), corner(cx + 1, cy), label(cx, cy - 1), label(cx, cy)};
    }
    const std::size_t f = e - horizontal_count();
    const int cx = static_cast<int>(f % static_cast<std::size_t>(g_.nx + 1));
    const int cy = static_cast<int>(f / static_cast<std::size_t>(g_.nx + 1));
    return {corner(cx, cy), corner(cx, cy + 1), label(cx - 1, cy), label(cx, cy)};
  }

  // Up to four edges meeting at a corner.
  std::vector<std::size_t> incident(std::size_t c) const {
    const int x = corner_x(c);
    const int y = corner_y(c);
    std::vector<std::size_t> out;
    if (x > 0) out.push_back(h_edge(x - 1, y));
    if (x < g_.nx) out.push_back(h_edge(x, y));
    if (y > 0) out.push_back(v_edge(x, y - 1));
    if (y < g_.ny) out.push_back(v_edge(x, y));
    return out;
  }

  const GridSpec& grid() const { return g_; }

 private:
  const Labeling& lab_;
  const GridSpec& g_;
};

int distinct(const std::array<int, 4>& w) {
  std::array<int, 4> s = w;
  std::sort(s.begin(), s.end());
  return static_cast<int>(std::unique(s.begin(), s.end()) - s.begin());
}

bool is_split_corner(const std::array<int, 4>& w) {
  const int d = distinct(w);
  // Checkerboard: diagonal pairs equal, the two diagonals differ.
  return d >= 3 || (d == 2 && w[0] == w[3] && w[1] == w[2]);
}

double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

}  // namespace

std::vector<InterfacePolyline> extract_interfaces(const Labeling& labeling) {
  const DualGrid dual(labeling);
  const std::size_t ne = dual.edge_count();
  std::vector<std::uint8_t> traced(ne, 0);
  for (std::size_t e = 0; e < ne; ++e) {
    const auto info = dual.edge(e);
    traced[e] = info.first != info.second && info.first != Labeling::kOutside && info.second != Labeling::kOutside;
  }
  std::vector<std::int8_t> split(dual.corner_count(), -1);
  auto is_split = [&](std::size_t c) {
    if (split[c] < 0) split[c] = is_split_corner(dual.window(c)) ? 1 : 0;
    return split[c] == 1;
  };

  std::vector<std::uint8_t> used(ne, 0);
  std::vector<InterfacePolyline> out;

  // Walk from corner `start` along edge `e` until a split corner, or back to
  // `start` for a loop.
  auto walk = [&](std::size_t start, std::size_t e) {
    const auto first = dual.edge(e);
    InterfacePolyline p;
    p.j = std::min(first.first, first.second);
    p.k = std::max(first.first, first.second);
    std::vector<std::size_t> corners{start};
    std::size_t at = start;
    std::size_t edge = e;
    while (true) {
      used[edge] = 1;
      const auto info = dual.edge(edge);
      at = info.a == at ? info.b : info.a;
      corners.push_back(at);
      if (at == start || is_split(at)) break;
      std::size_t next = ne;
      for (std::size_t f : dual.incident(at))
        if (traced[f] && !used[f]) {
          next = f;
          break;
        }
      if (next == ne) break;
      edge = next;
    }
    for (std::size_t c : corners) p.vertices.push_back(dual.position(c));
    p.closed = corners.size() > 2 && corners.front() == corners.back();
    p.length = static_cast<double>(corners.size() - 1) * dual.grid().spacing;
    // Side of j: on the first edge, j's pixel centre against the direction.
    const auto& g = dual.grid();
    const Point a = p.vertices[0];
    const Point b = p.vertices[1];
    const Point mid{(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
    const bool horizontal = e < dual.horizontal_count();
    // Pixel carrying info.first lies below (horizontal) or left (vertical).
    const Point first_side = horizontal ? Point{mid.x, mid.y - g.spacing / 2.0} : Point{mid.x - g.spacing / 2.0, mid.y};
    const bool first_left = cross(a, b, first_side) > 0.0;
    p.j_on_left = (first.first == p.j) == first_left;
    out.push_back(std::move(p));
  };

  // Open pieces first: every traced edge at a split corner starts one.
  for (std::size_t e = 0; e < ne; ++e) {
    if (!traced[e] || used[e]) continue;
    const auto info = dual.edge(e);
    if (is_split(info.a)) walk(info.a, e);
    else if (is_split(info.b)) walk(info.b, e);
  }
  // Whatever is left forms closed loops.
  for (std::size_t e = 0; e < ne; ++e)
    if (traced[e] && !used[e]) walk(dual.edge(e).a, e);
  return out;
}

ArcFit fit_arc(const InterfacePolyline& polyline) { return fit_arc(polyline.vertices, polyline.j_on_left); }

ArcFit fit_arc(const std::vector<Point>& vertices, bool j_on_left) {
  std::vector<Point> pts = vertices;
  if (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  if (pts.size() < 5) throw TooShort("arc fit needs at least five vertices");
  const double n = static_cast<double>(pts.size());
  double length = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i)
    length += std::hypot(vertices[i].x - vertices[i - 1].x, vertices[i].y - vertices[i - 1].y);

  double xm = 0.0, ym = 0.0;
  for (const Point& p : pts) {
    xm += p.x;
    ym += p.y;
  }
  xm /= n;
  ym /= n;
  double mxx = 0, myy = 0, mxy = 0, mxz = 0, myz = 0, mzz = 0;
  for (const Point& p : pts) {
    const double x = p.x - xm;
    const double y = p.y - ym;
    const double z = x * x + y * y;
    mxx += x * x;
    myy += y * y;
    mxy += x * y;
    mxz += x * z;
    myz += y * z;
    mzz += z * z;
  }
  mxx /= n;
  myy /= n;
  mxy /= n;
  mxz /= n;
  myz /= n;
  mzz /= n;

  ArcFit fit;
  // Newton on the Pratt characteristic polynomial, starting at 0.
  const double mz = mxx + myy;
  const double cov = mxx * myy - mxy * mxy;
  const double a2 = 4.0 * cov - 3.0 * mz * mz - mzz;
  const double a1 = mzz * mz + 4.0 * cov * mz - mxz * mxz - myz * myz - mz * mz * mz;
  const double a0 = mxz * mxz * myy + myz * myz * mxx - mzz * cov - 2.0 * mxz * myz * mxy + mz * mz * cov;
  double x = 0.0;
  double y = a0;
  for (int it = 0; it < 50; ++it) {
    const double dy = a1 + x * (2.0 * a2 + 16.0 * x * x);
    const double xn = x - y / dy;
    if (xn == x || !std::isfinite(xn)) break;
    const double yn = a0 + xn * (a1 + xn * (a2 + 4.0 * xn * xn));
    if (std::abs(yn) >= std::abs(y)) break;
    x = xn;
    y = yn;
  }
  const double det = x * x - x * mz + cov;
  const double cx = (mxz * (myy - x) - myz * mxy) / det / 2.0;
  const double cy = (myz * (mxx - x) - mxz * mxy) / det / 2.0;
  const double radius = std::sqrt(cx * cx + cy * cy + mz + 2.0 * x);

  if (std::isfinite(radius) && radius > 0.0 && radius <= 50.0 * length) {
    fit.kind = ArcKind::kCircle;
    fit.center = {cx + xm, cy + ym};
    fit.radius = radius;
    double ss = 0.0;
    double side = 0.0;
    for (const Point& p : pts) {
      const double d = std::hypot(p.x - fit.center.x, p.y - fit.center.y) - radius;
      ss += d * d;
    }
    for (std::size_t i = 1; i < vertices.size(); ++i) side += cross(vertices[i - 1], vertices[i], fit.center);
    fit.rms_residual = std::sqrt(ss / n);
    const bool center_left = side > 0.0;
    fit.signed_curvature = (center_left == j_on_left ? 1.0 : -1.0) / radius;
    return fit;
  }

  // Total least squares line: major axis of the scatter.
  fit.kind = ArcKind::kLine;
  fit.point = {xm, ym};
  const double theta = 0.5 * std::atan2(2.0 * mxy, mxx - myy);
  fit.direction = {std::cos(theta), std::sin(theta)};
  double ss = 0.0;
  for (const Point& p : pts) {
    const double d = -(p.x - xm) * fit.direction.y + (p.y - ym) * fit.direction.x;
    ss += d * d;
  }
  fit.rms_residual = std::sqrt(ss / n);
  fit.signed_curvature = 0.0;
  return fit;
}

double expected_curvature(int j, int k, const std::vector<ChamberStat>& stats) {
  const int n = static_cast<int>(stats.size());
  if (j < 1 || j > n) throw InvalidArgument("expected curvature needs a chamber j in 1..N");
  if (k < 0 || k > n || k == j) throw InvalidArgument("expected curvature needs k in 0..N, k != j");
  const ChamberStat& ej = stats[static_cast<std::size_t>(j - 1)];
  if (k == 0) return ej.ratio;
  const ChamberStat& ek = stats[static_cast<std::size_t>(k - 1)];
  return (ek.area * ej.ratio - ej.area * ek.ratio) / (ej.area + ek.area);
}

std::vector<TriplePoint> triple_points(const Labeling& labeling) {
  const DualGrid dual(labeling);
  const std::size_t nc = dual.corner_count();
  std::vector<std::uint8_t> hit(nc, 0);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto w = dual.window(c);
    if (std::find(w.begin(), w.end(), Labeling::kOutside) != w.end()) continue;
    hit[c] = distinct(w) >= 3;
  }
  std::vector<TriplePoint> out;
  std::vector<std::uint8_t> seen(nc, 0);
  const auto& g = labeling.grid();
  for (std::size_t c = 0; c < nc; ++c) {
    if (!hit[c] || seen[c]) continue;
    std::vector<std::size_t> stack{c};
    seen[c] = 1;
    TriplePoint tp;
    std::size_t count = 0;
    while (!stack.empty()) {
      const std::size_t at = stack.back();
      stack.pop_back();
      const Point p = dual.position(at);
      tp.position.x += p.x;
      tp.position.y += p.y;
      ++count;
      for (int l : dual.window(at))
        if (std::find(tp.labels.begin(), tp.labels.end(), l) == tp.labels.end()) tp.labels.push_back(l);
      const int x = dual.corner_x(at);
      const int y = dual.corner_y(at);
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const int qx = x + dx;
          const int qy = y + dy;
          if (qx < 0 || qy < 0 || qx > g.nx || qy > g.ny) continue;
          const std::size_t q = dual.corner(qx, qy);
          if (hit[q] && !seen[q]) {
            seen[q] = 1;
            stack.push_back(q);
          }
        }
    }
    tp.position.x /= static_cast<double>(count);
    tp.position.y /= static_cast<double>(count);
    std::sort(tp.labels.begin(), tp.labels.end());
    out.push_back(std::move(tp));
  }
  return out;
}

double domain_diameter(const DomainMask& domain) {
  const GridSpec& g = domain.grid();
  std::vector<Point> pts;
  for (std::size_t i : domain.inside().indices()) pts.push_back(g.center(i));
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  // Monotone chain hull, then all hull pairs.
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  double best = 0.0;
  for (std::size_t a = 0; a < hull.size(); ++a)
    for (std::size_t b = a + 1; b < hull.size(); ++b)
      best = std::max(best, std::hypot(hull[a].x - hull[b].x, hull[a].y - hull[b].y));
  return best;
}

namespace {

constexpr int kContactBand = 3;

// Chebyshev pixel distance of every pixel to the nearest pixel outside Ω.
std::vector<int> outside_distance(const Labeling& labeling) {
  const GridSpec& g = labeling.grid();
  std::vector<int> dist(g.size(), -1);
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (labeling.at(i) == Labeling::kOutside) {
      dist[i] = 0;
      queue.push_back(i);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t i = queue[head];
    const int x = static_cast<int>(i % static_cast<std::size_t>(g.nx));
    const int y = static_cast<int>(i / static_cast<std::size_t>(g.nx));
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int u = x + dx, v = y + dy;
        if (u < 0 || v < 0 || u >= g.nx || v >= g.ny) continue;
        const std::size_t n = g.index(u, v);
        if (dist[n] >= 0) continue;
        dist[n] = dist[i] + 1;
        queue.push_back(n);
      }
  }
  return dist;
}

// A polyline whose every vertex is within `band` pixels of outside traces
// the boundary of Ω rather than a free interface.
bool hugs_boundary(const InterfacePolyline& p, const GridSpec& g, const std::vector<int>& dist, int band) {
  for (const Point& v : p.vertices) {
    const int cx = static_cast<int>(std::lround((v.x - g.origin.x) / g.spacing + 0.5));
    const int cy = static_cast<int>(std::lround((v.y - g.origin.y) / g.spacing + 0.5));
    int best = std::numeric_limits<int>::max();
    for (int y = cy - 1; y <= cy; ++y)
      for (int x = cx - 1; x <= cx; ++x)
        if (x >= 0 && y >= 0 && x < g.nx && y < g.ny && dist[g.index(x, y)] >= 0)
          best = std::min(best, dist[g.index(x, y)]);
    if (best > band) return false;
  }
  return true;
}

}  // namespace

StructureReport structure_report(const ClusterResult& result, const DomainMask& domain, double tolerance) {
  StructureReport rep;
  rep.tolerance = tolerance;
  rep.diameter = domain_diameter(domain);
  const double spacing = domain.grid().spacing;
  const double floor_curv = rep.diameter > 0.0 ? 1.0 / rep.diameter : 0.0;
  const std::vector<int> dist = outside_distance(result.labeling);
  for (const InterfacePolyline& p : extract_interfaces(result.labeling)) {
    InterfaceCheck c;
    c.j = p.j;
    c.k = p.k;
    c.length = p.length;
    // Exterior-chamber interfaces are measured from the chamber's side.
    c.expected = p.j == 0 ? expected_curvature(p.k, 0, result.stats) : expected_curvature(p.j, p.k, result.stats);
    c.contact = p.j == 0 && hugs_boundary(p, domain.grid(), dist, kContactBand);
    if (!c.contact && p.length >= 10.0 * spacing) {
      c.fit = fit_arc(p);
      if (p.j == 0) c.fit->signed_curvature = -c.fit->signed_curvature;
      c.relative_error =
          std::abs(std::abs(c.fit->signed_curvature) - std::abs(c.expected)) / std::max(std::abs(c.expected), floor_curv);
      c.pass = c.relative_error <= tolerance;
      rep.curvature_pass = rep.curvature_pass && c.pass;
    }
    rep.interfaces.push_back(std::move(c));
  }
  rep.triples = triple_points(result.labeling);
  rep.triple_count_pass = rep.triples.size() <= 4 * static_cast<std::size_t>(result.labeling.chambers());
  return rep;
}

}  // namespace cheeger
