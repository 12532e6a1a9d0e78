#include "cheeger/cheeger_single.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <variant>

#include "cheeger/error.hpp"

namespace cheeger {

RatioSubproblem::RatioSubproblem(const Region& a, const NeighborStencil& stencil, MaxflowAlgorithm engine)
    : grid_(a.grid()), engine_(engine), area_(area(a)), pixels_(a.indices()), net_(pixels_.size()) {
  std::vector<std::int64_t> local(grid_.size(), -1);
  for (std::size_t n = 0; n < pixels_.size(); ++n) local[pixels_[n]] = static_cast<std::int64_t>(n);

  // Keeping p costs the weight of every stencil pair leaving A (sink side);
  // pairs inside A become n-links, each added once from the +offset end.
  for (std::size_t n = 0; n < pixels_.size(); ++n) {
    const int x = grid_.column(pixels_[n]);
    const int y = grid_.row(pixels_[n]);
    for (const Direction& d : stencil.directions()) {
      for (int sign : {1, -1}) {
        const int qx = x + sign * d.dx;
        const int qy = y + sign * d.dy;
        const std::int64_t q = grid_.in_bounds(qx, qy) ? local[grid_.index(qx, qy)] : -1;
        if (q < 0) {
          net_.sink_cap[n] += d.weight;
        } else if (sign == 1) {
          net_.add_edge(n, static_cast<std::size_t>(q), d.weight);
        }
      }
    }
  }
}

SubproblemResult RatioSubproblem::solve(double lambda) const {
  FlowNetwork net = net_;
  const double reward = lambda * grid_.pixel_area();
  for (double& c : net.source_cap) c = reward;
  const CutResult cut = min_cut(net, engine_);

  SubproblemResult out;
  out.minimizer = Region(grid_);
  for (std::size_t n = 0; n < pixels_.size(); ++n)
    if (cut.source_side[n]) out.minimizer.insert(pixels_[n]);
  // cut = P(E) + λ (|A| − |E|)
  out.value = std::min(0.0, cut.value - lambda * area_);
  if (out.minimizer.empty()) out.value = 0.0;
  return out;
}

SubproblemResult ratio_subproblem(const Region& a, double lambda, const NeighborStencil& stencil) {
  if (a.empty()) throw InvalidArgument("ratio subproblem needs a nonempty region");
  if (!(lambda > 0.0)) throw InvalidArgument("ratio subproblem needs lambda > 0");
  return RatioSubproblem(a, stencil).solve(lambda);
}

SubproblemResult ratio_subproblem(const Region& a, double lambda) {
  return ratio_subproblem(a, lambda, NeighborStencil::calibrated(a.grid().spacing));
}

namespace {

CheegerResult dinkelbach(const Region& a, const SolverTolerances& tol, const NeighborStencil& stencil,
                         const Region* warm) {
  if (a.empty()) throw InvalidArgument("Cheeger problem needs a nonempty region");
  if (tol.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");

  CheegerResult result;
  result.eps_used = tol.resolved_eps(area(a));
  Region current = a;
  double lambda = perimeter(a, stencil) / area(a);
  if (warm != nullptr) {
    if (warm->empty() || !warm->subset_of(a)) throw InvalidArgument("warm start must be a nonempty subset of A");
    const double warm_ratio = perimeter(*warm, stencil) / area(*warm);
    if (warm_ratio < lambda) {
      lambda = warm_ratio;
      current = *warm;
    }
  }

  // Step k searches inside the maximal minimizer of step k − 1: maximal
  // minimizers shrink as λ decreases.
  Region search = a;
  for (int k = 0; k < tol.max_iter; ++k) {
    SubproblemResult step = RatioSubproblem(search, stencil, tol.engine).solve(lambda);
    result.trace.push_back({lambda, step.value});
    result.iterations = k + 1;
    if (step.minimizer.empty() || step.value >= -result.eps_used) {
      // The final maximal minimizer is kept when it is at least as good:
      // chambers then grab every pixel they can at the optimal ratio.
      if (!step.minimizer.empty()) {
        const double r = perimeter(step.minimizer, stencil) / area(step.minimizer);
        if (r <= lambda) {
          result.ratio = r;
          result.set = std::move(step.minimizer);
          return result;
        }
      }
      result.ratio = perimeter(current, stencil) / area(current);
      result.set = std::move(current);
      return result;
    }
    const double next = perimeter(step.minimizer, stencil) / area(step.minimizer);
    if (!(next < lambda)) {
      // Rounding left a negative minimum with no ratio improvement.
      result.ratio = perimeter(current, stencil) / area(current);
      result.set = std::move(current);
      return result;
    }
    lambda = next;
    search = step.minimizer;
    current = std::move(step.minimizer);
  }
  throw MaxIterExceeded("Dinkelbach iteration did not settle within " + std::to_string(tol.max_iter) + " steps");
}

}  // namespace

CheegerResult cheeger_solve(const Region& a, const SolverTolerances& tol, const NeighborStencil& stencil) {
  return dinkelbach(a, tol, stencil, nullptr);
}

CheegerResult cheeger_solve(const Region& a, const SolverTolerances& tol, const NeighborStencil& stencil,
                            const Region& warm) {
  return dinkelbach(a, tol, stencil, &warm);
}

CheegerResult cheeger_solve(const Region& a, const SolverTolerances& tol) {
  return cheeger_solve(a, tol, NeighborStencil::calibrated(a.grid().spacing));
}

// ---------------------------------------------------------------------------
// Continuum oracle

namespace {

// Smallest r with inner(r) = π r² on (0, hi), by bisection; inner(0) > 0
// and inner(hi) < π hi² are required.
template <class InnerArea>
double bisect_inner_radius(InnerArea inner, double hi) {
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inner(mid) - std::numbers::pi * mid * mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double inner_cheeger_convex(std::span<const Point> v) {
  const std::size_t n = v.size();
  if (n < 3) throw NotConvex("polygon needs at least 3 vertices");
  double area2 = 0.0;
  double perim = 0.0;
  double cot_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point prev = v[(i + n - 1) % n];
    const Point cur = v[i];
    const Point next = v[(i + 1) % n];
    const double ux = prev.x - cur.x, uy = prev.y - cur.y;
    const double wx = next.x - cur.x, wy = next.y - cur.y;
    // Counter-clockwise convexity: turn from (cur - prev) to (next - cur) is left.
    const double turn = (cur.x - prev.x) * (next.y - cur.y) - (cur.y - prev.y) * (next.x - cur.x);
    if (turn <= 0.0) throw NotConvex("polygon is not strictly convex and counter-clockwise");
    const double interior = std::acos(std::clamp((ux * wx + uy * wy) / (std::hypot(ux, uy) * std::hypot(wx, wy)), -1.0, 1.0));
    cot_sum += 1.0 / std::tan(0.5 * interior);
    area2 += cur.x * next.y - next.x * cur.y;
    perim += std::hypot(wx, wy);
  }
  const double a = 0.5 * area2;
  auto inner = [&](double r) { return a - perim * r + r * r * cot_sum; };
  return 1.0 / bisect_inner_radius(inner, 2.0 * a / perim);
}

double inner_cheeger_convex(const ShapeExpr& shape) {
  const auto& node = shape.node();
  if (const auto* d = std::get_if<Disk>(&node)) {
    const double big_r = d->radius;
    auto inner = [&](double r) { return std::numbers::pi * (big_r - r) * (big_r - r); };
    return 1.0 / bisect_inner_radius(inner, big_r);
  }
  if (const auto* r = std::get_if<Rect>(&node)) {
    const Point c = r->corner;
    const std::vector<Point> v{c, {c.x + r->width, c.y}, {c.x + r->width, c.y + r->height}, {c.x, c.y + r->height}};
    return inner_cheeger_convex(v);
  }
  if (const auto* p = std::get_if<RegularPolygon>(&node)) {
    const auto v = p->vertices();
    return inner_cheeger_convex(v);
  }
  throw NotConvex("inner Cheeger oracle accepts only disks and convex polygons");
}

double unit_disk_cheeger() { return inner_cheeger_convex(ShapeExpr::disk({0.0, 0.0}, 1.0)); }

double unit_hexagon_cheeger() {
  // Regular hexagon of area 1: area = (3√3/2) a² with side = circumradius a.
  const double a = std::sqrt(2.0 / (3.0 * std::sqrt(3.0)));
  return inner_cheeger_convex(ShapeExpr::regular_polygon(6, {0.0, 0.0}, a));
}

}  // namespace cheeger
