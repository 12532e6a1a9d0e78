#pragma once

// Classical Cheeger problem on a pixel region A:
//   h(A) = min over nonempty E ⊆ A of perimeter(E) / area(E),
// solved by Dinkelbach iteration where every step is one minimum cut.

#include <cstddef>
#include <span>
#include <vector>

#include "cheeger/grid_domain.hpp"
#include "cheeger/maxflow.hpp"

namespace cheeger {

struct SolverTolerances {
  // Absolute threshold on the subproblem minimum; <= 0 selects the default
  // 1e-7 · area(A).
  double eps_dinkelbach = 0.0;
  int max_iter = 100;
  MaxflowAlgorithm engine = MaxflowAlgorithm::kPushRelabel;

  double resolved_eps(double region_area) const {
    return eps_dinkelbach > 0.0 ? eps_dinkelbach : 1e-7 * region_area;
  }
};

struct DinkelbachStep {
  double lambda;
  double subproblem_min;
};

struct CheegerResult {
  double ratio = 0.0;  // perimeter(set) / area(set)
  Region set;
  std::vector<DinkelbachStep> trace;
  int iterations = 0;
  double eps_used = 0.0;
};

struct SubproblemResult {
  double value = 0.0;  // min over E ⊆ A of perimeter(E) − λ·area(E); ≤ 0
  Region minimizer;    // maximal minimizer
};

// Min-cut formulation of min_{E ⊆ A} perimeter(E) − λ area(E). Keeps the
// graph topology between calls so successive λ only touch t-links.
class RatioSubproblem {
 public:
  RatioSubproblem(const Region& a, const NeighborStencil& stencil,
                  MaxflowAlgorithm engine = MaxflowAlgorithm::kPushRelabel);

  SubproblemResult solve(double lambda) const;

 private:
  GridSpec grid_;
  MaxflowAlgorithm engine_;
  double area_ = 0.0;
  std::vector<std::size_t> pixels_;  // local node -> grid index
  FlowNetwork net_;                  // sink caps and n-links; source caps set per λ
};

SubproblemResult ratio_subproblem(const Region& a, double lambda, const NeighborStencil& stencil);
SubproblemResult ratio_subproblem(const Region& a, double lambda);

// Throws InvalidArgument if A is empty, MaxIterExceeded if the iteration
// does not settle within tol.max_iter steps.
CheegerResult cheeger_solve(const Region& a, const SolverTolerances& tol, const NeighborStencil& stencil);
// Same, starting from λ0 = min(P(A)/|A|, P(warm)/|warm|); warm ⊆ A, nonempty.
CheegerResult cheeger_solve(const Region& a, const SolverTolerances& tol, const NeighborStencil& stencil,
                            const Region& warm);
CheegerResult cheeger_solve(const Region& a, const SolverTolerances& tol = {});

// Continuum Cheeger constant of a convex set: 1/r where the inner parallel
// set at distance r has area π r². Accepts disks, rectangles, regular
// polygons; throws NotConvex for CSG composites.
double inner_cheeger_convex(const ShapeExpr& shape);
// Convex polygon given by counter-clockwise vertices. Throws NotConvex.
double inner_cheeger_convex(std::span<const Point> ccw_vertices);

// h of the unit disk and of the unit-area regular hexagon, both from the
// convex oracle.
double unit_disk_cheeger();
double unit_hexagon_cheeger();

}  // namespace cheeger
