#pragma once

// Two-sided brackets for the N-Cheeger constant: a lower bound from the
// planar Cheeger inequality and an upper bound from packing hexagons.

#include <optional>
#include <string>
#include <vector>

#include "cheeger/cheeger_cluster.hpp"
#include "cheeger/hex_lattice.hpp"

namespace cheeger {

// 2√π N^{3/2} / √|Ω|.
double lower_bound_direct(int n, double domain_area);
// 2√π/√|Ω| + Σ_{m=2..N} 2√π √m / √|Ω|.
double lower_bound_recursive(int n, double domain_area);
// Max of the two. Throws InvalidArgument for N < 1 or |Ω| ≤ 0.
double lower_bound(int n, double domain_area);

// N^{3/2} h(H) / √|Ω|: the honeycomb asymptote, conjectural, for comparison only.
double honeycomb_line(int n, double domain_area);

struct HexUpperBound {
  std::optional<double> value;  // absent when no searched placement has k ≥ N
  HexPlacement placement;       // the minimizing placement (k = 0 if absent)
};

// min over tile areas δ (log grid, 16 steps per octave, down to 16 pixels)
// and 5×5 lattice offsets with k ≥ N of k h(H) / √δ.
HexUpperBound hex_upper_bound(const DomainMask& domain, int n);

// 4π / (Ĥ_{N+1} − Ĥ_N)²; diagnostic. Throws NonMonotoneInput unless
// Ĥ_{N+1} > Ĥ_N.
double chamber_area_bound(double h_n, double h_next);

struct BoundReport {
  int n = 0;
  double lower_direct = 0.0;
  double lower_recursive = 0.0;
  double lower = 0.0;
  std::optional<double> upper_hex;
  std::optional<double> h_hat;
  bool lower_ok = true;  // lower ≤ Ĥ (1 + tol_lower)
  bool upper_ok = true;  // Ĥ ≤ upper (1 + tol_upper), vacuous if absent
};

struct BracketTolerances {
  double lower = 0.02;
  double upper = 0.05;
};

struct BracketSweep {
  std::vector<BoundReport> reports;
  std::vector<ClusterResult> clusters;  // one per N
  std::optional<double> slope;          // log Ĥ vs log N over the top half of N
  bool all_ok() const;
};

// Least-squares slope of log y against log x; absent for fewer than two points.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Solves every N of the ascending range with cfg (chambers overridden), then
// walks down the range re-descending each N from the next larger cluster
// with its worst chambers dropped, so the best energies increase with N.
BracketSweep bracket_sweep(const DomainMask& domain, const std::vector<int>& n_range, const ClusterConfig& cfg,
                           const BracketTolerances& tol = {});

// Columns N, lower_direct, lower_recursive, upper_hex, H_hat, slope; absent
// values are empty cells, slope only on the last row.
std::string bracket_csv(const BracketSweep& sweep);

}  // namespace cheeger
