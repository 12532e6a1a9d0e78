#pragma once

// N-Cheeger clusters: minimize Σ_i P(E_i)/|E_i| over N disjoint chambers of
// Ω by block-coordinate sweeps, each block an exact Cheeger solve of
// A_i = Ω minus the other chambers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cheeger/cheeger_single.hpp"
#include "cheeger/grid_domain.hpp"

namespace cheeger {

enum class SeedStrategy { kHexGrid, kRandomVoronoi };

struct ClusterConfig {
  int chambers = 1;  // N
  int restarts = 1;
  SeedStrategy seed_strategy = SeedStrategy::kHexGrid;
  int max_sweeps = 60;
  double eps_energy = 1e-9;
  std::uint64_t rng_seed = 0;
  int threads = 0;  // worker count for restarts; 0 = hardware concurrency
  SolverTolerances tol;

  // Throws InvalidArgument.
  void check() const;
};

struct ChamberStat {
  double area = 0.0;
  double perimeter = 0.0;
  double ratio = 0.0;
  int components = 0;
  bool compactly_contained = false;  // no pixel stencil-adjacent to outside Ω
};

struct ClusterResult {
  Labeling labeling;
  std::vector<ChamberStat> stats;  // index i − 1 for chamber i
  double energy = 0.0;             // Σ ratio, on the discrete functional
  int sweeps = 0;
  std::vector<double> trace;       // energy after seeding, then after each sweep
  int restart_index = 0;
};

struct CheckVerdict {
  bool pass = true;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  CheckVerdict self_cheeger;             // max_i |h_i − h(A_i)| / h_i
  CheckVerdict volume_bound;             // worst (π/Ĥ² − |E_i|)/(π/Ĥ²)
  CheckVerdict indecomposable_interior;  // compact chambers with > 1 component
  CheckVerdict exterior_component_rule;  // compact E(0) components touching < 3 chambers
  CheckVerdict disjointness;             // |P(∪) − (Σ P − 2 Σ interfaces)|

  bool all_pass() const;
};

// Initial labeling for `restart`: restart 0 follows cfg.seed_strategy, later
// restarts use random Voronoi seeds. Throws TooFewPixels.
Labeling seed(const DomainMask& domain, const ClusterConfig& cfg, int restart = 0);

// Random Voronoi labeling from N distinct in-domain seed pixels.
Labeling random_voronoi_seed(const DomainMask& domain, int chambers, std::uint64_t rng_seed);
// Hexagonal seeds: tiles compactly inside Ω of the largest area ≤ |Ω|/N
// that admits N of them; the N closest to the centroid of Ω win. Empty if
// no tile area down to 16 pixels admits N tiles.
std::optional<Labeling> hex_grid_seed(const DomainMask& domain, int chambers);

// Nearest-seed labeling of all in-domain pixels; ties go to the lower label.
Labeling voronoi_labeling(const DomainMask& domain, const std::vector<Point>& seeds);

// One round-robin pass i = 1..N. Returns the new energy.
double sweep(Labeling& labeling, const DomainMask& domain, const SolverTolerances& tol = {});

std::vector<ChamberStat> chamber_stats(const Labeling& labeling, const DomainMask& domain);
double cluster_energy(const Labeling& labeling);

// Sweeps from `initial` until the energy drops by less than eps_energy, the
// labeling stops changing, or max_sweeps.
ClusterResult descend(Labeling initial, const DomainMask& domain, const ClusterConfig& cfg, int restart_index);

// Best over cfg.restarts seeded restarts plus any extra initial labelings
// (restart indices cfg.restarts, cfg.restarts + 1, ...). Ties go to the
// lower restart index.
ClusterResult solve(const DomainMask& domain, const ClusterConfig& cfg, const std::vector<Labeling>& extra = {});

// Drops chamber `label`: its pixels join E(0), higher labels shift down.
Labeling drop_chamber(const Labeling& labeling, int label);

ValidationReport validate(const ClusterResult& result, const DomainMask& domain, const SolverTolerances& tol = {});

}  // namespace cheeger
