#pragma once

// First Dirichlet eigenvalue of the 5-point Laplacian on a pixel region and
// the eigenvalue inequalities that tie it to Cheeger constants.

#include <vector>

#include "cheeger/cheeger_cluster.hpp"

namespace cheeger {

struct EigSpec {
  double rel_tol = 1e-8;    // stop when successive estimates differ by less
  double residual_tol = 1e-6;  // ... and the eigen-residual is below this
  int max_iter = 500;       // inverse power steps
  double cg_tol = 1e-10;    // relative residual of each inner solve
  int max_cg = 20000;
};

struct EigResult {
  double lambda1 = 0.0;
  int iterations = 0;
  double residual = 0.0;             // ‖Lu − λu‖ / (λ ‖u‖)
  std::vector<double> eigenvector;   // one entry per region pixel, index order, unit 2-norm
};

// Zero Dirichlet data on every pixel outside the region. Throws
// InvalidArgument for an empty region, NonConvergence past max_iter.
EigResult lambda1(const Region& region, const EigSpec& spec = {});

// u·Lu / u·u for u given on the region's pixels in index order.
double rayleigh_quotient(const Region& region, const std::vector<double>& u);

// First positive zero of J0, by bisection on std::cyl_bessel_j.
double bessel_j0_first_zero();

struct EigCheck {
  double lambda1 = 0.0;
  double cheeger = 0.0;
  double bound = 0.0;  // (h/2)²
  bool pass = true;    // λ₁ ≥ bound (1 − tol)
};

EigCheck cheeger_eig_check(const Region& region, double tol = 0.02, const EigSpec& spec = {});

struct ChainCheck {
  std::vector<EigCheck> chambers;
  double sum_lambda = 0.0;   // Σ λ₁(E_i): a feasible value for the eigenvalue partition problem
  double sum_cheeger = 0.0;  // Σ (h(E_i)/2)²
  double jensen = 0.0;       // (1/N) (Σ h(E_i)/2)²
  bool eig_pass = true;      // sum_lambda ≥ sum_cheeger (1 − tol)
  bool jensen_pass = true;   // sum_cheeger ≥ jensen (1 − tol)
  bool pass() const { return eig_pass && jensen_pass; }
};

// Per-chamber eigensolves run on `threads` workers (0 = hardware).
ChainCheck partition_chain_check(const ClusterResult& result, double tol = 0.02, const EigSpec& spec = {},
                                 int threads = 0);

}  // namespace cheeger
