#include "cheeger/spectral.hpp"

#include <cmath>
#include <numeric>

#include "cheeger/parallel.hpp"

namespace cheeger {

namespace {

// Laplacian restricted to the region, as neighbour lists in local indices.
class DirichletLaplacian {
 public:
  explicit DirichletLaplacian(const Region& region) : scale_(1.0 / region.grid().pixel_area()) {
    const GridSpec& g = region.grid();
    const auto pixels = region.indices();
    std::vector<std::int64_t> local(g.size(), -1);
    for (std::size_t n = 0; n < pixels.size(); ++n) local[pixels[n]] = static_cast<std::int64_t>(n);
    nbr_.assign(4 * pixels.size(), -1);
    for (std::size_t n = 0; n < pixels.size(); ++n) {
      const int x = g.column(pixels[n]);
      const int y = g.row(pixels[n]);
      const int dx[4] = {1, -1, 0, 0};
      const int dy[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d)
        if (g.in_bounds(x + dx[d], y + dy[d]))
          nbr_[4 * n + static_cast<std::size_t>(d)] = local[g.index(x + dx[d], y + dy[d])];
    }
  }

  std::size_t size() const { return nbr_.size() / 4; }

  void apply(const std::vector<double>& u, std::vector<double>& out) const {
    out.resize(u.size());
    for (std::size_t n = 0; n < u.size(); ++n) {
      double s = 4.0 * u[n];
      for (std::size_t d = 0; d < 4; ++d) {
        const std::int64_t m = nbr_[4 * n + d];
        if (m >= 0) s -= u[static_cast<std::size_t>(m)];
      }
      out[n] = scale_ * s;
    }
  }

 private:
  double scale_;
  std::vector<std::int64_t> nbr_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Conjugate gradients for L x = b starting from x.
void conjugate_gradient(const DirichletLaplacian& op, const std::vector<double>& b, std::vector<double>& x,
                        const EigSpec& spec) {
  std::vector<double> r(b.size()), p, q;
  op.apply(x, q);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = b[i] - q[i];
  p = r;
  double rr = dot(r, r);
  const double stop = spec.cg_tol * spec.cg_tol * dot(b, b);
  for (int it = 0; it < spec.max_cg && rr > stop; ++it) {
    op.apply(p, q);
    const double alpha = rr / dot(p, q);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    const double next = dot(r, r);
    const double beta = next / rr;
    rr = next;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
  }
  if (rr > stop) throw NonConvergence("conjugate gradients did not reach the inner tolerance");
}

void normalize(std::vector<double>& u) {
  const double n = std::sqrt(dot(u, u));
  for (double& v : u) v /= n;
}

}  // namespace

double rayleigh_quotient(const Region& region, const std::vector<double>& u) {
  const DirichletLaplacian op(region);
  if (u.size() != op.size()) throw InvalidArgument("vector does not match the region");
  std::vector<double> lu;
  op.apply(u, lu);
  return dot(u, lu) / dot(u, u);
}

EigResult lambda1(const Region& region, const EigSpec& spec) {
  if (region.empty()) throw InvalidArgument("eigenvalue needs a nonempty region");
  const DirichletLaplacian op(region);
  EigResult out;
  std::vector<double> u(op.size(), 1.0);
  normalize(u);
  std::vector<double> lu;
  op.apply(u, lu);
  double lambda = dot(u, lu);
  std::vector<double> x = u;
  for (int it = 1; it <= spec.max_iter; ++it) {
    // Warm start: for an eigenvector, L⁻¹u = u/λ.
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = u[i] / lambda;
    conjugate_gradient(op, u, x, spec);
    u = x;
    normalize(u);
    op.apply(u, lu);
    const double next = dot(u, lu);
    out.iterations = it;
    const bool settled = std::abs(next - lambda) < spec.rel_tol * next;
    lambda = next;
    double rn = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) rn += (lu[i] - lambda * u[i]) * (lu[i] - lambda * u[i]);
    if (settled && std::sqrt(rn) / lambda < spec.residual_tol) {
      out.lambda1 = lambda;
      out.residual = std::sqrt(rn) / lambda;
      if (std::accumulate(u.begin(), u.end(), 0.0) < 0.0)
        for (double& v : u) v = -v;
      out.eigenvector = std::move(u);
      return out;
    }
  }
  throw NonConvergence("inverse iteration did not settle within " + std::to_string(spec.max_iter) + " steps");
}

double bessel_j0_first_zero() {
  double lo = 2.0, hi = 3.0;  // J0(2) > 0 > J0(3)
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::cyl_bessel_j(0.0, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

EigCheck cheeger_eig_check(const Region& region, double tol, const EigSpec& spec) {
  EigCheck c;
  c.lambda1 = lambda1(region, spec).lambda1;
  c.cheeger = cheeger_solve(region).ratio;
  c.bound = 0.25 * c.cheeger * c.cheeger;
  c.pass = c.lambda1 >= c.bound * (1.0 - tol);
  return c;
}

ChainCheck partition_chain_check(const ClusterResult& result, double tol, const EigSpec& spec, int threads) {
  const int n = result.labeling.chambers();
  ChainCheck out;
  out.chambers.resize(static_cast<std::size_t>(n));
  parallel_for(out.chambers.size(), threads, [&](std::size_t i) {
    out.chambers[i] = cheeger_eig_check(result.labeling.chamber(static_cast<int>(i) + 1), tol, spec);
  });
  double half_sum = 0.0;
  for (const EigCheck& c : out.chambers) {
    out.sum_lambda += c.lambda1;
    out.sum_cheeger += c.bound;
    half_sum += 0.5 * c.cheeger;
  }
  out.jensen = half_sum * half_sum / n;
  out.eig_pass = out.sum_lambda >= out.sum_cheeger * (1.0 - tol);
  out.jensen_pass = out.sum_cheeger >= out.jensen * (1.0 - tol);
  return out;
}

}  // namespace cheeger
