#include "cheeger/bounds.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "cheeger/cheeger_single.hpp"

namespace cheeger {

namespace {

void check_lower_args(int n, double domain_area) {
  if (n < 1) throw InvalidArgument("N must be at least 1");
  if (!(domain_area > 0.0)) throw InvalidArgument("domain area must be positive");
}

// √π h(B) with h(B) from the convex oracle (= 2).
double cheeger_inequality_constant() { return std::sqrt(std::numbers::pi) * unit_disk_cheeger(); }

int worst_chamber(const ClusterResult& r) {
  std::size_t worst = 0;
  for (std::size_t c = 1; c < r.stats.size(); ++c)
    if (r.stats[c].ratio > r.stats[worst].ratio) worst = c;
  return static_cast<int>(worst) + 1;
}

}  // namespace

double lower_bound_direct(int n, double domain_area) {
  check_lower_args(n, domain_area);
  return cheeger_inequality_constant() * std::pow(n, 1.5) / std::sqrt(domain_area);
}

double lower_bound_recursive(int n, double domain_area) {
  check_lower_args(n, domain_area);
  double sum = 1.0;
  for (int m = 2; m <= n; ++m) sum += std::sqrt(static_cast<double>(m));
  return cheeger_inequality_constant() * sum / std::sqrt(domain_area);
}

double lower_bound(int n, double domain_area) {
  return std::max(lower_bound_direct(n, domain_area), lower_bound_recursive(n, domain_area));
}

double honeycomb_line(int n, double domain_area) {
  check_lower_args(n, domain_area);
  return unit_hexagon_cheeger() * std::pow(n, 1.5) / std::sqrt(domain_area);
}

HexUpperBound hex_upper_bound(const DomainMask& domain, int n) {
  if (n < 1) throw InvalidArgument("N must be at least 1");
  const double h_hex = unit_hexagon_cheeger();
  const Region eroded = eroded_interior(domain);
  HexUpperBound out;
  const double floor_area = 16.0 * domain.grid().pixel_area();
  const double step = std::pow(2.0, -1.0 / 16.0);
  for (double delta = domain.area(); delta >= floor_area; delta *= step) {
    // Every smaller tile needs k ≥ N, so the bound cannot beat N h(H)/√δ.
    if (out.value && n * h_hex / std::sqrt(delta) >= *out.value) break;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        HexPlacement p = place_hexagons(domain, eroded, delta, {a / 5.0, b / 5.0});
        if (p.k < n) continue;
        const double value = p.k * h_hex / std::sqrt(delta);
        if (!out.value || value < *out.value) {
          out.value = value;
          out.placement = std::move(p);
        }
      }
  }
  return out;
}

double chamber_area_bound(double h_n, double h_next) {
  if (!(h_next > h_n)) throw NonMonotoneInput("chamber area bound needs H_{N+1} > H_N");
  const double gap = h_next - h_n;
  const double hb = unit_disk_cheeger();
  return hb * hb * std::numbers::pi / (gap * gap);
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InvalidArgument("slope fit needs matching x and y");
  if (x.size() < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

bool BracketSweep::all_ok() const {
  for (const auto& r : reports)
    if (!r.lower_ok || !r.upper_ok) return false;
  return true;
}

BracketSweep bracket_sweep(const DomainMask& domain, const std::vector<int>& n_range, const ClusterConfig& cfg,
                           const BracketTolerances& tol) {
  if (n_range.empty()) throw InvalidArgument("N range is empty");
  for (std::size_t i = 0; i < n_range.size(); ++i) {
    if (n_range[i] < 1) throw InvalidArgument("N must be at least 1");
    if (i > 0 && n_range[i] <= n_range[i - 1]) throw InvalidArgument("N range must be strictly ascending");
  }

  BracketSweep out;
  for (int n : n_range) {
    ClusterConfig c = cfg;
    c.chambers = n;
    out.clusters.push_back(solve(domain, c));
  }
  // Nested family: a cluster for a larger N minus its worst chambers is a
  // start for the smaller N whose energy is already below the larger Ĥ.
  for (std::size_t i = n_range.size() - 1; i-- > 0;) {
    Labeling start = out.clusters[i + 1].labeling;
    ClusterResult donor = out.clusters[i + 1];
    while (start.chambers() > n_range[i]) {
      start = drop_chamber(start, worst_chamber(donor));
      donor.stats = chamber_stats(start, domain);
    }
    ClusterConfig c = cfg;
    c.chambers = n_range[i];
    ClusterResult nested = descend(std::move(start), domain, c, c.restarts);
    if (nested.energy < out.clusters[i].energy) out.clusters[i] = std::move(nested);
  }

  const double area = domain.area();
  std::vector<double> ns, hs;
  for (std::size_t i = 0; i < n_range.size(); ++i) {
    BoundReport r;
    r.n = n_range[i];
    r.lower_direct = lower_bound_direct(r.n, area);
    r.lower_recursive = lower_bound_recursive(r.n, area);
    r.lower = std::max(r.lower_direct, r.lower_recursive);
    r.upper_hex = hex_upper_bound(domain, r.n).value;
    r.h_hat = out.clusters[i].energy;
    r.lower_ok = r.lower <= *r.h_hat * (1.0 + tol.lower);
    r.upper_ok = !r.upper_hex || *r.h_hat <= *r.upper_hex * (1.0 + tol.upper);
    out.reports.push_back(r);
    ns.push_back(r.n);
    hs.push_back(*r.h_hat);
  }
  const std::size_t keep = std::max<std::size_t>(2, (ns.size() + 1) / 2);
  if (ns.size() >= 2) {
    const std::size_t from = ns.size() - std::min(keep, ns.size());
    out.slope = loglog_slope(std::vector<double>(ns.begin() + static_cast<std::ptrdiff_t>(from), ns.end()),
                             std::vector<double>(hs.begin() + static_cast<std::ptrdiff_t>(from), hs.end()));
  }
  return out;
}

std::string bracket_csv(const BracketSweep& sweep) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "N,lower_direct,lower_recursive,upper_hex,H_hat,slope\n";
  for (std::size_t i = 0; i < sweep.reports.size(); ++i) {
    const BoundReport& r = sweep.reports[i];
    os << r.n << ',' << r.lower_direct << ',' << r.lower_recursive << ',';
    if (r.upper_hex) os << *r.upper_hex;
    os << ',';
    if (r.h_hat) os << *r.h_hat;
    os << ',';
    if (i + 1 == sweep.reports.size() && sweep.slope) os << *sweep.slope;
    os << '\n';
  }
  return os.str();
}

}  // namespace cheeger
