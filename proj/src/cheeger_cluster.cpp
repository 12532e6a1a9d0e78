#include "cheeger/cheeger_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cheeger/hex_lattice.hpp"
#include "cheeger/parallel.hpp"

namespace cheeger {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Label of the pixel at (x, y); kOutside off the grid.
int label_at(const Labeling& lab, int x, int y) {
  return lab.grid().in_bounds(x, y) ? lab.at(x, y) : Labeling::kOutside;
}

// Per-chamber perimeters in one pass: each stencil pair whose labels differ
// charges its weight to every chamber label among its two ends.
std::vector<double> chamber_perimeters(const Labeling& lab, const NeighborStencil& stencil) {
  const GridSpec& g = lab.grid();
  std::vector<double> per(static_cast<std::size_t>(lab.chambers()) + 1, 0.0);
  for (int y = 0; y < g.ny; ++y)
    for (int x = 0; x < g.nx; ++x) {
      const int l = lab.at(x, y);
      if (l < 1) continue;
      for (const Direction& d : stencil.directions())
        for (int sign : {1, -1})
          if (label_at(lab, x + sign * d.dx, y + sign * d.dy) != l) per[static_cast<std::size_t>(l)] += d.weight;
    }
  return per;
}

bool touches_outside(const Region& r, const Labeling& lab) {
  const GridSpec& g = r.grid();
  for (std::size_t i : r.indices()) {
    const int x = g.column(i);
    const int y = g.row(i);
    for (const auto& o : NeighborStencil::kOffsets)
      for (int sign : {1, -1})
        if (label_at(lab, x + sign * o[0], y + sign * o[1]) == Labeling::kOutside) return true;
  }
  return false;
}

}  // namespace

void ClusterConfig::check() const {
  if (chambers < 1) throw InvalidArgument("need at least one chamber");
  if (restarts < 1) throw InvalidArgument("need at least one restart");
  if (max_sweeps < 1) throw InvalidArgument("max_sweeps must be at least 1");
  if (!(eps_energy > 0.0)) throw InvalidArgument("eps_energy must be positive");
  if (threads < 0) throw InvalidArgument("thread count must be non-negative");
}

bool ValidationReport::all_pass() const {
  return self_cheeger.pass && volume_bound.pass && indecomposable_interior.pass && exterior_component_rule.pass &&
         disjointness.pass;
}

Labeling voronoi_labeling(const DomainMask& domain, const std::vector<Point>& seeds) {
  const GridSpec& g = domain.grid();
  std::vector<int> labels(g.size(), Labeling::kOutside);
  for (std::size_t i : domain.inside().indices()) {
    const Point c = g.center(i);
    double best = 0.0;
    int arg = 0;
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const double dx = c.x - seeds[s].x;
      const double dy = c.y - seeds[s].y;
      const double d2 = dx * dx + dy * dy;
      if (s == 0 || d2 < best) {
        best = d2;
        arg = static_cast<int>(s) + 1;
      }
    }
    labels[i] = arg;
  }
  return Labeling(g, static_cast<int>(seeds.size()), std::move(labels));
}

Labeling random_voronoi_seed(const DomainMask& domain, int chambers, std::uint64_t rng_seed) {
  std::vector<std::size_t> pool = domain.inside().indices();
  if (chambers < 1) throw InvalidArgument("need at least one chamber");
  if (pool.size() < static_cast<std::size_t>(chambers))
    throw TooFewPixels("domain has fewer pixels than chambers");
  std::mt19937_64 rng(rng_seed);
  std::vector<Point> seeds;
  for (std::size_t k = 0; k < static_cast<std::size_t>(chambers); ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
    std::swap(pool[k], pool[pick(rng)]);
    seeds.push_back(domain.grid().center(pool[k]));
  }
  return voronoi_labeling(domain, seeds);
}

std::optional<Labeling> hex_grid_seed(const DomainMask& domain, int chambers) {
  if (chambers < 1) throw InvalidArgument("need at least one chamber");
  const GridSpec& g = domain.grid();
  const Region eroded = eroded_interior(domain);
  Point centroid;
  const auto pixels = domain.inside().indices();
  for (std::size_t i : pixels) {
    centroid.x += g.center(i).x;
    centroid.y += g.center(i).y;
  }
  centroid.x /= static_cast<double>(pixels.size());
  centroid.y /= static_cast<double>(pixels.size());

  const double floor_area = 16.0 * g.pixel_area();
  for (double delta = domain.area() / chambers; delta >= floor_area; delta *= 0.92) {
    HexPlacement p = best_placement(domain, eroded, delta);
    if (p.k < chambers) continue;
    auto dist = [&](const Point& c) { return std::hypot(c.x - centroid.x, c.y - centroid.y); };
    std::stable_sort(p.centres.begin(), p.centres.end(),
                     [&](const Point& a, const Point& b) { return dist(a) < dist(b); });
    p.centres.resize(static_cast<std::size_t>(chambers));
    return voronoi_labeling(domain, p.centres);
  }
  return std::nullopt;
}

Labeling seed(const DomainMask& domain, const ClusterConfig& cfg, int restart) {
  cfg.check();
  if (domain.inside().count() < static_cast<std::size_t>(cfg.chambers))
    throw TooFewPixels("domain has fewer pixels than chambers");
  if (cfg.chambers == 1) return Labeling(domain, 1, 1);
  if (restart == 0) {
    if (cfg.seed_strategy == SeedStrategy::kHexGrid) {
      if (auto hex = hex_grid_seed(domain, cfg.chambers)) return *hex;
    }
    return random_voronoi_seed(domain, cfg.chambers, cfg.rng_seed);
  }
  return random_voronoi_seed(domain, cfg.chambers, splitmix(cfg.rng_seed ^ splitmix(static_cast<std::uint64_t>(restart))));
}

double cluster_energy(const Labeling& labeling) {
  const GridSpec& g = labeling.grid();
  const auto per = chamber_perimeters(labeling, NeighborStencil::calibrated(g.spacing));
  std::vector<std::size_t> counts(per.size(), 0);
  for (int l : labeling.labels())
    if (l >= 1) ++counts[static_cast<std::size_t>(l)];
  double energy = 0.0;
  for (std::size_t c = 1; c < per.size(); ++c) {
    if (counts[c] == 0) throw ChamberVanished("chamber " + std::to_string(c) + " is empty");
    energy += per[c] / (static_cast<double>(counts[c]) * g.pixel_area());
  }
  return energy;
}

std::vector<ChamberStat> chamber_stats(const Labeling& labeling, const DomainMask& domain) {
  labeling.check(domain);
  const GridSpec& g = labeling.grid();
  const auto per = chamber_perimeters(labeling, NeighborStencil::calibrated(g.spacing));
  std::vector<ChamberStat> stats;
  for (int c = 1; c <= labeling.chambers(); ++c) {
    const Region r = labeling.chamber(c);
    ChamberStat s;
    s.area = static_cast<double>(r.count()) * g.pixel_area();
    s.perimeter = per[static_cast<std::size_t>(c)];
    s.ratio = s.perimeter / s.area;
    s.components = static_cast<int>(components(r).size());
    s.compactly_contained = !touches_outside(r, labeling);
    stats.push_back(s);
  }
  return stats;
}

double sweep(Labeling& labeling, const DomainMask& domain, const SolverTolerances& tol) {
  const GridSpec& g = labeling.grid();
  const auto stencil = NeighborStencil::calibrated(g.spacing);
  for (int c = 1; c <= labeling.chambers(); ++c) {
    Region a(g);
    Region current(g);
    for (std::size_t i : domain.inside().indices()) {
      const int l = labeling.at(i);
      if (l == 0 || l == c) a.insert(i);
      if (l == c) current.insert(i);
    }
    const CheegerResult r = current.empty() ? cheeger_solve(a, tol, stencil) : cheeger_solve(a, tol, stencil, current);
    if (r.set.empty()) throw ChamberVanished("chamber " + std::to_string(c) + " vanished during a sweep");
    for (std::size_t i : a.indices()) labeling.set(i, r.set.contains(i) ? c : 0);
  }
  return cluster_energy(labeling);
}

ClusterResult descend(Labeling initial, const DomainMask& domain, const ClusterConfig& cfg, int restart_index) {
  cfg.check();
  initial.check(domain);
  ClusterResult out{std::move(initial), {}, 0.0, 0, {}, restart_index};
  double energy = cluster_energy(out.labeling);
  out.trace.push_back(energy);
  while (out.sweeps < cfg.max_sweeps) {
    const Labeling before = out.labeling;
    const double next = sweep(out.labeling, domain, cfg.tol);
    ++out.sweeps;
    out.trace.push_back(next);
    // Each block step can only lower its own ratio.
    if (next > energy * (1.0 + 1e-12)) throw Error("energy increased during a sweep");
    const bool settled = out.labeling == before || energy - next < cfg.eps_energy;
    energy = next;
    if (settled) break;
  }
  out.energy = energy;
  out.stats = chamber_stats(out.labeling, domain);
  return out;
}

ClusterResult solve(const DomainMask& domain, const ClusterConfig& cfg, const std::vector<Labeling>& extra) {
  cfg.check();
  if (domain.inside().count() < static_cast<std::size_t>(cfg.chambers))
    throw TooFewPixels("domain has fewer pixels than chambers");
  for (const Labeling& l : extra)
    if (l.chambers() != cfg.chambers) throw InvalidArgument("extra initial labeling has the wrong chamber count");

  const std::size_t total = static_cast<std::size_t>(cfg.restarts) + extra.size();
  std::vector<std::optional<ClusterResult>> results(total);
  parallel_for(total, cfg.threads, [&](std::size_t k) {
    const int idx = static_cast<int>(k);
    Labeling init = k < static_cast<std::size_t>(cfg.restarts) ? seed(domain, cfg, idx)
                                                               : extra[k - static_cast<std::size_t>(cfg.restarts)];
    results[k] = descend(std::move(init), domain, cfg, idx);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < total; ++k)
    if (results[k]->energy < results[best]->energy) best = k;
  return std::move(*results[best]);
}

Labeling drop_chamber(const Labeling& labeling, int label) {
  if (label < 1 || label > labeling.chambers()) throw InvalidArgument("no such chamber");
  if (labeling.chambers() < 2) throw InvalidArgument("cannot drop the only chamber");
  std::vector<int> labels(labeling.labels().begin(), labeling.labels().end());
  for (int& l : labels) {
    if (l == label) l = 0;
    else if (l > label) --l;
  }
  return Labeling(labeling.grid(), labeling.chambers() - 1, std::move(labels));
}

ValidationReport validate(const ClusterResult& result, const DomainMask& domain, const SolverTolerances& tol) {
  ValidationReport rep;
  const Labeling& lab = result.labeling;
  const GridSpec& g = lab.grid();
  const auto stencil = NeighborStencil::calibrated(g.spacing);

  // Disjointness: one label per pixel by construction; the exact union
  // identity confirms no pixel pair is double counted.
  rep.disjointness.tolerance = 1e-9;
  try {
    lab.check(domain);
    std::vector<Region> chambers;
    for (int c = 1; c <= lab.chambers(); ++c) chambers.push_back(lab.chamber(c));
    const auto id = union_perimeter_identity(chambers, stencil);
    rep.disjointness.residual = std::abs(id.lhs - id.rhs) / std::max(1.0, id.lhs);
    rep.disjointness.pass = rep.disjointness.residual <= rep.disjointness.tolerance;
  } catch (const Error& e) {
    rep.disjointness.pass = false;
    rep.disjointness.residual = 1.0;
    rep.disjointness.detail = e.what();
  }

  const auto stats = chamber_stats(lab, domain);
  double energy = 0.0;
  for (const auto& s : stats) energy += s.ratio;

  // Self-Cheeger: each chamber is a Cheeger set of Ω minus the others.
  rep.self_cheeger.tolerance = 1e-4;
  for (int c = 1; c <= lab.chambers(); ++c) {
    Region a(g);
    for (std::size_t i : domain.inside().indices())
      if (lab.at(i) == 0 || lab.at(i) == c) a.insert(i);
    const double h = cheeger_solve(a, tol, stencil, lab.chamber(c)).ratio;
    const double own = stats[static_cast<std::size_t>(c - 1)].ratio;
    rep.self_cheeger.residual = std::max(rep.self_cheeger.residual, std::abs(own - h) / own);
  }
  rep.self_cheeger.pass = rep.self_cheeger.residual <= rep.self_cheeger.tolerance;

  // Lower volume bound |E_i| ≥ π / Ĥ².
  rep.volume_bound.tolerance = 0.05;
  const double bound = std::numbers::pi / (energy * energy);
  rep.volume_bound.residual = -std::numeric_limits<double>::infinity();
  for (const auto& s : stats) rep.volume_bound.residual = std::max(rep.volume_bound.residual, (bound - s.area) / bound);
  rep.volume_bound.pass = rep.volume_bound.residual <= rep.volume_bound.tolerance;

  int split = 0;
  for (std::size_t c = 0; c < stats.size(); ++c)
    if (stats[c].compactly_contained && stats[c].components > 1) {
      ++split;
      rep.indecomposable_interior.detail += "chamber " + std::to_string(c + 1) + " has " +
                                            std::to_string(stats[c].components) + " components; ";
    }
  rep.indecomposable_interior.residual = split;
  rep.indecomposable_interior.pass = split == 0;

  // Compactly contained components of E(0) must touch at least three chambers.
  int lonely = 0;
  int checked = 0;
  for (const Region& comp : components(lab.chamber(0))) {
    if (touches_outside(comp, lab)) continue;
    ++checked;
    std::vector<int> seen;
    for (std::size_t i : comp.indices()) {
      const int x = g.column(i);
      const int y = g.row(i);
      for (const auto& o : NeighborStencil::kOffsets)
        for (int sign : {1, -1}) {
          const int l = label_at(lab, x + sign * o[0], y + sign * o[1]);
          if (l >= 1 && std::find(seen.begin(), seen.end(), l) == seen.end()) seen.push_back(l);
        }
    }
    if (seen.size() < 3) ++lonely;
  }
  rep.exterior_component_rule.residual = lonely;
  rep.exterior_component_rule.pass = lonely == 0;
  rep.exterior_component_rule.detail =
      std::to_string(checked) + " interior exterior-chamber components, " + std::to_string(lonely) + " touch < 3 chambers";
  return rep;
}

}  // namespace cheeger
