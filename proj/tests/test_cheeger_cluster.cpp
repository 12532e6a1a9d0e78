#include <cmath>
#include <numbers>

#include "cheeger/cheeger_cluster.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cheeger;
using namespace cheeger::testing;

namespace {

ClusterConfig config(int n, int restarts = 1) {
  ClusterConfig cfg;
  cfg.chambers = n;
  cfg.restarts = restarts;
  cfg.rng_seed = 7;
  return cfg;
}

void check_trace(const ClusterResult& r) {
  for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1]);
  double sum = 0.0;
  for (const auto& s : r.stats) sum += s.ratio;
  CHECK(r.energy == doctest::Approx(sum).epsilon(1e-12));
  CHECK(r.energy == doctest::Approx(cluster_energy(r.labeling)).epsilon(1e-12));
}

}  // namespace

TEST_CASE("config validation") {
  ClusterConfig cfg;
  CHECK_NOTHROW(cfg.check());
  cfg.chambers = 0;
  CHECK_THROWS_AS(cfg.check(), InvalidArgument);
  cfg = ClusterConfig{};
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.check(), InvalidArgument);
  cfg = ClusterConfig{};
  cfg.eps_energy = 0.0;
  CHECK_THROWS_AS(cfg.check(), InvalidArgument);
}

TEST_CASE("seeding") {
  const DomainMask sq = raster(unit_square(), 1.0 / 32.0);
  SUBCASE("one chamber takes the whole domain") {
    const Labeling l = seed(sq, config(1));
    CHECK(l.chamber(1) == sq.inside());
  }
  SUBCASE("hexagonal seeds partition the square") {
    const auto hex = hex_grid_seed(sq, 4);
    REQUIRE(hex.has_value());
    CHECK_NOTHROW(hex->check(sq));
    CHECK(hex->chamber(0).empty());
    const Labeling l = seed(sq, config(4));
    CHECK(l == *hex);
  }
  SUBCASE("random seeds are deterministic and nonempty") {
    ClusterConfig cfg = config(5);
    cfg.seed_strategy = SeedStrategy::kRandomVoronoi;
    const Labeling a = seed(sq, cfg);
    CHECK_NOTHROW(a.check(sq));
    CHECK(a.chamber(0).empty());
    CHECK(a == seed(sq, cfg));
    CHECK(seed(sq, cfg, 1) == seed(sq, cfg, 1));
    CHECK(!(seed(sq, cfg, 1) == seed(sq, cfg, 2)));
    cfg.rng_seed = 8;
    CHECK(!(a == seed(sq, cfg)));
  }
  SUBCASE("too few pixels") {
    const auto tiny = ShapeExpr::rect({0, 0}, 0.1, 0.1);
    const DomainMask m = raster(tiny, 0.05);
    CHECK_THROWS_AS(seed(m, config(static_cast<int>(m.inside().count()) + 1)), TooFewPixels);
    CHECK_THROWS_AS(solve(m, config(static_cast<int>(m.inside().count()) + 1)), TooFewPixels);
  }
}

TEST_CASE("hexagonal seeding falls back when no tiles fit") {
  // A thin strip admits no tile of 16 pixels with a safety margin.
  const auto strip = ShapeExpr::rect({0, 0}, 1.0, 3.0 / 32.0);
  const DomainMask m = raster(strip, 1.0 / 32.0);
  CHECK(!hex_grid_seed(m, 2).has_value());
  const Labeling l = seed(m, config(2));
  CHECK_NOTHROW(l.check(m));
}

TEST_CASE("sweep") {
  SUBCASE("N = 1 is the single Cheeger problem") {
    const DomainMask d = raster(unit_square(), 1.0 / 48.0);
    Labeling l(d, 1, 1);
    const double e = sweep(l, d);
    const auto direct = cheeger_solve(d.inside());
    CHECK(e == doctest::Approx(direct.ratio).epsilon(1e-12));
    CHECK(l.chamber(1) == direct.set);
  }
  SUBCASE("two disjoint disks decouple") {
    const DomainMask d = raster(two_disks(), 1.0 / 32.0);
    Labeling l = voronoi_labeling(d, {{-1.5, 0.0}, {1.5, 0.0}});
    const double e = sweep(l, d);
    CHECK(std::abs(e - 4.0) / 4.0 < 0.03);
    for (int c = 1; c <= 2; ++c) CHECK(components(l.chamber(c)).size() == 1);
    // A fixed point stays put.
    const Labeling before = l;
    CHECK(sweep(l, d) == doctest::Approx(e).epsilon(1e-14));
    CHECK(l == before);
  }
}

TEST_CASE("solve examples") {
  SUBCASE("disk, one chamber") {
    const DomainMask d = raster(unit_disk(), 1.0 / 64.0);
    const auto r = solve(d, config(1));
    check_trace(r);
    CHECK(std::abs(r.energy - 2.0) / 2.0 < 0.02);
  }
  SUBCASE("two disks, two chambers") {
    const DomainMask d = raster(two_disks(), 1.0 / 48.0);
    const auto r = solve(d, config(2, 2));
    check_trace(r);
    CHECK(std::abs(r.energy - 4.0) / 4.0 < 0.02);
    for (const auto& s : r.stats) {
      CHECK(s.components == 1);
      CHECK(s.compactly_contained == false);
    }
  }
  SUBCASE("energy grows with N") {
    const DomainMask d = raster(unit_square(), 1.0 / 48.0);
    double previous = 0.0;
    for (int n = 1; n <= 4; ++n) {
      const auto r = solve(d, config(n, 2));
      check_trace(r);
      CHECK(r.energy > previous);
      CHECK(static_cast<int>(r.stats.size()) == n);
      previous = r.energy;
    }
  }
}

TEST_CASE("restarts: determinism and thread independence") {
  const DomainMask d = raster(unit_square(), 1.0 / 40.0);
  ClusterConfig cfg = config(3, 4);
  cfg.threads = 1;
  const auto serial = solve(d, cfg);
  cfg.threads = 4;
  const auto parallel = solve(d, cfg);
  CHECK(serial.labeling == parallel.labeling);
  CHECK(serial.energy == parallel.energy);
  CHECK(serial.restart_index == parallel.restart_index);
  // The winner is the best of the individual restarts.
  for (int r = 0; r < cfg.restarts; ++r) CHECK(descend(seed(d, cfg, r), d, cfg, r).energy >= serial.energy);
}

TEST_CASE("extra initial labelings join the restarts") {
  const DomainMask d = raster(unit_square(), 1.0 / 40.0);
  const auto three = solve(d, config(3, 2));
  // Dropping the worst chamber gives a two-chamber start below Ĥ₃.
  int worst = 1;
  for (int c = 1; c <= 3; ++c)
    if (three.stats[static_cast<std::size_t>(c - 1)].ratio > three.stats[static_cast<std::size_t>(worst - 1)].ratio)
      worst = c;
  const Labeling start = drop_chamber(three.labeling, worst);
  CHECK(start.chambers() == 2);
  CHECK_NOTHROW(start.check(d));
  const auto two = solve(d, config(2, 1), {start});
  CHECK(two.energy < three.energy);
  CHECK_THROWS_AS(solve(d, config(3, 1), {start}), InvalidArgument);
  CHECK_THROWS_AS(drop_chamber(Labeling(d, 1, 1), 1), InvalidArgument);
}

TEST_CASE("validation") {
  SUBCASE("disk, one chamber") {
    const DomainMask d = raster(unit_disk(), 1.0 / 48.0);
    const auto r = solve(d, config(1));
    const auto v = validate(r, d);
    CHECK(v.self_cheeger.pass);
    CHECK(v.self_cheeger.residual < 1e-6);
    CHECK(v.volume_bound.pass);
    // π/Ĥ² ≈ π/4 against |E| ≈ π.
    CHECK(v.volume_bound.residual < -0.7);
    CHECK(v.disjointness.pass);
  }
  SUBCASE("two disks") {
    const DomainMask d = raster(two_disks(), 1.0 / 32.0);
    const auto v = validate(solve(d, config(2)), d);
    CHECK(v.indecomposable_interior.pass);
    CHECK(v.disjointness.pass);
    CHECK(v.all_pass());
  }
  SUBCASE("a chamber split into two far blocks is flagged") {
    const GridSpec g = plain_grid(40, 20, 0.05);
    Region inside = block(g, 2, 2, 36, 16);
    const DomainMask d{inside};
    std::vector<int> labels(g.size(), Labeling::kOutside);
    for (std::size_t i : inside.indices()) labels[i] = 0;
    for (std::size_t i : block(g, 6, 6, 6, 6).indices()) labels[i] = 1;
    for (std::size_t i : block(g, 28, 6, 6, 6).indices()) labels[i] = 1;
    for (std::size_t i : block(g, 17, 7, 4, 4).indices()) labels[i] = 2;
    ClusterResult r{Labeling(g, 2, labels), {}, 0.0, 0, {}, 0};
    r.stats = chamber_stats(r.labeling, d);
    r.energy = cluster_energy(r.labeling);
    CHECK(r.stats[0].components == 2);
    CHECK(r.stats[0].compactly_contained);
    const auto v = validate(r, d);
    CHECK(!v.indecomposable_interior.pass);
    CHECK(v.indecomposable_interior.residual == 1.0);
    CHECK(v.disjointness.pass);
  }
}
