#include <cmath>
#include <numbers>
#include <sstream>

#include "cheeger/bounds.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cheeger;
using namespace cheeger::testing;
using std::numbers::pi;

TEST_CASE("lower bound examples") {
  CHECK(lower_bound(1, pi) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lower_bound_direct(4, 1.0) == doctest::Approx(2.0 * std::sqrt(pi) * 8.0).epsilon(1e-12));
  CHECK(lower_bound_direct(4, 1.0) == doctest::Approx(28.359).epsilon(1e-4));
  CHECK(lower_bound_direct(1, 2.5) == doctest::Approx(lower_bound_recursive(1, 2.5)).epsilon(1e-14));
  // Telescoped sum by hand for N = 3.
  CHECK(lower_bound_recursive(3, 4.0) ==
        doctest::Approx(2.0 * std::sqrt(pi) * (1.0 + std::sqrt(2.0) + std::sqrt(3.0)) / 2.0));
  CHECK_THROWS_AS(lower_bound(0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(lower_bound(1, 0.0), InvalidArgument);
}

TEST_CASE("lower bound is increasing in N and scales as area^-1/2") {
  for (int n = 1; n < 40; ++n) {
    CHECK(lower_bound(n + 1, 1.0) > lower_bound(n, 1.0));
    CHECK(lower_bound(n, 4.0) == doctest::Approx(lower_bound(n, 1.0) / 2.0).epsilon(1e-12));
  }
  CHECK(honeycomb_line(16, 1.0) == doctest::Approx(unit_hexagon_cheeger() * 64.0));
}

TEST_CASE("hexagon placements stay inside the eroded domain and do not overlap") {
  const DomainMask sq = raster(unit_square(), 1.0 / 64.0);
  const Region eroded = eroded_interior(sq);
  CHECK(eroded.subset_of(sq.inside()));
  CHECK(eroded.count() < sq.inside().count());
  const HexPlacement p = best_placement(sq, eroded, 0.05);
  REQUIRE(p.k > 1);
  Region used(sq.grid());
  for (const Point& c : p.centres) {
    const Region tile = hexagon_pixels(sq.grid(), c, p.delta);
    CHECK(!tile.empty());
    CHECK(tile.subset_of(eroded));
    CHECK(!tile.intersects(used));
    used |= tile;
  }
  CHECK(area(used) <= sq.area());
  CHECK_THROWS_AS(place_hexagons(sq, eroded, 0.0, {0, 0}), InvalidArgument);
}

TEST_CASE("hexagonal upper bound examples") {
  const DomainMask sq = raster(unit_square(), 1.0 / 128.0);
  SUBCASE("one chamber in the unit square") {
    const auto u = hex_upper_bound(sq, 1);
    REQUIRE(u.value.has_value());
    CHECK(*u.value >= 2.0 + std::sqrt(pi));
    CHECK(u.placement.k >= 1);
    CHECK(*u.value == doctest::Approx(u.placement.k * unit_hexagon_cheeger() / std::sqrt(u.placement.delta)));
  }
  SUBCASE("tiny domain has no placement") {
    const auto tiny = ShapeExpr::rect({0, 0}, 4.0 / 128.0, 4.0 / 128.0);
    const auto u = hex_upper_bound(raster(tiny, 1.0 / 128.0), 1);
    CHECK(!u.value.has_value());
    CHECK(u.placement.k == 0);
  }
  SUBCASE("sixteen chambers") {
    const auto u = hex_upper_bound(sq, 16);
    REQUIRE(u.value.has_value());
    const double scaled = *u.value / std::pow(16.0, 1.5);
    CHECK(scaled <= 2.0 * unit_hexagon_cheeger());
    CHECK(scaled >= unit_hexagon_cheeger() / 2.0);
    CHECK(*u.value / lower_bound(16, sq.area()) <= unit_hexagon_cheeger() / (2.0 * std::sqrt(pi)) * 1.5);
  }
  SUBCASE("never below the lower bound") {
    for (int n : {1, 2, 3, 5, 8, 12}) {
      const auto u = hex_upper_bound(sq, n);
      if (u.value) CHECK(*u.value >= lower_bound(n, sq.area()));
    }
  }
}

TEST_CASE("chamber area bound") {
  CHECK(chamber_area_bound(1.0, 3.0) == doctest::Approx(pi));
  CHECK_THROWS_AS(chamber_area_bound(3.0, 3.0), NonMonotoneInput);
  CHECK_THROWS_AS(chamber_area_bound(3.0, 2.0), NonMonotoneInput);
}

TEST_CASE("log-log slope") {
  std::vector<double> x{2, 4, 8, 16}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  CHECK(*loglog_slope(x, y) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(!loglog_slope({2.0}, {1.0}).has_value());
  CHECK_THROWS_AS(loglog_slope({1.0, 2.0}, {1.0}), InvalidArgument);
}

TEST_CASE("bracket sweep on a coarse square") {
  const DomainMask sq = raster(unit_square(), 1.0 / 32.0);
  ClusterConfig cfg;
  cfg.restarts = 2;
  cfg.rng_seed = 3;
  const auto sweep = bracket_sweep(sq, {1, 2, 3, 4}, cfg);
  REQUIRE(sweep.reports.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& r = sweep.reports[i];
    CHECK(r.h_hat.has_value());
    CHECK(r.lower_ok);
    CHECK(r.upper_ok);
    CHECK(r.lower == doctest::Approx(std::max(r.lower_direct, r.lower_recursive)));
    if (i > 0) CHECK(*r.h_hat > *sweep.reports[i - 1].h_hat);
    CHECK(sweep.clusters[i].labeling.chambers() == r.n);
  }
  REQUIRE(sweep.slope.has_value());
  CHECK(sweep.all_ok());

  std::istringstream csv(bracket_csv(sweep));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "N,lower_direct,lower_recursive,upper_hex,H_hat,slope");
  int rows = 0;
  std::string last;
  while (std::getline(csv, line)) {
    ++rows;
    last = line;
    if (rows < 4) CHECK(line.back() == ',');
  }
  CHECK(rows == 4);
  CHECK(last.back() != ',');

  const auto single = bracket_sweep(sq, {1}, cfg);
  CHECK(single.reports.size() == 1);
  CHECK(!single.slope.has_value());
  CHECK_THROWS_AS(bracket_sweep(sq, {}, cfg), InvalidArgument);
  CHECK_THROWS_AS(bracket_sweep(sq, {3, 2}, cfg), InvalidArgument);
}
