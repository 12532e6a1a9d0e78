#include <cmath>
#include <numbers>
#include <random>

#include "cheeger/spectral.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cheeger;
using namespace cheeger::testing;
using std::numbers::pi;

namespace {

Region vertex_raster(const ShapeExpr& s, double h) {
  return rasterize(s, grid_for(s, h, 4, GridAlignment::kVertexCentred)).inside();
}

}  // namespace

TEST_CASE("Bessel zero") { CHECK(bessel_j0_first_zero() == doctest::Approx(2.404825557695773).epsilon(1e-13)); }

TEST_CASE("lambda1 oracles at 1/128") {
  const double h = 1.0 / 128.0;
  const auto sq = lambda1(vertex_raster(unit_square(), h));
  CHECK(std::abs(sq.lambda1 / (2.0 * pi * pi) - 1.0) < 0.005);
  CHECK(sq.residual < 1e-6);
  const double j = bessel_j0_first_zero();
  const auto disk = lambda1(vertex_raster(unit_disk(), h));
  CHECK(std::abs(disk.lambda1 / (j * j) - 1.0) < 0.01);
}

TEST_CASE("small square matches the discrete closed form") {
  // Interior pixels of an n × n block: λ = (4/h²)(sin²(π/(2(n+1))) · 2).
  const GridSpec g = plain_grid(14, 14, 0.1);
  const int n = 10;
  const auto r = lambda1(block(g, 2, 2, n, n));
  const double s = std::sin(pi / (2.0 * (n + 1)));
  CHECK(r.lambda1 == doctest::Approx(8.0 * s * s / 0.01).epsilon(1e-8));
  CHECK(r.eigenvector.size() == static_cast<std::size_t>(n * n));
  for (double v : r.eigenvector) CHECK(v > 0.0);
  CHECK(rayleigh_quotient(block(g, 2, 2, n, n), r.eigenvector) == doctest::Approx(r.lambda1).epsilon(1e-10));
}

TEST_CASE("scaling and monotonicity") {
  // Dyadic spacing: pixel centres land exactly on the rectangle edges.
  const double h = 1.0 / 64.0;
  const auto small = ShapeExpr::rect({0, 0}, 1.0, 0.5);
  const auto large = ShapeExpr::rect({0, 0}, 2.0, 1.0);
  const double a = lambda1(vertex_raster(small, h)).lambda1;
  const double b = lambda1(vertex_raster(large, h)).lambda1;
  CHECK(b == doctest::Approx(a / 4.0).epsilon(0.01));

  // Nested rectangles on one grid.
  const GridSpec g = plain_grid(40, 30, h);
  double previous = 0.0;
  for (int w = 30; w >= 10; w -= 5) {
    const double l = lambda1(block(g, 2, 2, w, w * 2 / 3)).lambda1;
    CHECK(l >= previous);
    previous = l;
  }
}

TEST_CASE("lambda1 errors") {
  const GridSpec g = plain_grid(8, 8);
  CHECK_THROWS_AS(lambda1(Region(g)), InvalidArgument);
  EigSpec spec;
  spec.max_iter = 1;
  CHECK_THROWS_AS(lambda1(block(plain_grid(40, 40, 0.05), 2, 2, 30, 20), spec), NonConvergence);
  CHECK_THROWS_AS(rayleigh_quotient(block(g, 1, 1, 2, 2), {1.0}), InvalidArgument);
}

TEST_CASE("Cheeger eigenvalue inequality") {
  const double h = 1.0 / 64.0;
  SUBCASE("square") {
    const auto c = cheeger_eig_check(raster(unit_square(), h).inside());
    CHECK(c.pass);
    CHECK(c.bound == doctest::Approx(0.25 * c.cheeger * c.cheeger));
    CHECK(c.lambda1 > 4.0 * c.bound);
  }
  SUBCASE("disk") {
    const auto c = cheeger_eig_check(raster(unit_disk(), h).inside());
    CHECK(c.pass);
    CHECK(c.bound == doctest::Approx(1.0).epsilon(0.03));
  }
  SUBCASE("random CSG blobs") {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> pos(-0.6, 0.6), rad(0.2, 0.6);
    for (int t = 0; t < 6; ++t) {
      std::vector<ShapeExpr> parts;
      for (int k = 0; k < 3; ++k) parts.push_back(ShapeExpr::disk({pos(rng), pos(rng)}, rad(rng)));
      parts.push_back(ShapeExpr::rect({pos(rng), pos(rng)}, rad(rng), rad(rng)));
      const auto blob = ShapeExpr::make_union(parts);
      CHECK(cheeger_eig_check(raster(blob, 1.0 / 32.0).inside()).pass);
    }
  }
}

TEST_CASE("partition chain") {
  const double h = 1.0 / 40.0;
  SUBCASE("one chamber collapses to the single check") {
    const DomainMask d = raster(unit_square(), h);
    const auto r = solve(d, ClusterConfig{});
    const auto chain = partition_chain_check(r);
    const auto single = cheeger_eig_check(r.labeling.chamber(1));
    CHECK(chain.sum_lambda == single.lambda1);
    CHECK(chain.sum_cheeger == single.bound);
    CHECK(chain.jensen == doctest::Approx(single.bound).epsilon(1e-12));
    CHECK(chain.pass());
  }
  SUBCASE("two equal disks: Jensen is an equality") {
    const DomainMask d = raster(two_disks(), h);
    ClusterConfig cfg;
    cfg.chambers = 2;
    const auto chain = partition_chain_check(solve(d, cfg), 0.02, {}, 2);
    CHECK(chain.pass());
    CHECK(chain.jensen == doctest::Approx(chain.sum_cheeger).epsilon(1e-3));
  }
  SUBCASE("square, four chambers") {
    const DomainMask d = raster(unit_square(), h);
    ClusterConfig cfg;
    cfg.chambers = 4;
    const auto r = solve(d, cfg);
    const auto chain = partition_chain_check(r);
    CHECK(chain.pass());
    CHECK(chain.chambers.size() == 4);
    CHECK(chain.sum_lambda > chain.sum_cheeger);
    CHECK(chain.sum_cheeger >= chain.jensen);
  }
}
