#include <cmath>
#include <numbers>
#include <random>

#include "cheeger/structure.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace cheeger;
using namespace cheeger::testing;
using std::numbers::pi;

namespace {

Labeling from_function(const GridSpec& g, int chambers, auto&& label_of) {
  std::vector<int> labels(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) labels[i] = label_of(g.center(i));
  return Labeling(g, chambers, std::move(labels));
}

// Total length of dual edges separating two different in-domain labels.
double interface_edge_length(const Labeling& lab) {
  const GridSpec& g = lab.grid();
  double total = 0.0;
  for (int y = 0; y < g.ny; ++y)
    for (int x = 0; x < g.nx; ++x) {
      const int l = lab.at(x, y);
      if (l == Labeling::kOutside) continue;
      if (x + 1 < g.nx && lab.at(x + 1, y) != Labeling::kOutside && lab.at(x + 1, y) != l) total += g.spacing;
      if (y + 1 < g.ny && lab.at(x, y + 1) != Labeling::kOutside && lab.at(x, y + 1) != l) total += g.spacing;
    }
  return total;
}

std::vector<Point> circle_points(Point c, double r, int n, double a0, double a1, double jitter, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> noise(-jitter, jitter);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    const double t = a0 + (a1 - a0) * i / (n - 1);
    pts.push_back({c.x + r * std::cos(t) + noise(rng), c.y + r * std::sin(t) + noise(rng)});
  }
  return pts;
}

}  // namespace

TEST_CASE("interfaces: half planes") {
  const GridSpec g = plain_grid(20, 12, 0.1);
  const Labeling lab = from_function(g, 2, [](Point p) { return p.x < 0.95 ? 1 : 2; });
  const auto lines = extract_interfaces(lab);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].j == 1);
  CHECK(lines[0].k == 2);
  CHECK(!lines[0].closed);
  CHECK(lines[0].length == doctest::Approx(1.2));
  for (const Point& v : lines[0].vertices) CHECK(v.x == doctest::Approx(0.95));
  const auto fit = fit_arc(lines[0]);
  CHECK(fit.kind == ArcKind::kLine);
  CHECK(fit.signed_curvature == 0.0);
}

TEST_CASE("interfaces: disk inside an annulus gives one closed loop per circle") {
  const GridSpec g = plain_grid(80, 80, 0.05);
  const Point c{1.975, 1.975};
  const Labeling lab = from_function(g, 2, [&](Point p) {
    const double r = std::hypot(p.x - c.x, p.y - c.y);
    return r < 0.8 ? 1 : r < 1.5 ? 2 : 0;
  });
  const auto lines = extract_interfaces(lab);
  REQUIRE(lines.size() == 2);
  for (const auto& l : lines) CHECK(l.closed);
  CHECK(lines[0].length + lines[1].length == doctest::Approx(interface_edge_length(lab)));
  // The inner loop: chamber 1 inside, so its centre is on j's side.
  for (const auto& l : lines) {
    const auto fit = fit_arc(l);
    REQUIRE(fit.kind == ArcKind::kCircle);
    if (l.j == 1) {
      CHECK(fit.radius == doctest::Approx(0.8).epsilon(0.05));
      CHECK(fit.signed_curvature > 0.0);
    } else {
      CHECK(l.j == 0);
      CHECK(fit.radius == doctest::Approx(1.5).epsilon(0.05));
      // Exterior chamber is outside the circle.
      CHECK(fit.signed_curvature < 0.0);
    }
  }
}

TEST_CASE("interfaces: single label and outside-only boundaries") {
  const GridSpec g = plain_grid(10, 10, 0.1);
  CHECK(extract_interfaces(from_function(g, 1, [](Point) { return 1; })).empty());
  const Labeling framed = from_function(g, 1, [](Point p) {
    return p.x > 0.25 && p.x < 0.75 && p.y > 0.25 && p.y < 0.75 ? 1 : Labeling::kOutside;
  });
  CHECK(extract_interfaces(framed).empty());
}

TEST_CASE("interfaces cover every boundary edge exactly once") {
  const GridSpec g = plain_grid(24, 24, 0.1);
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> pick(0, 3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> labels(g.size());
    // Blocky random labels so polylines have some length.
    std::vector<int> coarse(36);
    for (int& v : coarse) v = pick(rng);
    for (std::size_t i = 0; i < g.size(); ++i) labels[i] = coarse[static_cast<std::size_t>(g.row(i) / 4 * 6 + g.column(i) / 4)];
    const Labeling lab(g, 3, labels);
    const auto lines = extract_interfaces(lab);
    double total = 0.0;
    for (const auto& l : lines) {
      total += l.length;
      CHECK(l.j < l.k);
      CHECK(l.length > 0.0);
      for (std::size_t v = 1; v < l.vertices.size(); ++v)
        CHECK(std::hypot(l.vertices[v].x - l.vertices[v - 1].x, l.vertices[v].y - l.vertices[v - 1].y) ==
              doctest::Approx(g.spacing));
    }
    CHECK(total == doctest::Approx(interface_edge_length(lab)));
  }
}

TEST_CASE("fit_arc examples") {
  const auto pts = circle_points({0.3, -0.2}, 2.0, 60, 0.1, 1.7, 1e-4, 1);
  const auto fit = fit_arc(pts, true);
  REQUIRE(fit.kind == ArcKind::kCircle);
  CHECK(std::abs(std::abs(fit.signed_curvature) - 0.5) < 1e-3);
  CHECK(fit.center.x == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(fit.rms_residual < 2e-4);
  // Counter-clockwise walk: centre on the left.
  CHECK(fit.signed_curvature > 0.0);
  CHECK(fit_arc(pts, false).signed_curvature < 0.0);

  std::vector<Point> line;
  for (int i = 0; i < 10; ++i) line.push_back({0.1 * i, 0.05 * i + 1.0});
  const auto lf = fit_arc(line, true);
  CHECK(lf.kind == ArcKind::kLine);
  CHECK(lf.signed_curvature == 0.0);
  CHECK(lf.rms_residual < 1e-12);
  CHECK(std::abs(lf.direction.y / lf.direction.x - 0.5) < 1e-12);

  CHECK_THROWS_AS(fit_arc(std::vector<Point>{{0, 0}, {1, 0}, {2, 0}, {3, 0}}, true), TooShort);
}

TEST_CASE("fit_arc is rotation equivariant") {
  const auto pts = circle_points({0.4, 0.1}, 1.3, 40, -0.5, 1.2, 1e-3, 2);
  std::vector<Point> rotated;
  for (const Point& p : pts) rotated.push_back({-p.y, p.x});
  const auto a = fit_arc(pts, true);
  const auto b = fit_arc(rotated, true);
  CHECK(b.radius == doctest::Approx(a.radius).epsilon(1e-10));
  CHECK(b.center.x == doctest::Approx(-a.center.y).epsilon(1e-10));
  CHECK(b.center.y == doctest::Approx(a.center.x).epsilon(1e-10));
  CHECK(b.signed_curvature == doctest::Approx(a.signed_curvature).epsilon(1e-10));
}

TEST_CASE("fit error vanishes with jitter") {
  double previous = 1.0;
  for (double jitter : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const auto fit = fit_arc(circle_points({0, 0}, 0.7, 80, 0.0, 2.0, jitter, 3), true);
    const double err = std::abs(fit.radius - 0.7);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-5);
}

TEST_CASE("expected curvature") {
  std::vector<ChamberStat> stats(3);
  stats[0].area = 1.0;
  stats[0].ratio = 3.0;
  stats[1].area = 2.0;
  stats[1].ratio = 4.0;
  stats[2] = stats[0];
  CHECK(expected_curvature(1, 2, stats) == doctest::Approx(2.0 / 3.0));
  CHECK(expected_curvature(2, 1, stats) == -expected_curvature(1, 2, stats));
  CHECK(expected_curvature(1, 3, stats) == 0.0);
  CHECK(expected_curvature(2, 0, stats) == 4.0);
  CHECK_THROWS_AS(expected_curvature(0, 1, stats), InvalidArgument);
  CHECK_THROWS_AS(expected_curvature(1, 4, stats), InvalidArgument);
}

TEST_CASE("triple points") {
  const GridSpec g = plain_grid(40, 40, 0.05);
  const Point c{0.975, 0.975};
  SUBCASE("three sectors") {
    const Labeling lab = from_function(g, 3, [&](Point p) {
      double a = std::atan2(p.y - c.y, p.x - c.x);
      if (a < 0) a += 2 * pi;
      return 1 + static_cast<int>(a / (2 * pi / 3));
    });
    const auto t = triple_points(lab);
    REQUIRE(t.size() == 1);
    CHECK(t[0].labels == std::vector<int>{1, 2, 3});
    CHECK(std::hypot(t[0].position.x - c.x, t[0].position.y - c.y) < 2 * g.spacing);
  }
  SUBCASE("two labels") {
    CHECK(triple_points(from_function(g, 2, [&](Point p) { return p.x < c.x ? 1 : 2; })).empty());
  }
  SUBCASE("four quadrants") {
    const Labeling lab = from_function(g, 4, [&](Point p) { return 1 + (p.x > c.x ? 1 : 0) + (p.y > c.y ? 2 : 0); });
    const auto t = triple_points(lab);
    REQUIRE(t.size() == 1);
    CHECK(t[0].labels.size() == 4);
  }
  SUBCASE("contacts with outside are excluded") {
    const Labeling lab = from_function(g, 2, [&](Point p) {
      if (p.y > 1.5) return Labeling::kOutside;
      return p.x < c.x ? 1 : 2;
    });
    CHECK(triple_points(lab).empty());
  }
}

TEST_CASE("structure report on computed clusters") {
  const double h = 1.0 / 96.0;
  SUBCASE("square, one chamber: corner arcs have curvature h(square)") {
    const DomainMask d = raster(unit_square(), h);
    const auto r = solve(d, ClusterConfig{});
    const auto rep = structure_report(r, d);
    int fitted = 0;
    for (const auto& c : rep.interfaces)
      if (c.fit) {
        ++fitted;
        CHECK(c.fit->kind == ArcKind::kCircle);
        CHECK(c.fit->signed_curvature > 0.0);
        CHECK(std::abs(c.fit->signed_curvature - 2.0 - std::sqrt(pi)) / (2.0 + std::sqrt(pi)) < 0.10);
      }
    CHECK(fitted == 4);
    CHECK(rep.all_pass());
    CHECK(rep.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
  }
  SUBCASE("rectangle split in two equal chambers: flat interface") {
    const auto rect = ShapeExpr::rect({0, 0}, 2.0, 1.0);
    const DomainMask d = raster(rect, h);
    ClusterConfig cfg;
    cfg.chambers = 2;
    const auto r = descend(voronoi_labeling(d, {{0.5, 0.5}, {1.5, 0.5}}), d, cfg, 0);
    const auto rep = structure_report(r, d);
    bool found = false;
    for (const auto& c : rep.interfaces)
      if (c.j == 1 && c.k == 2 && c.fit) {
        found = true;
        CHECK(std::abs(c.fit->signed_curvature) < 0.1 * inner_cheeger_convex(rect));
      }
    CHECK(found);
    CHECK(rep.triples.size() <= 8);
  }
  SUBCASE("two disks: boundary slivers are contact pieces, not free interfaces") {
    const DomainMask d = raster(two_disks(), 1.0 / 64.0);
    ClusterConfig cfg;
    cfg.chambers = 2;
    const auto r = solve(d, cfg);
    const auto rep = structure_report(r, d);
    int contact = 0;
    for (const auto& c : rep.interfaces) {
      if (c.contact) {
        ++contact;
        CHECK(c.j == 0);
        CHECK(!c.fit);
      }
    }
    CHECK(contact > 0);
    CHECK(rep.all_pass());
  }
}
