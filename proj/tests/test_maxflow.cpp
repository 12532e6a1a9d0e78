#include <random>

#include "cheeger/error.hpp"
#include "cheeger/maxflow.hpp"
#include "doctest.h"

using namespace cheeger;

namespace {

// 4×4 grid network with 4-neighbour n-links and integer capacities.
FlowNetwork random_grid_network(std::mt19937& rng, int side = 4) {
  std::uniform_int_distribution<int> cap(0, 10);
  const auto n = static_cast<std::size_t>(side * side);
  FlowNetwork net(n);
  for (std::size_t i = 0; i < n; ++i) {
    net.source_cap[i] = cap(rng);
    net.sink_cap[i] = cap(rng);
  }
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      const auto i = static_cast<std::size_t>(y * side + x);
      if (x + 1 < side) net.add_edge(i, i + 1, cap(rng));
      if (y + 1 < side) net.add_edge(i, i + static_cast<std::size_t>(side), cap(rng));
    }
  return net;
}

struct BruteForce {
  double value;
  std::vector<std::uint8_t> maximal_side;
};

// Enumerates every assignment; the maximal minimizer is the union of all
// minimizing source sides.
BruteForce enumerate_cuts(const FlowNetwork& net) {
  const std::size_t n = net.node_count;
  double best = 1e300;
  std::vector<std::uint32_t> minimizers;
  std::vector<std::uint8_t> side(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) side[i] = (mask >> i) & 1u;
    const double v = net.cut_value(side);
    if (v < best - 1e-9) {
      best = v;
      minimizers.assign(1, mask);
    } else if (v <= best + 1e-9) {
      minimizers.push_back(mask);
    }
  }
  std::uint32_t all = 0;
  for (std::uint32_t m : minimizers) all |= m;
  BruteForce out{best, std::vector<std::uint8_t>(n)};
  for (std::size_t i = 0; i < n; ++i) out.maximal_side[i] = (all >> i) & 1u;
  return out;
}

constexpr MaxflowAlgorithm kEngines[] = {MaxflowAlgorithm::kAugmentingPaths, MaxflowAlgorithm::kPushRelabel};

const char* engine_name(MaxflowAlgorithm a) {
  return a == MaxflowAlgorithm::kPushRelabel ? "push-relabel" : "augmenting paths";
}

}  // namespace

TEST_CASE("single node cuts") {
  for (const MaxflowAlgorithm algo : kEngines) {
    CAPTURE(engine_name(algo));
    FlowNetwork a(1);
    a.source_cap[0] = 3;
    a.sink_cap[0] = 1;
    auto ra = min_cut(a, algo);
    CHECK(ra.value == 1.0);
    CHECK(ra.source_side[0] == 1);

    FlowNetwork b(1);
    b.source_cap[0] = 2;
    b.sink_cap[0] = 2;
    auto rb = min_cut(b, algo);
    CHECK(rb.value == 2.0);
    CHECK(rb.source_side[0] == 1);  // tie goes to the maximal side
  }
}

TEST_CASE("empty network") {
  for (const MaxflowAlgorithm algo : kEngines) {
    CAPTURE(engine_name(algo));
    auto r = min_cut(FlowNetwork(0), algo);
    CHECK(r.value == 0.0);
    CHECK(r.source_side.empty());
  }
}

TEST_CASE("invalid capacities are rejected") {
  for (const MaxflowAlgorithm algo : kEngines) {
    CAPTURE(engine_name(algo));
    FlowNetwork net(2);
    net.source_cap[0] = -1.0;
    CHECK_THROWS_AS(min_cut(net, algo), InvalidArgument);
    FlowNetwork self(2);
    self.add_edge(1, 1, 1.0);
    CHECK_THROWS_AS(min_cut(self, algo), InvalidArgument);
  }
}

TEST_CASE("random 4x4 networks match exhaustive enumeration") {
  for (const MaxflowAlgorithm algo : kEngines) {
    CAPTURE(engine_name(algo));
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
      const FlowNetwork net = random_grid_network(rng);
      const auto expected = enumerate_cuts(net);
      const auto got = min_cut(net, algo);
      CHECK(got.value == doctest::Approx(expected.value));
      CHECK(got.flow == doctest::Approx(got.value));
      CHECK(got.source_side == expected.maximal_side);
    }
  }
}

TEST_CASE("maximality and determinism on larger grids") {
  for (const MaxflowAlgorithm algo : kEngines) {
    CAPTURE(engine_name(algo));
    std::mt19937 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const FlowNetwork net = random_grid_network(rng, 8);
      const auto r = min_cut(net, algo);
      CHECK(r.flow == doctest::Approx(r.value));
      const auto again = min_cut(net, algo);
      CHECK(again.source_side == r.source_side);
      CHECK(again.value == r.value);
      // Adding any single sink-side node strictly increases the cut.
      for (std::size_t i = 0; i < net.node_count; ++i) {
        if (r.source_side[i]) continue;
        auto bigger = r.source_side;
        bigger[i] = 1;
        CHECK(net.cut_value(bigger) > r.value + 1e-9);
      }
    }
  }
}

TEST_CASE("fractional capacities") {
  for (const MaxflowAlgorithm algo : kEngines) {
    CAPTURE(engine_name(algo));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> cap(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      FlowNetwork net(9);
      for (std::size_t i = 0; i < 9; ++i) {
        net.source_cap[i] = cap(rng);
        net.sink_cap[i] = cap(rng);
      }
      for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = i + 1; j < 9; ++j)
          if (cap(rng) < 0.4) net.add_edge(i, j, cap(rng) * 0.7);
      const auto expected = enumerate_cuts(net);
      const auto got = min_cut(net, algo);
      CHECK(got.value == doctest::Approx(expected.value).epsilon(1e-12));
    }
  }
}
