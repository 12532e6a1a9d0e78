#pragma once

// Exact minimum s-t cut for the binary energies produced by the Cheeger
// subproblem. Nodes are pixels; source/sink are implicit.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

namespace cheeger {

struct FlowEdge {
  std::size_t u;
  std::size_t v;
  double capacity;  // same capacity in both directions
};

struct FlowNetwork {
  std::size_t node_count = 0;
  std::vector<double> source_cap;  // source -> node
  std::vector<double> sink_cap;    // node -> sink
  std::vector<FlowEdge> edges;

  explicit FlowNetwork(std::size_t n = 0) : node_count(n), source_cap(n, 0.0), sink_cap(n, 0.0) {}

  void add_edge(std::size_t u, std::size_t v, double capacity) { edges.push_back({u, v, capacity}); }

  // Throws InvalidArgument on negative/non-finite capacities or bad indices.
  void check() const;

  // Total capacity crossing the partition (source side flagged by 1).
  double cut_value(const std::vector<std::uint8_t>& source_side) const;
};

struct CutResult {
  double value = 0.0;       // Σ capacities crossing the returned partition
  double flow = 0.0;        // value of the maximum flow found
  std::vector<std::uint8_t> source_side;  // maximal minimum cut
};

// Augmenting-path max-flow with persistent search trees (Boykov–Kolmogorov).
// One instance per solve; not shareable during a solve.
class MaxflowSolver {
 public:
  explicit MaxflowSolver(const FlowNetwork& net);

  CutResult solve();

 private:
  static constexpr std::int32_t kNone = -1;
  static constexpr std::int32_t kTerminal = -2;
  static constexpr std::int32_t kOrphan = -3;

  struct Node {
    std::int32_t parent = kNone;  // arc to parent, or a sentinel
    std::int64_t stamp = 0;
    std::int32_t dist = 0;
    bool sink_tree = false;
    bool active = false;
    double tr_cap = 0.0;  // > 0: residual from source, < 0: residual to sink
  };

  bool residual(std::int32_t arc) const { return rcap_[static_cast<std::size_t>(arc)] > eps_; }
  std::int32_t sister(std::int32_t arc) const { return arc ^ 1; }
  std::size_t head(std::int32_t arc) const { return head_[static_cast<std::size_t>(arc)]; }
  std::size_t tail(std::int32_t arc) const { return head_[static_cast<std::size_t>(arc ^ 1)]; }

  void activate(std::size_t i);
  std::int64_t next_active();
  void augment(std::int32_t middle);
  void adopt(std::size_t i);
  std::vector<std::uint8_t> maximal_source_side() const;

  const FlowNetwork& net_;
  double eps_ = 0.0;
  double flow_ = 0.0;
  std::int64_t time_ = 0;
  std::vector<Node> nodes_;
  std::vector<std::size_t> first_;  // CSR offsets into arc_order_
  std::vector<std::int32_t> arc_order_;
  std::vector<std::size_t> head_;
  std::vector<double> rcap_;
  std::deque<std::size_t> active_;
  std::vector<std::size_t> orphans_;
};

// Highest-label push-relabel with global relabelling and the gap heuristic.
// Stops after the preflow phase: a maximum preflow already fixes the
// minimum cut.
class PushRelabelSolver {
 public:
  explicit PushRelabelSolver(const FlowNetwork& net);

  CutResult solve();

 private:
  void global_relabel();
  void discharge(std::size_t u);
  void relabel(std::size_t u);
  void gap(std::int64_t level);
  void bucket_add(std::size_t u);
  std::vector<std::uint8_t> maximal_source_side() const;

  const FlowNetwork& net_;
  std::size_t n_ = 0;
  double eps_ = 0.0;
  double flow_ = 0.0;
  std::vector<std::size_t> first_;
  std::vector<std::int32_t> arc_order_;
  std::vector<std::size_t> head_;
  std::vector<double> rcap_;
  std::vector<double> sink_rcap_;
  std::vector<double> excess_;
  std::vector<std::int64_t> label_;
  std::vector<std::size_t> current_;
  std::vector<std::vector<std::size_t>> active_;  // active nodes per label
  std::vector<std::int64_t> label_count_;
  std::int64_t highest_ = 0;
  std::size_t relabels_since_global_ = 0;
};

// Minimum cut with the maximal source side (nodes that cannot reach the sink
// in the final residual graph). Empty network -> empty side, value 0.
enum class MaxflowAlgorithm { kAugmentingPaths, kPushRelabel };

CutResult min_cut(const FlowNetwork& net, MaxflowAlgorithm algorithm = MaxflowAlgorithm::kPushRelabel);

}  // namespace cheeger
