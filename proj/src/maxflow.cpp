#include "cheeger/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cheeger/error.hpp"

namespace cheeger {

void FlowNetwork::check() const {
  if (source_cap.size() != node_count || sink_cap.size() != node_count) {
    throw InvalidArgument("t-link arrays must have one entry per node");
  }
  auto bad = [](double c) { return !std::isfinite(c) || c < 0.0; };
  for (std::size_t i = 0; i < node_count; ++i) {
    if (bad(source_cap[i]) || bad(sink_cap[i])) {
      throw InvalidArgument("t-link capacity at node " + std::to_string(i) + " is negative or not finite");
    }
  }
  for (const FlowEdge& e : edges) {
    if (e.u >= node_count || e.v >= node_count || e.u == e.v) throw InvalidArgument("n-link has invalid endpoints");
    if (bad(e.capacity)) throw InvalidArgument("n-link capacity is negative or not finite");
  }
}

double FlowNetwork::cut_value(const std::vector<std::uint8_t>& source_side) const {
  double value = 0.0;
  for (std::size_t i = 0; i < node_count; ++i) value += source_side[i] ? sink_cap[i] : source_cap[i];
  for (const FlowEdge& e : edges)
    if (source_side[e.u] != source_side[e.v]) value += e.capacity;
  return value;
}

MaxflowSolver::MaxflowSolver(const FlowNetwork& net) : net_(net) {
  net_.check();
  const std::size_t n = net.node_count;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max({scale, net.source_cap[i], net.sink_cap[i]});
  for (const FlowEdge& e : net.edges) scale = std::max(scale, e.capacity);
  eps_ = 1e-9 * scale;

  // Arc 2e runs u -> v, arc 2e + 1 runs v -> u.
  head_.resize(2 * net.edges.size());
  rcap_.resize(2 * net.edges.size());
  first_.assign(n + 1, 0);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    const FlowEdge& edge = net.edges[e];
    head_[2 * e] = edge.v;
    head_[2 * e + 1] = edge.u;
    rcap_[2 * e] = edge.capacity;
    rcap_[2 * e + 1] = edge.capacity;
    ++first_[edge.u + 1];
    ++first_[edge.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) first_[i + 1] += first_[i];
  arc_order_.resize(2 * net.edges.size());
  std::vector<std::size_t> fill(first_.begin(), first_.end() - 1);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    arc_order_[fill[net.edges[e].u]++] = static_cast<std::int32_t>(2 * e);
    arc_order_[fill[net.edges[e].v]++] = static_cast<std::int32_t>(2 * e + 1);
  }

  nodes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = net.source_cap[i];
    const double t = net.sink_cap[i];
    flow_ += std::min(s, t);
    Node& node = nodes_[i];
    node.tr_cap = s - t;
    if (node.tr_cap > eps_) {
      node.sink_tree = false;
      node.parent = kTerminal;
      node.dist = 1;
      activate(i);
    } else if (node.tr_cap < -eps_) {
      node.sink_tree = true;
      node.parent = kTerminal;
      node.dist = 1;
      activate(i);
    }
  }
}

void MaxflowSolver::activate(std::size_t i) {
  if (nodes_[i].active) return;
  nodes_[i].active = true;
  active_.push_back(i);
}

std::int64_t MaxflowSolver::next_active() {
  while (!active_.empty()) {
    const std::size_t i = active_.front();
    active_.pop_front();
    nodes_[i].active = false;
    if (nodes_[i].parent != kNone) return static_cast<std::int64_t>(i);
  }
  return -1;
}

void MaxflowSolver::augment(std::int32_t middle) {
  double bottleneck = rcap_[static_cast<std::size_t>(middle)];
  std::size_t i = tail(middle);
  for (;;) {
    const std::int32_t a = nodes_[i].parent;
    if (a == kTerminal) break;
    bottleneck = std::min(bottleneck, rcap_[static_cast<std::size_t>(sister(a))]);
    i = head(a);
  }
  bottleneck = std::min(bottleneck, nodes_[i].tr_cap);
  i = head(middle);
  for (;;) {
    const std::int32_t a = nodes_[i].parent;
    if (a == kTerminal) break;
    bottleneck = std::min(bottleneck, rcap_[static_cast<std::size_t>(a)]);
    i = head(a);
  }
  bottleneck = std::min(bottleneck, -nodes_[i].tr_cap);

  rcap_[static_cast<std::size_t>(sister(middle))] += bottleneck;
  rcap_[static_cast<std::size_t>(middle)] -= bottleneck;

  auto make_orphan = [&](std::size_t node) {
    nodes_[node].parent = kOrphan;
    orphans_.push_back(node);
  };

  i = tail(middle);
  for (;;) {
    const std::int32_t a = nodes_[i].parent;
    if (a == kTerminal) {
      nodes_[i].tr_cap -= bottleneck;
      if (nodes_[i].tr_cap <= eps_) make_orphan(i);
      break;
    }
    rcap_[static_cast<std::size_t>(a)] += bottleneck;
    rcap_[static_cast<std::size_t>(sister(a))] -= bottleneck;
    const std::size_t up = head(a);
    if (!residual(sister(a))) make_orphan(i);
    i = up;
  }
  i = head(middle);
  for (;;) {
    const std::int32_t a = nodes_[i].parent;
    if (a == kTerminal) {
      nodes_[i].tr_cap += bottleneck;
      if (-nodes_[i].tr_cap <= eps_) make_orphan(i);
      break;
    }
    rcap_[static_cast<std::size_t>(sister(a))] += bottleneck;
    rcap_[static_cast<std::size_t>(a)] -= bottleneck;
    const std::size_t up = head(a);
    if (!residual(a)) make_orphan(i);
    i = up;
  }
  flow_ += bottleneck;
}

void MaxflowSolver::adopt(std::size_t i) {
  constexpr std::int32_t kInfinite = std::numeric_limits<std::int32_t>::max();
  const bool sink_side = nodes_[i].sink_tree;
  std::int32_t best_arc = kNone;
  std::int32_t best_dist = kInfinite;

  for (std::size_t k = first_[i]; k < first_[i + 1]; ++k) {
    const std::int32_t a0 = arc_order_[k];
    // Source tree: need residual parent -> i; sink tree: i -> parent.
    if (!(sink_side ? residual(a0) : residual(sister(a0)))) continue;
    const std::size_t j = head(a0);
    if (nodes_[j].parent == kNone || nodes_[j].sink_tree != sink_side) continue;

    std::int32_t d = 0;
    std::size_t jj = j;
    for (;;) {
      if (nodes_[jj].stamp == time_) {
        d += nodes_[jj].dist;
        break;
      }
      const std::int32_t a = nodes_[jj].parent;
      ++d;
      if (a == kTerminal) {
        nodes_[jj].stamp = time_;
        nodes_[jj].dist = 1;
        break;
      }
      if (a == kOrphan) {
        d = kInfinite;
        break;
      }
      jj = head(a);
    }
    if (d == kInfinite) continue;
    if (d < best_dist) {
      best_arc = a0;
      best_dist = d;
    }
    for (jj = j; nodes_[jj].stamp != time_; jj = head(nodes_[jj].parent)) {
      nodes_[jj].stamp = time_;
      nodes_[jj].dist = d--;
    }
  }

  if (best_arc != kNone) {
    nodes_[i].parent = best_arc;
    nodes_[i].stamp = time_;
    nodes_[i].dist = best_dist + 1;
    return;
  }

  nodes_[i].parent = kNone;
  for (std::size_t k = first_[i]; k < first_[i + 1]; ++k) {
    const std::int32_t a0 = arc_order_[k];
    const std::size_t j = head(a0);
    Node& nj = nodes_[j];
    if (nj.parent == kNone || nj.sink_tree != sink_side) continue;
    if (sink_side ? residual(a0) : residual(sister(a0))) activate(j);
    if (nj.parent != kTerminal && nj.parent != kOrphan && head(nj.parent) == i) {
      nj.parent = kOrphan;
      orphans_.push_back(j);
    }
  }
}

CutResult MaxflowSolver::solve() {
  std::int64_t current = -1;
  for (;;) {
    std::int64_t pick = current;
    if (pick < 0 || nodes_[static_cast<std::size_t>(pick)].parent == kNone) pick = next_active();
    current = -1;
    if (pick < 0) break;
    const std::size_t i = static_cast<std::size_t>(pick);
    Node& ni = nodes_[i];

    std::int32_t found = kNone;
    for (std::size_t k = first_[i]; k < first_[i + 1] && found == kNone; ++k) {
      const std::int32_t a = arc_order_[k];
      const std::size_t j = head(a);
      Node& nj = nodes_[j];
      if (!ni.sink_tree) {
        if (!residual(a)) continue;
        if (nj.parent == kNone) {
          nj.sink_tree = false;
          nj.parent = sister(a);
          nj.stamp = ni.stamp;
          nj.dist = ni.dist + 1;
          activate(j);
        } else if (nj.sink_tree) {
          found = a;
        } else if (nj.stamp <= ni.stamp && nj.dist > ni.dist) {
          nj.parent = sister(a);
          nj.stamp = ni.stamp;
          nj.dist = ni.dist + 1;
        }
      } else {
        if (!residual(sister(a))) continue;
        if (nj.parent == kNone) {
          nj.sink_tree = true;
          nj.parent = sister(a);
          nj.stamp = ni.stamp;
          nj.dist = ni.dist + 1;
          activate(j);
        } else if (!nj.sink_tree) {
          found = sister(a);
        } else if (nj.stamp <= ni.stamp && nj.dist > ni.dist) {
          nj.parent = sister(a);
          nj.stamp = ni.stamp;
          nj.dist = ni.dist + 1;
        }
      }
    }

    ++time_;
    if (found != kNone) {
      current = pick;
      augment(found);
      while (!orphans_.empty()) {
        const std::size_t o = orphans_.back();
        orphans_.pop_back();
        adopt(o);
      }
    }
  }

  CutResult result;
  result.flow = flow_;
  result.source_side = maximal_source_side();
  result.value = net_.cut_value(result.source_side);
  return result;
}

std::vector<std::uint8_t> MaxflowSolver::maximal_source_side() const {
  const std::size_t n = nodes_.size();
  std::vector<std::uint8_t> reaches_sink(n, 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes_[i].tr_cap < -eps_) {
      reaches_sink[i] = 1;
      stack.push_back(i);
    }
  }
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t k = first_[v]; k < first_[v + 1]; ++k) {
      const std::int32_t a = arc_order_[k];  // v -> u; need residual u -> v
      const std::size_t u = head(a);
      if (!reaches_sink[u] && residual(sister(a))) {
        reaches_sink[u] = 1;
        stack.push_back(u);
      }
    }
  }
  std::vector<std::uint8_t> side(n);
  for (std::size_t i = 0; i < n; ++i) side[i] = reaches_sink[i] ? 0 : 1;
  return side;
}

CutResult min_cut(const FlowNetwork& net, MaxflowAlgorithm algorithm) {
  if (algorithm == MaxflowAlgorithm::kAugmentingPaths) return MaxflowSolver(net).solve();
  return PushRelabelSolver(net).solve();
}

}  // namespace cheeger

namespace cheeger {

PushRelabelSolver::PushRelabelSolver(const FlowNetwork& net) : net_(net), n_(net.node_count) {
  net_.check();
  double scale = 0.0;
  for (std::size_t i = 0; i < n_; ++i) scale = std::max({scale, net.source_cap[i], net.sink_cap[i]});
  for (const FlowEdge& e : net.edges) scale = std::max(scale, e.capacity);
  eps_ = 1e-9 * scale;

  head_.resize(2 * net.edges.size());
  rcap_.resize(2 * net.edges.size());
  first_.assign(n_ + 1, 0);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    head_[2 * e] = net.edges[e].v;
    head_[2 * e + 1] = net.edges[e].u;
    rcap_[2 * e] = rcap_[2 * e + 1] = net.edges[e].capacity;
    ++first_[net.edges[e].u + 1];
    ++first_[net.edges[e].v + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) first_[i + 1] += first_[i];
  arc_order_.resize(2 * net.edges.size());
  std::vector<std::size_t> fill(first_.begin(), first_.end() - 1);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    arc_order_[fill[net.edges[e].u]++] = static_cast<std::int32_t>(2 * e);
    arc_order_[fill[net.edges[e].v]++] = static_cast<std::int32_t>(2 * e + 1);
  }

  // Saturate source links; route what goes straight to the sink.
  excess_.resize(n_);
  sink_rcap_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double direct = std::min(net.source_cap[i], net.sink_cap[i]);
    flow_ += direct;
    excess_[i] = net.source_cap[i] - direct;
    sink_rcap_[i] = net.sink_cap[i] - direct;
  }
  label_.assign(n_, 0);
  current_.assign(first_.begin(), first_.end() - 1);
  active_.resize(n_ + 2);
  label_count_.assign(n_ + 2, 0);
}

void PushRelabelSolver::bucket_add(std::size_t u) {
  const auto d = label_[u];
  active_[static_cast<std::size_t>(d)].push_back(u);
  highest_ = std::max(highest_, d);
}

void PushRelabelSolver::global_relabel() {
  // Exact distance to the sink in the residual graph; unreachable nodes are
  // parked at label n (they can never send flow to the sink again).
  const auto dead = static_cast<std::int64_t>(n_);
  std::fill(label_.begin(), label_.end(), dead);
  std::fill(label_count_.begin(), label_count_.end(), 0);
  for (auto& b : active_) b.clear();
  highest_ = 0;
  std::vector<std::size_t> queue;
  queue.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i)
    if (sink_rcap_[i] > eps_) {
      label_[i] = 1;
      queue.push_back(i);
    }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::size_t v = queue[q];
    for (std::size_t k = first_[v]; k < first_[v + 1]; ++k) {
      const std::int32_t a = arc_order_[k];  // v -> u; need residual u -> v
      const std::size_t u = head_[static_cast<std::size_t>(a)];
      if (label_[u] == dead && rcap_[static_cast<std::size_t>(a ^ 1)] > eps_) {
        label_[u] = label_[v] + 1;
        queue.push_back(u);
      }
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    current_[i] = first_[i];
    if (label_[i] < dead) {
      ++label_count_[static_cast<std::size_t>(label_[i])];
      if (excess_[i] > eps_) bucket_add(i);
    }
  }
  relabels_since_global_ = 0;
}

void PushRelabelSolver::gap(std::int64_t level) {
  const auto dead = static_cast<std::int64_t>(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (label_[i] > level && label_[i] < dead) {
      --label_count_[static_cast<std::size_t>(label_[i])];
      label_[i] = dead;
    }
  }
}

void PushRelabelSolver::relabel(std::size_t u) {
  const auto dead = static_cast<std::int64_t>(n_);
  const std::int64_t old = label_[u];
  std::int64_t best = dead;
  if (sink_rcap_[u] > eps_) best = 1;
  for (std::size_t k = first_[u]; k < first_[u + 1]; ++k) {
    const std::int32_t a = arc_order_[k];
    if (rcap_[static_cast<std::size_t>(a)] > eps_) best = std::min(best, label_[head_[static_cast<std::size_t>(a)]] + 1);
  }
  best = std::min(best, dead);
  --label_count_[static_cast<std::size_t>(old)];
  label_[u] = best;
  current_[u] = first_[u];
  if (best < dead) ++label_count_[static_cast<std::size_t>(best)];
  ++relabels_since_global_;
  if (label_count_[static_cast<std::size_t>(old)] == 0 && old > 0) gap(old);
}

void PushRelabelSolver::discharge(std::size_t u) {
  const auto dead = static_cast<std::int64_t>(n_);
  while (excess_[u] > eps_ && label_[u] < dead) {
    if (label_[u] == 1 && sink_rcap_[u] > eps_) {
      const double delta = std::min(excess_[u], sink_rcap_[u]);
      excess_[u] -= delta;
      sink_rcap_[u] -= delta;
      flow_ += delta;
      continue;
    }
    bool pushed = false;
    for (; current_[u] < first_[u + 1]; ++current_[u]) {
      const std::int32_t a = arc_order_[current_[u]];
      const auto ai = static_cast<std::size_t>(a);
      const std::size_t v = head_[ai];
      if (rcap_[ai] > eps_ && label_[u] == label_[v] + 1) {
        const double delta = std::min(excess_[u], rcap_[ai]);
        rcap_[ai] -= delta;
        rcap_[ai ^ 1] += delta;
        const bool was_idle = excess_[v] <= eps_;
        excess_[u] -= delta;
        excess_[v] += delta;
        if (was_idle && excess_[v] > eps_) bucket_add(v);
        pushed = true;
        if (excess_[u] <= eps_) break;
      }
    }
    if (!pushed || current_[u] == first_[u + 1]) {
      if (excess_[u] > eps_) relabel(u);
    }
  }
}

CutResult PushRelabelSolver::solve() {
  global_relabel();
  const auto dead = static_cast<std::int64_t>(n_);
  while (highest_ >= 0) {
    auto& bucket = active_[static_cast<std::size_t>(highest_)];
    if (bucket.empty()) {
      --highest_;
      continue;
    }
    const std::size_t u = bucket.back();
    bucket.pop_back();
    if (label_[u] != highest_ || excess_[u] <= eps_ || label_[u] >= dead) continue;
    discharge(u);
    if (excess_[u] > eps_ && label_[u] < dead) bucket_add(u);
    if (relabels_since_global_ > n_) global_relabel();
  }
  CutResult result;
  result.flow = flow_;
  result.source_side = maximal_source_side();
  result.value = net_.cut_value(result.source_side);
  return result;
}

std::vector<std::uint8_t> PushRelabelSolver::maximal_source_side() const {
  std::vector<std::uint8_t> reaches_sink(n_, 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n_; ++i)
    if (sink_rcap_[i] > eps_) {
      reaches_sink[i] = 1;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t k = first_[v]; k < first_[v + 1]; ++k) {
      const std::int32_t a = arc_order_[k];
      const std::size_t u = head_[static_cast<std::size_t>(a)];
      if (!reaches_sink[u] && rcap_[static_cast<std::size_t>(a ^ 1)] > eps_) {
        reaches_sink[u] = 1;
        stack.push_back(u);
      }
    }
  }
  std::vector<std::uint8_t> side(n_);
  for (std::size_t i = 0; i < n_; ++i) side[i] = reaches_sink[i] ? 0 : 1;
  return side;
}

}  // namespace cheeger
