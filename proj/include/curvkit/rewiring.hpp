#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <tuple>
#include <vector>

#include "curvkit/curvature.hpp"
#include "curvkit/error.hpp"
#include "curvkit/graph.hpp"

namespace curvkit {

/// The seeded generator used for every stochastic decision. std::mt19937_64
/// is fully specified by the standard, and uniform doubles are derived from
/// its raw output by hand, so a seed yields the same stream on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Samples index i with probability proportional to exp(tau * values[i]).
/// Stabilized by subtracting the maximum exponent.
inline std::size_t softmax_sample(std::span<const double> values, double tau, Rng& rng) {
  if (values.empty()) throw InvalidArgument("softmax_sample: empty value list");
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvalidArgument("softmax_sample: tau must be positive and finite");
  }
  double top = -std::numeric_limits<double>::infinity();
  for (double v : values) top = std::max(top, tau * v);

  std::vector<double> weights(values.size());
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    weights[i] = std::exp(tau * values[i] - top);
    total += weights[i];
  }
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  // Rounding can leave target == total.
  return last_positive;
}

struct SdrfParams {
  CurvatureKind kind{CurvatureKind::BFc};
  std::size_t max_iterations{1};
  double tau{1.0};
  /// Removal threshold; no removals when absent.
  std::optional<double> c_plus;
  std::uint64_t seed{0};
  /// Recompute every edge after each mutation instead of the 2-hop
  /// neighbourhood. Only useful for cross-checking the local update.
  bool full_recompute{false};

  void validate() const {
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be >= 1");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("tau must be positive");
    if (c_plus && std::isnan(*c_plus)) throw InvalidArgument("c_plus must not be NaN");
  }
};

struct RewiringStep {
  std::size_t iteration{0};
  Edge target;
  double target_curvature{0.0};
  std::optional<Edge> added;
  std::optional<double> improvement;
  std::optional<Edge> removed;
  std::optional<double> removed_curvature;

  friend bool operator==(const RewiringStep&, const RewiringStep&) = default;
};

using RewiringTrace = std::vector<RewiringStep>;

struct RewiringResult {
  Graph graph;
  RewiringTrace trace;
};

/// Called once per iteration with the graph as it was when the target edge
/// was selected, before any mutation.
using SelectionObserver =
    std::function<void(const Graph& snapshot, const RewiringStep& selection)>;

/// Absent pairs (k, l) with k in S1(i) ∪ {i}, l in S1(j) ∪ {j}, k != l, each
/// closing a 3- or 4-cycle through (i, j). Sorted, without duplicates.
inline std::vector<Edge> sdrf_candidates(const Graph& g, Edge target) {
  std::vector<NodeId> left(g.neighbors(target.u).begin(), g.neighbors(target.u).end());
  std::vector<NodeId> right(g.neighbors(target.v).begin(), g.neighbors(target.v).end());
  left.push_back(target.u);
  right.push_back(target.v);
  std::vector<Edge> out;
  for (NodeId k : left) {
    for (NodeId l : right) {
      if (k != l && !g.has_edge(k, l)) out.emplace_back(k, l);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

/// Edge -> curvature table kept in sync with a mutating graph.
class CurvatureTable {
 public:
  CurvatureTable(const Graph& g, CurvatureKind kind) : kind_(kind) {
    for (const auto& r : curvature_distribution(g, kind)) values_.emplace(r.edge, r.value);
  }

  /// Refreshes every edge whose curvature can depend on the adjacency of
  /// (a, b): those with an endpoint in the closed neighbourhood of a or b.
  /// `extra` lists nodes that were neighbours before the mutation.
  void refresh_around(const Graph& g, NodeId a, NodeId b, std::span<const NodeId> extra) {
    std::vector<NodeId> nodes{a, b};
    nodes.insert(nodes.end(), g.neighbors(a).begin(), g.neighbors(a).end());
    nodes.insert(nodes.end(), g.neighbors(b).begin(), g.neighbors(b).end());
    nodes.insert(nodes.end(), extra.begin(), extra.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<Edge> touched;
    for (NodeId x : nodes) {
      for (NodeId y : g.neighbors(x)) touched.emplace_back(x, y);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (const Edge& e : touched) values_[e] = curvature(g, e, kind_);
  }

  void recompute_all(const Graph& g) {
    values_.clear();
    for (const auto& r : curvature_distribution(g, kind_)) values_.emplace(r.edge, r.value);
  }

  void erase(Edge e) { values_.erase(e); }

  bool empty() const { return values_.empty(); }

  /// Minimum curvature; ties resolved to the lexicographically smallest edge.
  std::pair<Edge, double> min() const {
    auto best = values_.begin();
    for (auto it = values_.begin(); it != values_.end(); ++it) {
      if (it->second < best->second) best = it;
    }
    return *best;
  }

  /// Maximum curvature; ties resolved to the lexicographically smallest edge.
  std::pair<Edge, double> max() const {
    auto best = values_.begin();
    for (auto it = values_.begin(); it != values_.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    return *best;
  }

  const std::map<Edge, double>& values() const { return values_; }

 private:
  CurvatureKind kind_;
  std::map<Edge, double> values_;
};

}  // namespace detail

/// Stochastic discrete Ricci flow.
///
/// Each iteration picks the most negatively curved edge, scores every
/// candidate edge that would close a 3- or 4-cycle through it by the change
/// in that edge's curvature, adds one candidate drawn from a softmax with
/// temperature tau, and then, if a threshold is configured, removes the most
/// positively curved edge when its curvature exceeds it.
///
/// With kind None the graph is returned unchanged and the trace is empty.
inline RewiringResult sdrf(const Graph& input, const SdrfParams& p,
                           const SelectionObserver& observer = {}) {
  p.validate();
  if (input.empty()) throw EmptyGraphError("sdrf: graph has no nodes");
  RewiringResult out{input, {}};
  if (p.kind == CurvatureKind::None) return out;

  Graph& g = out.graph;
  Rng rng(p.seed);
  detail::CurvatureTable table(g, p.kind);

  auto after_mutation = [&](NodeId a, NodeId b, std::span<const NodeId> before) {
    if (p.full_recompute) {
      table.recompute_all(g);
    } else {
      table.refresh_around(g, a, b, before);
    }
  };

  for (std::size_t it = 0; it < p.max_iterations; ++it) {
    if (table.empty()) break;
    RewiringStep step;
    step.iteration = it;
    std::tie(step.target, step.target_curvature) = table.min();
    if (observer) observer(g, step);

    const auto candidates = sdrf_candidates(g, step.target);
    if (candidates.empty()) {
      out.trace.push_back(step);
      continue;
    }

    std::vector<double> gains(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      g.add_edge(candidates[c].u, candidates[c].v);
      gains[c] = curvature(g, step.target, p.kind) - step.target_curvature;
      g.remove_edge(candidates[c].u, candidates[c].v);
    }
    const std::size_t pick = softmax_sample(gains, p.tau, rng);
    const Edge added = candidates[pick];
    g.add_edge(added.u, added.v);
    after_mutation(added.u, added.v, {});
    step.added = added;
    step.improvement = gains[pick];

    if (p.c_plus) {
      auto [edge, value] = table.max();
      if (value > *p.c_plus) {
        std::vector<NodeId> before(g.neighbors(edge.u).begin(), g.neighbors(edge.u).end());
        before.insert(before.end(), g.neighbors(edge.v).begin(), g.neighbors(edge.v).end());
        g.remove_edge(edge.u, edge.v);
        table.erase(edge);
        after_mutation(edge.u, edge.v, before);
        step.removed = edge;
        step.removed_curvature = value;
      }
    }
    out.trace.push_back(step);
  }
  return out;
}

/// Applies a trace's additions and removals to a graph, in order.
inline Graph replay_trace(Graph g, std::span<const RewiringStep> trace) {
  for (const auto& s : trace) {
    if (s.added && !g.add_edge(s.added->u, s.added->v)) {
      throw InvalidArgument("trace adds an edge that is already present");
    }
    if (s.removed && !g.remove_edge(s.removed->u, s.removed->v)) {
      throw InvalidArgument("trace removes an edge that is absent");
    }
  }
  return g;
}

}  // namespace curvkit
