#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "curvkit/audit.hpp"
#include "curvkit/curvature.hpp"
#include "curvkit/error.hpp"
#include "curvkit/graph.hpp"

namespace curvkit {

/// Dense D~^{-1/2} (A + I) D~^{-1/2}, where D~ is the degree matrix of A + I.
struct NormalizedAdjacency {
  Eigen::MatrixXd matrix;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

inline NormalizedAdjacency normalized_adjacency(const Graph& g) {
  if (g.empty()) throw EmptyGraphError("normalized_adjacency: graph has no nodes");
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::VectorXd inv_sqrt(n);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i) + 1));
  }
  NormalizedAdjacency a{Eigen::MatrixXd::Zero(n, n)};
  for (NodeId i = 0; i < g.node_count(); ++i) {
    a.matrix(i, i) = inv_sqrt[i] * inv_sqrt[i];
    for (NodeId j : g.neighbors(i)) a.matrix(i, j) = inv_sqrt[i] * inv_sqrt[j];
  }
  return a;
}

enum class Activation { Identity, Tanh };

inline Activation parse_activation(std::string_view s) {
  if (s == "identity" || s == "linear") return Activation::Identity;
  if (s == "tanh") return Activation::Tanh;
  throw InvalidArgument("unknown nonlinearity '" + std::string(s) + "'");
}

/// Scalar-feature message passing network with
///   phi_l(a, b) = alpha * sigma(b),  psi_l(a, b) = beta * sigma(b),
/// so |grad phi_l| <= alpha and |grad psi_l| <= beta hold by construction
/// (sigma is the identity or tanh, both 1-Lipschitz).
struct MpnnConfig {
  std::size_t depth{2};
  double alpha{1.0};
  double beta{1.0};
  std::size_t l0{0};
  Activation sigma{Activation::Identity};

  void validate() const {
    if (depth < 2) throw InvalidArgument("depth must be >= 2");
    if (l0 + 2 > depth) throw InvalidArgument("l0 must satisfy l0 <= depth - 2");
    if (!(alpha > 0.0) || !(beta > 0.0)) throw InvalidArgument("alpha and beta must be > 0");
  }
};

namespace detail {

inline Eigen::VectorXd activate(const Eigen::VectorXd& x, Activation s) {
  if (s == Activation::Identity) return x;
  return x.array().tanh().matrix();
}

/// h_i <- phi(h_i, sum_j A_ij psi(h_i, h_j)).
inline Eigen::VectorXd mpnn_layer(const NormalizedAdjacency& a, const Eigen::VectorXd& h,
                                  const MpnnConfig& cfg) {
  Eigen::VectorXd messages = a.matrix * (cfg.beta * activate(h, cfg.sigma));
  return cfg.alpha * activate(messages, cfg.sigma);
}

}  // namespace detail

/// Runs all cfg.depth layers; result[l] is h^(l), result[0] the input.
inline std::vector<Eigen::VectorXd> mpnn_forward(const NormalizedAdjacency& a,
                                                 std::span<const double> features,
                                                 const MpnnConfig& cfg) {
  cfg.validate();
  if (features.size() != a.size()) throw InvalidArgument("feature length != node count");
  std::vector<Eigen::VectorXd> states;
  states.reserve(cfg.depth + 1);
  states.emplace_back(Eigen::Map<const Eigen::VectorXd>(features.data(),
                                                        static_cast<Eigen::Index>(features.size())));
  for (std::size_t l = 0; l < cfg.depth; ++l) {
    states.push_back(detail::mpnn_layer(a, states.back(), cfg));
  }
  return states;
}

inline constexpr double kJacobianStep = 1e-5;

/// d h^(l0+2)_k / d h^(l0)_source for every k, by central differences around
/// the state reached from all-ones input features.
inline Eigen::VectorXd jacobian_column(const NormalizedAdjacency& a, const MpnnConfig& cfg,
                                       NodeId source, double step = kJacobianStep) {
  cfg.validate();
  if (source >= a.size()) throw NodeRangeError(source, a.size());
  Eigen::VectorXd base = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(a.size()));
  for (std::size_t l = 0; l < cfg.l0; ++l) base = detail::mpnn_layer(a, base, cfg);

  auto two_layers = [&](Eigen::VectorXd h) {
    h = detail::mpnn_layer(a, h, cfg);
    return detail::mpnn_layer(a, h, cfg);
  };
  Eigen::VectorXd plus = base;
  Eigen::VectorXd minus = base;
  plus[source] += step;
  minus[source] -= step;
  return (two_layers(plus) - two_layers(minus)) / (2.0 * step);
}

inline double jacobian_entry(const NormalizedAdjacency& a, const MpnnConfig& cfg, NodeId source,
                             NodeId target) {
  if (target >= a.size()) throw NodeRangeError(target, a.size());
  return jacobian_column(a, cfg, source)[target];
}

/// Neighbours of j, other than i and the triangle nodes, that close no
/// diagonal-free 4-cycle through (i, j). They lie at distance two from i and
/// only see i through the edge itself.
inline std::vector<NodeId> tree_like_set(const Graph& g, NodeId i, NodeId j) {
  detail::require_edge(g, i, j);
  const auto ni = g.neighbors(i);
  std::vector<NodeId> out;
  for (NodeId k : g.neighbors(j)) {
    if (k == i || detail::contains(ni, k)) continue;
    bool on_square = false;
    for (NodeId w : g.neighbors(k)) {
      if (w != j && detail::contains(ni, w) && !detail::contains(g.neighbors(j), w)) {
        on_square = true;
        break;
      }
    }
    if (!on_square) out.push_back(k);
  }
  return out;
}

struct BoundReport {
  /// Oriented so that degree(source) <= degree(sink).
  NodeId source{0};
  NodeId sink{0};
  double delta{0.0};
  double lhs{0.0};
  double rhs{0.0};
  std::size_t q_size{0};
  double one_over_delta{0.0};
  bool pass{false};
};

/// Checks the Jacobian bound
///   mean_{k in Q_j} |d h_k^(l0+2) / d h_i^(l0)| < (alpha beta)^2 delta^(1/4)
/// and |Q_j| > 1/delta, with delta = BFc(i,j) + 2. The edge must satisfy
/// condition 2; otherwise ConditionNotMet is thrown.
inline BoundReport verify_jacobian_bound(const Graph& g, NodeId i, NodeId j,
                                         const MpnnConfig& cfg) {
  cfg.validate();
  const auto audit = audit_edge(g, i, j);
  if (!audit.cond2) {
    throw ConditionNotMet("edge (" + std::to_string(i) + "," + std::to_string(j) +
                          ") does not satisfy condition 2 (delta_max = " +
                          std::to_string(audit.delta_max) + ")");
  }
  if (g.degree(i) > g.degree(j)) std::swap(i, j);

  BoundReport r;
  r.source = i;
  r.sink = j;
  r.delta = audit.delta_max;
  r.one_over_delta = 1.0 / r.delta;
  r.rhs = std::pow(cfg.alpha * cfg.beta, 2) * std::pow(r.delta, 0.25);

  const auto q = tree_like_set(g, i, j);
  r.q_size = q.size();
  if (!q.empty()) {
    const auto a = normalized_adjacency(g);
    const auto col = jacobian_column(a, cfg, i);
    double sum = 0.0;
    for (NodeId k : q) sum += std::abs(col[k]);
    r.lhs = sum / static_cast<double>(q.size());
  }
  r.pass = !q.empty() && r.lhs < r.rhs && static_cast<double>(r.q_size) > r.one_over_delta;
  return r;
}

/// Two adjacent hubs, each with d - 1 private leaves (both hubs have degree d).
/// Hubs are nodes 0 and 1.
inline Graph double_star(std::size_t d) {
  if (d < 1) throw InvalidArgument("double_star: d must be >= 1");
  const std::size_t n = 2 * d;
  std::vector<std::pair<NodeId, NodeId>> pairs{{0, 1}};
  NodeId next = 2;
  for (NodeId hub : {NodeId{0}, NodeId{1}}) {
    for (std::size_t l = 0; l + 1 < d; ++l) pairs.emplace_back(hub, next++);
  }
  return Graph::from_edges(n, pairs);
}

}  // namespace curvkit
