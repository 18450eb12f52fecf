#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "curvkit/error.hpp"
#include "curvkit/graph.hpp"
#include "curvkit/parallel.hpp"

namespace curvkit {

/// Local counts around an oriented edge i ~ j that feed every curvature
/// measure.
///
/// A diagonal-free 4-cycle at (i,j) is i - j - w - k - i with
/// k in S1(i) \ S1(j), w in S1(j) \ S1(i), k ~ w and k, w not in {i, j}. Such a
/// cycle has neither diagonal i-w nor j-k.
struct EdgeLocalStats {
  std::size_t d_i{0};
  std::size_t d_j{0};
  /// |S1(i) ∩ S1(j)|
  std::size_t triangles{0};
  /// Neighbours of i that close at least one diagonal-free 4-cycle.
  std::size_t sq_i{0};
  /// Neighbours of j that close at least one diagonal-free 4-cycle.
  std::size_t sq_j{0};
  /// Largest number of diagonal-free 4-cycles sharing a single node.
  std::size_t gamma_max{0};
  /// Distinct vertex sets {i,j,k,l} that carry a 4-cycle through edge (i,j),
  /// diagonals allowed.
  std::size_t all_four_cycles{0};

  friend bool operator==(const EdgeLocalStats&, const EdgeLocalStats&) = default;
};

enum class CurvatureKind { None, BFc, BFc3, BFcMod, JLc, AFc3, AFc4 };

inline constexpr std::array<CurvatureKind, 6> kAllCurvatureKinds = {
    CurvatureKind::BFc, CurvatureKind::BFc3, CurvatureKind::BFcMod,
    CurvatureKind::JLc, CurvatureKind::AFc3, CurvatureKind::AFc4};

inline std::string_view to_string(CurvatureKind k) {
  switch (k) {
    case CurvatureKind::None: return "none";
    case CurvatureKind::BFc: return "bfc";
    case CurvatureKind::BFc3: return "bfc3";
    case CurvatureKind::BFcMod: return "bfcmod";
    case CurvatureKind::JLc: return "jlc";
    case CurvatureKind::AFc3: return "afc3";
    case CurvatureKind::AFc4: return "afc4";
  }
  return "?";
}

inline CurvatureKind parse_curvature_kind(std::string_view s) {
  for (auto k : {CurvatureKind::None, CurvatureKind::BFc, CurvatureKind::BFc3,
                 CurvatureKind::BFcMod, CurvatureKind::JLc, CurvatureKind::AFc3,
                 CurvatureKind::AFc4}) {
    if (to_string(k) == s) return k;
  }
  throw InvalidArgument("unknown curvature kind '" + std::string(s) + "'");
}

inline std::ostream& operator<<(std::ostream& os, CurvatureKind k) { return os << to_string(k); }

namespace detail {

inline bool contains(std::span<const NodeId> sorted, NodeId x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

inline std::size_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

inline void require_edge(const Graph& g, NodeId i, NodeId j) {
  if (i >= g.node_count() || j >= g.node_count() || !g.has_edge(i, j)) {
    throw MissingEdgeError(i, j);
  }
}

/// For every k in S1(a) \ (S1(b) ∪ {b}), the number of w in
/// S1(k) ∩ S1(b) \ (S1(a) ∪ {a}). Returns (#k with a nonzero count, max count).
inline std::pair<std::size_t, std::size_t> diagonal_free_side(const Graph& g, NodeId a,
                                                               NodeId b) {
  const auto na = g.neighbors(a);
  const auto nb = g.neighbors(b);
  std::size_t closing = 0;
  std::size_t most = 0;
  for (NodeId k : na) {
    if (k == b || contains(nb, k)) continue;
    std::size_t c = 0;
    for (NodeId w : g.neighbors(k)) {
      if (w != a && contains(nb, w) && !contains(na, w)) ++c;
    }
    if (c > 0) {
      ++closing;
      most = std::max(most, c);
    }
  }
  return {closing, most};
}

}  // namespace detail

/// Local statistics of edge (i,j). Throws MissingEdgeError if absent.
inline EdgeLocalStats edge_local_stats(const Graph& g, NodeId i, NodeId j) {
  detail::require_edge(g, i, j);
  const auto ni = g.neighbors(i);
  const auto nj = g.neighbors(j);

  EdgeLocalStats s;
  s.d_i = ni.size();
  s.d_j = nj.size();
  s.triangles = detail::intersection_size(ni, nj);

  // Every diagonal-free cycle (k, w) is counted once from each side, so the
  // per-node maxima from both sides together give gamma_max.
  auto [sq_i, max_i] = detail::diagonal_free_side(g, i, j);
  auto [sq_j, max_j] = detail::diagonal_free_side(g, j, i);
  s.sq_i = sq_i;
  s.sq_j = sq_j;
  s.gamma_max = std::max(max_i, max_j);

  std::vector<std::pair<NodeId, NodeId>> sets;
  for (NodeId k : ni) {
    if (k == j) continue;
    for (NodeId l : g.neighbors(k)) {
      if (l != i && l != j && detail::contains(nj, l)) {
        sets.emplace_back(std::min(k, l), std::max(k, l));
      }
    }
  }
  std::sort(sets.begin(), sets.end());
  s.all_four_cycles = static_cast<std::size_t>(
      std::unique(sets.begin(), sets.end()) - sets.begin());
  return s;
}

inline EdgeLocalStats edge_local_stats(const Graph& g, Edge e) {
  return edge_local_stats(g, e.u, e.v);
}

// Formulas over precomputed statistics. Degrees must be >= 1.

inline double bfc3_from_stats(const EdgeLocalStats& s) {
  const double di = static_cast<double>(s.d_i);
  const double dj = static_cast<double>(s.d_j);
  if (std::min(s.d_i, s.d_j) == 1) return 0.0;
  const double hi = std::max(di, dj);
  const double lo = std::min(di, dj);
  const double t = static_cast<double>(s.triangles);
  return 2.0 / hi + 2.0 / lo - 2.0 + 2.0 * t / hi + t / lo;
}

inline double bfc_from_stats(const EdgeLocalStats& s) {
  if (std::min(s.d_i, s.d_j) == 1) return 0.0;
  double c = bfc3_from_stats(s);
  if (s.gamma_max > 0) {
    const double hi = static_cast<double>(std::max(s.d_i, s.d_j));
    c += static_cast<double>(s.sq_i + s.sq_j) / (static_cast<double>(s.gamma_max) * hi);
  }
  return c;
}

inline double jlc_from_stats(const EdgeLocalStats& s) {
  const double di = static_cast<double>(s.d_i);
  const double dj = static_cast<double>(s.d_j);
  const double t = static_cast<double>(s.triangles);
  const double hi = std::max(di, dj);
  const double lo = std::min(di, dj);
  auto pos = [](double x) { return std::max(x, 0.0); };
  // hi/lo order keeps the value bitwise symmetric in (i, j)
  const double base = 1.0 - 1.0 / hi - 1.0 / lo;
  return -pos(base - t / lo) - pos(base - t / hi) + t / hi;
}

inline double afc3_from_stats(const EdgeLocalStats& s) {
  return 4.0 - static_cast<double>(s.d_i) - static_cast<double>(s.d_j) +
         3.0 * static_cast<double>(s.triangles);
}

inline double afc4_from_stats(const EdgeLocalStats& s) {
  return afc3_from_stats(s) + 2.0 * static_cast<double>(s.all_four_cycles);
}

/// Balanced Forman curvature; 0 when an endpoint is a leaf.
inline double bfc(const Graph& g, NodeId i, NodeId j) {
  return bfc_from_stats(edge_local_stats(g, i, j));
}

/// Balanced Forman curvature without the 4-cycle term.
inline double bfc3(const Graph& g, NodeId i, NodeId j) {
  detail::require_edge(g, i, j);
  EdgeLocalStats s;
  s.d_i = g.degree(i);
  s.d_j = g.degree(j);
  s.triangles = detail::intersection_size(g.neighbors(i), g.neighbors(j));
  return bfc3_from_stats(s);
}

/// Balanced Forman curvature as computed by the widely used reference
/// implementation, whose 4-cycle loop uses (A^2 - A) path counts. That count
/// includes the walks through the edge itself and the k = i, k = j terms, so
/// its sharp/lambda values differ from the set definition. Degree and
/// triangle terms are the same as bfc3.
inline double bfc_mod(const Graph& g, NodeId i, NodeId j) {
  detail::require_edge(g, i, j);
  const auto ni = g.neighbors(i);
  const auto nj = g.neighbors(j);
  const std::size_t di = ni.size();
  const std::size_t dj = nj.size();
  if (std::min(di, dj) == 1) return 0.0;

  // A2[a][b] = |S1(a) ∩ S1(b)|, and A2[a][a] = d_a.
  auto a2 = [&](NodeId a, NodeId b) -> std::size_t {
    if (a == b) return g.degree(a);
    return detail::intersection_size(g.neighbors(a), g.neighbors(b));
  };

  std::size_t sharp = 0;
  std::size_t lambda = 0;
  auto visit = [&](std::size_t paths, bool adjacent) {
    // TMP = A2 - A; the A[k,j] / A[i,k] and A[i,j] factors are 1 here.
    const std::ptrdiff_t tmp =
        static_cast<std::ptrdiff_t>(paths) - static_cast<std::ptrdiff_t>(adjacent ? 1 : 0);
    if (tmp > 0) {
      ++sharp;
      lambda = std::max(lambda, static_cast<std::size_t>(tmp));
    }
  };
  for (NodeId k : nj) visit(a2(i, k), detail::contains(ni, k));
  for (NodeId k : ni) visit(a2(k, j), detail::contains(nj, k));

  const double hi = static_cast<double>(std::max(di, dj));
  const double lo = static_cast<double>(std::min(di, dj));
  const double t = static_cast<double>(detail::intersection_size(ni, nj));
  double c = 2.0 / hi + 2.0 / lo - 2.0 + (2.0 / hi + 1.0 / lo) * t;
  if (lambda > 0) c += static_cast<double>(sharp) / (hi * static_cast<double>(lambda));
  return c;
}

/// Jost-Liu curvature.
inline double jlc(const Graph& g, NodeId i, NodeId j) {
  detail::require_edge(g, i, j);
  EdgeLocalStats s;
  s.d_i = g.degree(i);
  s.d_j = g.degree(j);
  s.triangles = detail::intersection_size(g.neighbors(i), g.neighbors(j));
  return jlc_from_stats(s);
}

/// Augmented Forman curvature with triangles only.
inline double afc3(const Graph& g, NodeId i, NodeId j) {
  detail::require_edge(g, i, j);
  EdgeLocalStats s;
  s.d_i = g.degree(i);
  s.d_j = g.degree(j);
  s.triangles = detail::intersection_size(g.neighbors(i), g.neighbors(j));
  return afc3_from_stats(s);
}

/// Augmented Forman curvature with triangles and all 4-cycles.
inline double afc4(const Graph& g, NodeId i, NodeId j) {
  return afc4_from_stats(edge_local_stats(g, i, j));
}

inline double curvature(const Graph& g, NodeId i, NodeId j, CurvatureKind kind) {
  switch (kind) {
    case CurvatureKind::BFc: return bfc(g, i, j);
    case CurvatureKind::BFc3: return bfc3(g, i, j);
    case CurvatureKind::BFcMod: return bfc_mod(g, i, j);
    case CurvatureKind::JLc: return jlc(g, i, j);
    case CurvatureKind::AFc3: return afc3(g, i, j);
    case CurvatureKind::AFc4: return afc4(g, i, j);
    case CurvatureKind::None: break;
  }
  throw InvalidArgument("curvature kind 'none' has no value");
}

inline double curvature(const Graph& g, Edge e, CurvatureKind kind) {
  return curvature(g, e.u, e.v, kind);
}

struct EdgeCurvature {
  Edge edge;
  double value{0.0};
};

/// Curvature of every edge, in lexicographic edge order. Edges are evaluated
/// in parallel; the output order does not depend on the thread count.
inline std::vector<EdgeCurvature> curvature_distribution(const Graph& g, CurvatureKind kind) {
  if (kind == CurvatureKind::None) throw InvalidArgument("curvature kind 'none' has no value");
  const auto edges = g.edges();
  std::vector<EdgeCurvature> out(edges.size());
  parallel_for(edges.size(), [&](std::size_t idx) {
    out[idx] = {edges[idx], curvature(g, edges[idx], kind)};
  });
  return out;
}

/// CSV with header "u,v,curvature" and six decimals.
inline void write_curvature_csv(std::ostream& os, std::span<const EdgeCurvature> records) {
  os << "u,v,curvature\n";
  char buf[64];
  for (const auto& r : records) {
    // Avoid printing "-0.000000".
    const double v = r.value == 0.0 ? 0.0 : r.value;
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    os << r.edge.u << ',' << r.edge.v << ',' << buf << '\n';
  }
}

}  // namespace curvkit
