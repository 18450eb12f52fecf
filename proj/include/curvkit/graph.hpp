#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <compare>
#include <initializer_list>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "curvkit/error.hpp"

namespace curvkit {

using NodeId = std::uint32_t;

/// Undirected edge, normalized so that u < v. Ordering is lexicographic,
/// which is the tie-breaking order used everywhere in the library.
struct Edge {
  NodeId u{0};
  NodeId v{0};

  Edge() = default;
  Edge(NodeId a, NodeId b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph stored as sorted adjacency lists.
///
/// No self-loops, no parallel edges, symmetric adjacency. Values are cheap to
/// copy for the graph sizes this library targets; algorithms that mutate
/// (rewiring) operate on their own copy.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t node_count) : adj_(node_count) {}

  /// Builds a graph from arbitrary endpoint pairs, dropping self-loops and
  /// duplicates. Endpoints must be < node_count.
  static Graph from_edges(std::size_t node_count,
                          std::span<const std::pair<NodeId, NodeId>> pairs) {
    Graph g(node_count);
    for (auto [a, b] : pairs) {
      g.check(a);
      g.check(b);
      if (a == b) continue;
      g.adj_[a].push_back(b);
      g.adj_[b].push_back(a);
    }
    for (auto& nbrs : g.adj_) {
      std::sort(nbrs.begin(), nbrs.end());
      nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
      g.edge_count_ += nbrs.size();
    }
    g.edge_count_ /= 2;
    return g;
  }

  static Graph from_edges(std::size_t node_count,
                          std::initializer_list<std::pair<NodeId, NodeId>> pairs) {
    std::vector<std::pair<NodeId, NodeId>> v(pairs);
    return from_edges(node_count, std::span<const std::pair<NodeId, NodeId>>(v));
  }

  std::size_t node_count() const noexcept { return adj_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return adj_.empty(); }

  std::size_t degree(NodeId i) const {
    check(i);
    return adj_[i].size();
  }

  std::span<const NodeId> neighbors(NodeId i) const {
    check(i);
    return adj_[i];
  }

  bool has_edge(NodeId a, NodeId b) const {
    check(a);
    check(b);
    // Search the shorter list.
    const auto& s = adj_[a].size() <= adj_[b].size() ? adj_[a] : adj_[b];
    NodeId other = adj_[a].size() <= adj_[b].size() ? b : a;
    return std::binary_search(s.begin(), s.end(), other);
  }

  bool has_edge(Edge e) const { return has_edge(e.u, e.v); }

  /// Nodes at distance exactly two from i.
  std::vector<NodeId> two_hop(NodeId i) const {
    check(i);
    std::vector<NodeId> out;
    for (NodeId k : adj_[i]) {
      for (NodeId w : adj_[k]) {
        if (w != i && !std::binary_search(adj_[i].begin(), adj_[i].end(), w)) {
          out.push_back(w);
        }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// All edges in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adj_.size(); ++u) {
      for (NodeId v : adj_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  /// Returns false if the edge already existed or is a self-loop.
  bool add_edge(NodeId a, NodeId b) {
    check(a);
    check(b);
    if (a == b) return false;
    auto pos = std::lower_bound(adj_[a].begin(), adj_[a].end(), b);
    if (pos != adj_[a].end() && *pos == b) return false;
    adj_[a].insert(pos, b);
    adj_[b].insert(std::lower_bound(adj_[b].begin(), adj_[b].end(), a), a);
    ++edge_count_;
    return true;
  }

  /// Returns false if the edge was absent.
  bool remove_edge(NodeId a, NodeId b) {
    check(a);
    check(b);
    auto pos = std::lower_bound(adj_[a].begin(), adj_[a].end(), b);
    if (pos == adj_[a].end() || *pos != b) return false;
    adj_[a].erase(pos);
    adj_[b].erase(std::lower_bound(adj_[b].begin(), adj_[b].end(), a));
    --edge_count_;
    return true;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check(NodeId i) const {
    if (i >= adj_.size()) throw NodeRangeError(i, adj_.size());
  }

  std::vector<std::vector<NodeId>> adj_;
  std::size_t edge_count_{0};
};

/// Graph with a per-node class id.
struct LabeledGraph {
  Graph graph;
  std::vector<std::int64_t> labels;
};

/// A subgraph together with the id of each of its nodes in the parent graph.
struct Subgraph {
  Graph graph;
  std::vector<NodeId> parent_ids;
};

/// Connected component id per node, numbered in order of smallest member.
inline std::vector<std::size_t> connected_components(const Graph& g) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(g.node_count(), unset);
  std::size_t next = 0;
  std::queue<NodeId> frontier;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    frontier.push(s);
    while (!frontier.empty()) {
      NodeId u = frontier.front();
      frontier.pop();
      for (NodeId w : g.neighbors(u)) {
        if (comp[w] == unset) {
          comp[w] = next;
          frontier.push(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

/// Subgraph induced by the nodes for which keep[i] is true, ids compacted in
/// increasing parent order.
inline Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep) {
  Subgraph out;
  std::vector<NodeId> remap(g.node_count(), 0);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (keep[i]) {
      remap[i] = static_cast<NodeId>(out.parent_ids.size());
      out.parent_ids.push_back(i);
    }
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const Edge& e : g.edges()) {
    if (keep[e.u] && keep[e.v]) pairs.emplace_back(remap[e.u], remap[e.v]);
  }
  out.graph = Graph::from_edges(out.parent_ids.size(), pairs);
  return out;
}

/// Largest connected component. Ties go to the component containing the
/// smallest node id.
inline Subgraph largest_connected_component(const Graph& g) {
  if (g.empty()) return {};
  auto comp = connected_components(g);
  std::vector<std::size_t> sizes;
  for (auto c : comp) {
    if (c >= sizes.size()) sizes.resize(c + 1, 0);
    ++sizes[c];
  }
  // Components are numbered by smallest member, so the first maximum wins ties.
  auto best = static_cast<std::size_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<bool> keep(g.node_count());
  for (std::size_t i = 0; i < comp.size(); ++i) keep[i] = comp[i] == best;
  return induced_subgraph(g, keep);
}

inline bool is_connected(const Graph& g) {
  if (g.node_count() <= 1) return true;
  auto comp = connected_components(g);
  return std::all_of(comp.begin(), comp.end(), [](auto c) { return c == 0; });
}

}  // namespace curvkit
