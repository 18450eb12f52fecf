#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "curvkit/error.hpp"
#include "curvkit/graph.hpp"

namespace curvkit {

/// original_ids[compact_id] is the id the node carried in the input file.
using IdMap = std::vector<std::uint64_t>;

struct LoadedGraph {
  Graph graph;
  IdMap ids;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Splits on runs of spaces and tabs.
inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace detail

/// Parses a whitespace-separated edge list. Lines starting with '#' and blank
/// lines are skipped. Node ids are compacted to 0..n-1 in increasing order of
/// original id. The result is always undirected; directed input is
/// symmetrized, which for an unweighted simple graph is the same as merging
/// the two arc directions.
inline LoadedGraph parse_edge_list(std::istream& in, bool directed_input = false) {
  (void)directed_input;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto tok = detail::split_ws(s);
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    if (tok.size() != 2 || !detail::parse_number(tok[0], a) ||
        !detail::parse_number(tok[1], b)) {
      throw ParseError(lineno, "expected two non-negative integer node ids, got '" +
                                   std::string(s) + "'");
    }
    raw.emplace_back(a, b);
  }
  if (raw.empty()) throw EmptyGraphError("edge list contains no edges");

  IdMap ids;
  ids.reserve(raw.size() * 2);
  for (auto [a, b] : raw) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::unordered_map<std::uint64_t, NodeId> compact;
  compact.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) compact[ids[i]] = static_cast<NodeId>(i);

  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(raw.size());
  for (auto [a, b] : raw) pairs.emplace_back(compact[a], compact[b]);
  return {Graph::from_edges(ids.size(), pairs), std::move(ids)};
}

inline LoadedGraph load_edge_list(const std::filesystem::path& path,
                                  bool directed_input = false) {
  auto in = detail::open_input(path);
  return parse_edge_list(in, directed_input);
}

/// Writes "u v" per edge in lexicographic order using compact ids.
/// Isolated nodes are written as self-loops so a reload keeps the node set.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (g.degree(i) == 0) out << i << ' ' << i << '\n';
  }
}

inline void write_id_map(std::ostream& out, const IdMap& ids) {
  out << "compact_id,original_id\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << i << ',' << ids[i] << '\n';
}

/// Reads "node_id label" lines keyed by original id and attaches them to the
/// graph. Every node must receive a non-negative label.
inline LabeledGraph attach_labels(std::istream& in, const LoadedGraph& lg) {
  std::unordered_map<std::uint64_t, NodeId> compact;
  for (std::size_t i = 0; i < lg.ids.size(); ++i) compact[lg.ids[i]] = static_cast<NodeId>(i);

  std::vector<std::int64_t> labels(lg.graph.node_count(), -1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto tok = detail::split_ws(s);
    std::uint64_t node = 0;
    std::int64_t label = 0;
    if (tok.size() != 2 || !detail::parse_number(tok[0], node) ||
        !detail::parse_number(tok[1], label) || label < 0) {
      throw ParseError(lineno, "expected 'node_id label' with a non-negative label");
    }
    auto it = compact.find(node);
    if (it != compact.end()) labels[it->second] = label;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      throw Error("node " + std::to_string(lg.ids[i]) + " has no label");
    }
  }
  return {lg.graph, std::move(labels)};
}

inline LabeledGraph load_labels(const std::filesystem::path& path, const LoadedGraph& lg) {
  auto in = detail::open_input(path);
  return attach_labels(in, lg);
}

/// Reads a "config_id,accuracy" CSV and returns the accuracy column in file
/// order.
inline std::vector<double> parse_samples_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (s != "config_id,accuracy") {
        throw ParseError(lineno, "expected header 'config_id,accuracy'");
      }
      continue;
    }
    auto comma = s.rfind(',');
    if (comma == std::string_view::npos) throw ParseError(lineno, "missing ','");
    auto field = std::string(detail::trim(s.substr(comma + 1)));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size() || field.empty() || !std::isfinite(v)) {
      throw ParseError(lineno, "accuracy is not a finite number");
    }
    values.push_back(v);
  }
  return values;
}

inline std::vector<double> load_samples_csv(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return parse_samples_csv(in);
}

}  // namespace curvkit
