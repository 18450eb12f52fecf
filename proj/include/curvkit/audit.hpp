#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "curvkit/curvature.hpp"
#include "curvkit/error.hpp"
#include "curvkit/graph.hpp"
#include "curvkit/io.hpp"
#include "curvkit/rewiring.hpp"

namespace curvkit {

/// Bottleneck conditions evaluated for one edge selected by the rewiring.
///
/// delta_max = BFc + 2 is the largest delta the curvature allows. Condition 2
/// asks delta_max < 1/sqrt(max degree) and delta_max < 1/gamma_max; the
/// relaxed condition 2b replaces the degree bound by delta_max <= 1/triangles.
/// Missing triangles or 4-cycles make the matching bound +inf.
struct AuditRecord {
  Edge edge;
  std::size_t iteration{0};
  double step_fraction{0.0};
  double delta_max{0.0};
  double inv_sqrt_deg{0.0};
  double inv_triangles{0.0};
  double inv_gamma_max{0.0};
  /// False when delta_max <= 0; such records fail both conditions.
  bool valid_delta{true};
  bool cond2{false};
  bool cond2b{false};
};

struct AuditSummary {
  std::size_t edges_rewired{0};
  std::size_t cond2_count{0};
  double cond2_percent{0.0};
  std::size_t cond2b_count{0};
  double cond2b_percent{0.0};
};

/// Evaluates the conditions from precomputed statistics and BFc.
inline AuditRecord audit_from_stats(Edge edge, const EdgeLocalStats& s, double bfc_value) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  AuditRecord r;
  r.edge = edge;
  r.delta_max = bfc_value + 2.0;
  r.inv_sqrt_deg = 1.0 / std::sqrt(static_cast<double>(std::max(s.d_i, s.d_j)));
  r.inv_triangles = s.triangles == 0 ? inf : 1.0 / static_cast<double>(s.triangles);
  r.inv_gamma_max = s.gamma_max == 0 ? inf : 1.0 / static_cast<double>(s.gamma_max);
  r.valid_delta = r.delta_max > 0.0;
  r.cond2 = r.valid_delta && r.delta_max < r.inv_sqrt_deg && r.delta_max < r.inv_gamma_max;
  r.cond2b = r.valid_delta && r.delta_max <= r.inv_triangles && r.delta_max < r.inv_gamma_max;
  return r;
}

/// Audits edge (i,j) of g. delta_max always uses BFc.
inline AuditRecord audit_edge(const Graph& g, NodeId i, NodeId j) {
  const auto s = edge_local_stats(g, i, j);
  return audit_from_stats(Edge(i, j), s, bfc_from_stats(s));
}

inline AuditSummary summarize(std::span<const AuditRecord> records) {
  AuditSummary s;
  s.edges_rewired = records.size();
  for (const auto& r : records) {
    s.cond2_count += r.cond2 ? 1 : 0;
    s.cond2b_count += r.cond2b ? 1 : 0;
  }
  if (s.edges_rewired > 0) {
    const double n = static_cast<double>(s.edges_rewired);
    s.cond2_percent = 100.0 * static_cast<double>(s.cond2_count) / n;
    s.cond2b_percent = 100.0 * static_cast<double>(s.cond2b_count) / n;
  }
  return s;
}

struct AuditRun {
  AuditSummary summary;
  std::vector<AuditRecord> records;
  RewiringResult rewiring;
};

/// Runs SDRF and audits each iteration's target edge on the graph as it was
/// when that edge was selected. The rewiring output is the same as a plain
/// sdrf() call with the same parameters.
inline AuditRun audit_rewiring(const Graph& g, const SdrfParams& p) {
  AuditRun run;
  run.rewiring = sdrf(g, p, [&](const Graph& snapshot, const RewiringStep& sel) {
    auto r = audit_edge(snapshot, sel.target.u, sel.target.v);
    r.iteration = sel.iteration;
    r.step_fraction =
        static_cast<double>(sel.iteration) / static_cast<double>(p.max_iterations);
    run.records.push_back(r);
  });
  run.summary = summarize(run.records);
  return run;
}

namespace detail {

inline std::string format_bound(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

inline double parse_bound(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw InvalidArgument("bad number '" + s + "'");
  return v;
}

}  // namespace detail

inline constexpr const char* kScatterHeader =
    "delta_max,inv_triangles,inv_gamma_max,step_fraction,cond2b";

/// Scatter data for plotting delta_max against 1/triangles; +inf is written
/// as the literal "inf" and cond2b as 0/1.
inline void write_condition_scatter(std::ostream& os, std::span<const AuditRecord> records) {
  os << kScatterHeader << '\n';
  for (const auto& r : records) {
    os << detail::format_bound(r.delta_max) << ',' << detail::format_bound(r.inv_triangles)
       << ',' << detail::format_bound(r.inv_gamma_max) << ','
       << detail::format_bound(r.step_fraction) << ',' << (r.cond2b ? 1 : 0) << '\n';
  }
}

/// Reads back the columns written by write_condition_scatter. Fields not in
/// the file (edge, cond2, ...) are left default.
inline std::vector<AuditRecord> read_condition_scatter(std::istream& in) {
  std::vector<AuditRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != kScatterHeader) throw ParseError(lineno, "unexpected scatter header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1) {
      f.push_back(line.substr(start, pos - start));
    }
    f.push_back(line.substr(start));
    if (f.size() != 5) throw ParseError(lineno, "expected 5 columns");
    AuditRecord r;
    try {
      r.delta_max = detail::parse_bound(f[0]);
      r.inv_triangles = detail::parse_bound(f[1]);
      r.inv_gamma_max = detail::parse_bound(f[2]);
      r.step_fraction = detail::parse_bound(f[3]);
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
    if (f[4] != "0" && f[4] != "1") throw ParseError(lineno, "cond2b must be 0 or 1");
    r.cond2b = f[4] == "1";
    out.push_back(r);
  }
  return out;
}

}  // namespace curvkit
