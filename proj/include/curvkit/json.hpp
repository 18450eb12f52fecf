#pragma once

#include <ostream>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "curvkit/audit.hpp"
#include "curvkit/curvature.hpp"
#include "curvkit/mpnn.hpp"
#include "curvkit/rewiring.hpp"

namespace curvkit {

inline nlohmann::json edge_json(Edge e) { return nlohmann::json::array({e.u, e.v}); }

/// One trace record, as written to the JSON Lines trace file.
inline nlohmann::json to_json(const RewiringStep& s) {
  nlohmann::json j;
  j["iter"] = s.iteration;
  j["target"] = edge_json(s.target);
  j["target_curv"] = s.target_curvature;
  j["added"] = s.added ? edge_json(*s.added) : nlohmann::json(nullptr);
  j["improvement"] = s.improvement ? nlohmann::json(*s.improvement) : nlohmann::json(nullptr);
  j["removed"] = s.removed ? edge_json(*s.removed) : nlohmann::json(nullptr);
  j["removed_curv"] =
      s.removed_curvature ? nlohmann::json(*s.removed_curvature) : nlohmann::json(nullptr);
  return j;
}

inline void write_trace_jsonl(std::ostream& os, std::span<const RewiringStep> trace) {
  for (const auto& s : trace) os << to_json(s).dump() << '\n';
}

inline RewiringStep step_from_json(const nlohmann::json& j) {
  auto edge = [](const nlohmann::json& e) { return Edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>()); };
  RewiringStep s;
  s.iteration = j.at("iter").get<std::size_t>();
  s.target = edge(j.at("target"));
  s.target_curvature = j.at("target_curv").get<double>();
  if (!j.at("added").is_null()) s.added = edge(j["added"]);
  if (!j.at("improvement").is_null()) s.improvement = j["improvement"].get<double>();
  if (!j.at("removed").is_null()) s.removed = edge(j["removed"]);
  if (!j.at("removed_curv").is_null()) s.removed_curvature = j["removed_curv"].get<double>();
  return s;
}

inline nlohmann::json summary_json(const std::string& dataset, CurvatureKind kind,
                                   const AuditSummary& s) {
  return {
      {"dataset", dataset},
      {"kind", std::string(to_string(kind))},
      {"edges_rewired", s.edges_rewired},
      {"cond2", {{"count", s.cond2_count}, {"percent", s.cond2_percent}}},
      {"cond2b", {{"count", s.cond2b_count}, {"percent", s.cond2b_percent}}},
  };
}

inline nlohmann::json to_json(const BoundReport& r) {
  return {
      {"source", r.source}, {"sink", r.sink},   {"delta", r.delta},
      {"lhs", r.lhs},       {"rhs", r.rhs},     {"q_size", r.q_size},
      {"one_over_delta", r.one_over_delta},     {"pass", r.pass},
  };
}

}  // namespace curvkit
