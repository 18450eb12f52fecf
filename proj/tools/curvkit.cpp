// curvkit: command-line front end for curvature, rewiring, audits and
// evaluation statistics. See README.md for the subcommand reference.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curvkit/curvkit.hpp"
#include "curvkit/json.hpp"

namespace fs = std::filesystem;
using namespace curvkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct Common {
  std::string edges;
  bool directed = false;
  std::string out;
};

struct SdrfFlags {
  std::string kind = "bfc";
  std::size_t max_iter = 10;
  double tau = 1.0;
  std::optional<double> cplus;
  std::optional<std::uint64_t> seed;
  bool full_recompute = false;
};

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name, std::ios::binary);
  if (!os) throw Error("cannot write " + (dir / name).string());
  return os;
}

void add_sdrf_flags(CLI::App* cmd, SdrfFlags& f) {
  cmd->add_option("--kind,--curvature", f.kind,
                  "Curvature: none, bfc, bfc3, bfcmod, jlc, afc3, afc4")
      ->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "Number of rewiring iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tau", f.tau, "Softmax temperature (typical range 1 to 500)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--cplus", f.cplus,
                  "Remove the most curved edge when above this value (typical 0.2 to 21.2)");
  cmd->add_option("--seed", f.seed, "Random seed (required)");
  cmd->add_flag("--full-recompute", f.full_recompute,
                "Recompute all curvatures after every mutation");
}

SdrfParams to_params(const SdrfFlags& f) {
  if (!f.seed) throw InvalidArgument("--seed is required for stochastic subcommands");
  SdrfParams p;
  p.kind = parse_curvature_kind(f.kind);
  p.max_iterations = f.max_iter;
  p.tau = f.tau;
  p.c_plus = f.cplus;
  p.seed = *f.seed;
  p.full_recompute = f.full_recompute;
  p.validate();
  return p;
}

void write_common_outputs(const fs::path& out, const LoadedGraph& lg) {
  auto os = open_output(out, "id_map.csv");
  write_id_map(os, lg.ids);
}

/// Maps an original node id to its compact id.
NodeId compact_id(const LoadedGraph& lg, std::uint64_t original) {
  auto it = std::lower_bound(lg.ids.begin(), lg.ids.end(), original);
  if (it == lg.ids.end() || *it != original) {
    throw InvalidArgument("node " + std::to_string(original) + " is not in the graph");
  }
  return static_cast<NodeId>(it - lg.ids.begin());
}

int run_curvature(const Common& c, const std::string& kind_name) {
  const auto kind = parse_curvature_kind(kind_name);
  if (kind == CurvatureKind::None) throw InvalidArgument("--kind none has no curvature values");
  const auto lg = load_edge_list(c.edges, c.directed);
  const auto dist = curvature_distribution(lg.graph, kind);
  const fs::path out(c.out);
  {
    auto os = open_output(out, "curvature.csv");
    write_curvature_csv(os, dist);
  }
  write_common_outputs(out, lg);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& r : dist) {
    lo = std::min(lo, r.value);
    hi = std::max(hi, r.value);
  }
  std::cout << "curvature: " << dist.size() << " edges, kind=" << kind;
  if (!dist.empty()) std::cout << ", min=" << lo << ", max=" << hi;
  std::cout << " -> " << (out / "curvature.csv").string() << '\n';
  return kExitOk;
}

int run_rewire(const Common& c, const SdrfFlags& f) {
  const auto params = to_params(f);
  const auto lg = load_edge_list(c.edges, c.directed);
  const auto result = sdrf(lg.graph, params);
  const fs::path out(c.out);
  {
    auto os = open_output(out, "rewired.edges");
    write_edge_list(os, result.graph);
  }
  {
    auto os = open_output(out, "trace.jsonl");
    write_trace_jsonl(os, result.trace);
  }
  write_common_outputs(out, lg);
  std::size_t added = 0;
  std::size_t removed = 0;
  for (const auto& s : result.trace) {
    added += s.added ? 1 : 0;
    removed += s.removed ? 1 : 0;
  }
  std::cout << "rewire: " << result.trace.size() << " iterations, " << added << " added, "
            << removed << " removed, " << lg.graph.edge_count() << " -> "
            << result.graph.edge_count() << " edges\n";
  return kExitOk;
}

int run_audit(const Common& c, const SdrfFlags& f, std::string dataset) {
  const auto params = to_params(f);
  const auto lg = load_edge_list(c.edges, c.directed);
  if (dataset.empty()) dataset = fs::path(c.edges).stem().string();
  const auto run = audit_rewiring(lg.graph, params);
  const fs::path out(c.out);
  {
    auto os = open_output(out, "summary.json");
    os << summary_json(dataset, params.kind, run.summary).dump(2) << '\n';
  }
  {
    auto os = open_output(out, "scatter.csv");
    write_condition_scatter(os, run.records);
  }
  {
    auto os = open_output(out, "trace.jsonl");
    write_trace_jsonl(os, run.rewiring.trace);
  }
  write_common_outputs(out, lg);
  const auto& s = run.summary;
  std::cout << "audit: " << dataset << " edges_rewired=" << s.edges_rewired
            << " cond2=" << s.cond2_count << " (" << s.cond2_percent << "%)"
            << " cond2b=" << s.cond2b_count << " (" << s.cond2b_percent << "%)\n";
  return kExitOk;
}

struct BoundFlags {
  std::optional<std::size_t> double_star;
  std::vector<std::uint64_t> edge;
  double alpha = 1.0;
  double beta = 1.0;
  std::string sigma = "identity";
  std::size_t l0 = 0;
  std::size_t depth = 2;
};

int run_verify_bound(const Common& c, const BoundFlags& b) {
  MpnnConfig cfg;
  cfg.alpha = b.alpha;
  cfg.beta = b.beta;
  cfg.sigma = parse_activation(b.sigma);
  cfg.l0 = b.l0;
  cfg.depth = b.depth;
  cfg.validate();

  LoadedGraph lg;
  if (b.double_star) {
    lg.graph = double_star(*b.double_star);
    lg.ids.resize(lg.graph.node_count());
    for (std::size_t i = 0; i < lg.ids.size(); ++i) lg.ids[i] = i;
  } else if (!c.edges.empty()) {
    lg = load_edge_list(c.edges, c.directed);
  } else {
    throw InvalidArgument("verify-bound needs --edges or --double-star");
  }

  Edge edge;
  if (b.edge.size() == 2) {
    edge = Edge(compact_id(lg, b.edge[0]), compact_id(lg, b.edge[1]));
  } else if (lg.graph.edge_count() > 0) {
    // Default to the most negatively curved edge.
    auto dist = curvature_distribution(lg.graph, CurvatureKind::BFc);
    edge = std::min_element(dist.begin(), dist.end(), [](const auto& x, const auto& y) {
             return x.value < y.value;
           })->edge;
  } else {
    throw InvalidArgument("graph has no edges");
  }

  const auto report = verify_jacobian_bound(lg.graph, edge.u, edge.v, cfg);
  auto j = to_json(report);
  j["source"] = lg.ids[report.source];
  j["sink"] = lg.ids[report.sink];
  const std::string text = j.dump();
  if (!c.out.empty()) {
    auto os = open_output(c.out, "report.json");
    os << j.dump(2) << '\n';
  }
  std::cout << text << '\n';
  return kExitOk;
}

int run_lcc(const Common& c) {
  const auto lg = load_edge_list(c.edges, c.directed);
  const auto sub = largest_connected_component(lg.graph);
  LoadedGraph out_graph{sub.graph, {}};
  for (NodeId p : sub.parent_ids) out_graph.ids.push_back(lg.ids[p]);
  const fs::path out(c.out);
  {
    auto os = open_output(out, "lcc.edges");
    write_edge_list(os, sub.graph);
  }
  write_common_outputs(out, out_graph);
  std::cout << "lcc: " << lg.graph.node_count() << " -> " << sub.graph.node_count()
            << " nodes, " << sub.graph.edge_count() << " edges\n";
  return kExitOk;
}

void emit_json(const nlohmann::json& j, const std::string& out, const std::string& name) {
  if (!out.empty()) {
    auto os = open_output(out, name);
    os << j.dump(2) << '\n';
  }
  std::cout << j.dump() << '\n';
}

std::vector<double> parse_checkpoints(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InvalidArgument("bad checkpoint '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvkit: discrete curvature, SDRF rewiring and bottleneck audits"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* cmd, bool edges_required) {
    auto* opt = cmd->add_option("--edges", common.edges, "Edge list file");
    if (edges_required) opt->required()->check(CLI::ExistingFile);
    cmd->add_flag("--directed", common.directed, "Input arcs are directed (symmetrized)");
    cmd->add_option("--out", common.out, "Output directory");
  };

  std::string kind_name = "bfc";
  auto* curv = app.add_subcommand("curvature", "Per-edge curvature distribution");
  add_common(curv, true);
  curv->add_option("--kind", kind_name, "bfc, bfc3, bfcmod, jlc, afc3, afc4")->required();
  curv->get_option("--out")->required();

  SdrfFlags sdrf_flags;
  auto* rewire = app.add_subcommand("rewire", "Run SDRF and write the rewired graph and trace");
  add_common(rewire, true);
  add_sdrf_flags(rewire, sdrf_flags);
  rewire->get_option("--out")->required();

  std::string dataset;
  auto* audit = app.add_subcommand("audit", "Run SDRF and audit every selected edge");
  add_common(audit, true);
  add_sdrf_flags(audit, sdrf_flags);
  audit->add_option("--dataset", dataset, "Dataset name for the summary (default: file stem)");
  audit->get_option("--out")->required();

  BoundFlags bound;
  auto* verify = app.add_subcommand("verify-bound", "Numerically check the Jacobian bound");
  add_common(verify, false);
  verify->add_option("--double-star", bound.double_star, "Use the built-in double star with hub degree d");
  verify->add_option("--edge", bound.edge, "Edge as two original node ids")->expected(2);
  verify->add_option("--alpha", bound.alpha)->capture_default_str();
  verify->add_option("--beta", bound.beta)->capture_default_str();
  verify->add_option("--sigma", bound.sigma, "identity or tanh")->capture_default_str();
  verify->add_option("--l0", bound.l0)->capture_default_str();
  verify->add_option("--depth", bound.depth)->capture_default_str();

  auto* lcc = app.add_subcommand("lcc", "Extract the largest connected component");
  add_common(lcc, true);
  lcc->get_option("--out")->required();

  auto* stats = app.add_subcommand("stats", "Evaluation statistics");
  stats->require_subcommand(1);
  std::string labels;
  std::string samples;
  std::string samples_b;
  double fraction = 0.1;
  std::string checkpoints = "0.33,0.66,1.0";
  bool sample_std = false;
  bool take_lcc = false;

  auto* homo = stats->add_subcommand("homophily", "Homophily index of a labeled graph");
  add_common(homo, true);
  homo->add_option("--labels", labels, "Labels file ('node label' per line)")
      ->required()
      ->check(CLI::ExistingFile);

  auto* gap = stats->add_subcommand("spectral-gap", "First nonzero normalized Laplacian eigenvalue");
  add_common(gap, true);
  gap->add_flag("--lcc", take_lcc, "Restrict to the largest connected component first");

  auto* top = stats->add_subcommand("top", "Mean and std of the top fraction of samples");
  top->add_option("--samples", samples, "CSV 'config_id,accuracy'")->required()->check(CLI::ExistingFile);
  top->add_option("--fraction", fraction)->capture_default_str();
  top->add_flag("--sample-std", sample_std, "Use the n-1 standard deviation");
  top->add_option("--out", common.out, "Output directory");

  auto* sat = stats->add_subcommand("saturation", "Prefix mean/std/Wasserstein table");
  sat->add_option("--samples", samples, "CSV 'config_id,accuracy'")->required()->check(CLI::ExistingFile);
  sat->add_option("--checkpoints", checkpoints, "Comma-separated increasing fractions")
      ->capture_default_str();
  sat->add_flag("--sample-std", sample_std, "Use the n-1 standard deviation");
  sat->add_option("--out", common.out, "Output directory");

  auto* wass = stats->add_subcommand("wasserstein", "1-Wasserstein distance of two sample sets");
  wass->add_option("--a", samples, "First CSV")->required()->check(CLI::ExistingFile);
  wass->add_option("--b", samples_b, "Second CSV")->required()->check(CLI::ExistingFile);
  wass->add_option("--out", common.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitInput;
  }

  try {
    if (*curv) return run_curvature(common, kind_name);
    if (*rewire) return run_rewire(common, sdrf_flags);
    if (*audit) return run_audit(common, sdrf_flags, dataset);
    if (*verify) return run_verify_bound(common, bound);
    if (*lcc) return run_lcc(common);
    const StdKind std_kind = sample_std ? StdKind::Sample : StdKind::Population;
    const char* std_name = sample_std ? "sample" : "population";
    if (*homo) {
      const auto lg = load_edge_list(common.edges, common.directed);
      const auto h = homophily(load_labels(labels, lg));
      emit_json({{"homophily", h}, {"nodes", lg.graph.node_count()}}, common.out, "homophily.json");
      return kExitOk;
    }
    if (*gap) {
      auto g = load_edge_list(common.edges, common.directed).graph;
      if (take_lcc) g = largest_connected_component(g).graph;
      emit_json({{"spectral_gap", spectral_gap(g)}, {"nodes", g.node_count()}}, common.out,
                "spectral_gap.json");
      return kExitOk;
    }
    if (*top) {
      const auto values = load_samples_csv(samples);
      const auto ms = top_fraction_summary(values, fraction, std_kind);
      emit_json({{"fraction", fraction},
                 {"selected", fraction_count(fraction, values.size())},
                 {"mean", ms.mean},
                 {"std", ms.std},
                 {"std_kind", std_name}},
                common.out, "top_summary.json");
      return kExitOk;
    }
    if (*sat) {
      const auto values = load_samples_csv(samples);
      const auto rows = saturation_analysis(values, parse_checkpoints(checkpoints), std_kind);
      if (!common.out.empty()) {
        auto os = open_output(common.out, "saturation.csv");
        write_saturation_csv(os, rows, std_kind);
      }
      write_saturation_csv(std::cout, rows, std_kind);
      return kExitOk;
    }
    if (*wass) {
      const auto a = load_samples_csv(samples);
      const auto b = load_samples_csv(samples_b);
      emit_json({{"wasserstein", wasserstein_1d(a, b)}}, common.out, "wasserstein.json");
      return kExitOk;
    }
  } catch (const curvkit::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
