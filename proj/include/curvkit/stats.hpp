#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "curvkit/error.hpp"
#include "curvkit/graph.hpp"

namespace curvkit {

/// Mean fraction of same-label neighbours, over nodes with at least one
/// neighbour.
inline double homophily(const LabeledGraph& lg) {
  const Graph& g = lg.graph;
  if (lg.labels.size() != g.node_count()) throw InvalidArgument("one label per node required");
  double total = 0.0;
  std::size_t counted = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto nbrs = g.neighbors(v);
    if (nbrs.empty()) continue;
    std::size_t same = 0;
    for (NodeId w : nbrs) same += lg.labels[w] == lg.labels[v] ? 1 : 0;
    total += static_cast<double>(same) / static_cast<double>(nbrs.size());
    ++counted;
  }
  if (counted == 0) throw InvalidArgument("homophily: every node is isolated");
  return total / static_cast<double>(counted);
}

inline constexpr std::size_t kMaxDenseEigenNodes = 5000;
inline constexpr double kZeroEigenvalue = 1e-9;

/// Spectrum of I - D^{-1/2} A D^{-1/2}, ascending.
inline Eigen::VectorXd normalized_laplacian_spectrum(const Graph& g) {
  if (g.node_count() > kMaxDenseEigenNodes) {
    throw InvalidArgument("spectral gap: dense solver limited to " +
                          std::to_string(kMaxDenseEigenNodes) + " nodes");
  }
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (NodeId i = 0; i < g.node_count(); ++i) {
    if (g.degree(i) == 0) continue;
    lap(i, i) = 1.0;
    for (NodeId j : g.neighbors(i)) {
      lap(i, j) = -1.0 / std::sqrt(static_cast<double>(g.degree(i) * g.degree(j)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return solver.eigenvalues();
}

/// Smallest nonzero eigenvalue of the normalized Laplacian. The graph must be
/// connected with at least two nodes.
inline double spectral_gap(const Graph& g) {
  if (g.node_count() < 2) throw InvalidArgument("spectral gap needs at least two nodes");
  const auto ev = normalized_laplacian_spectrum(g);
  std::size_t zeros = 0;
  while (zeros < static_cast<std::size_t>(ev.size()) && ev[zeros] < kZeroEigenvalue) ++zeros;
  if (zeros != 1) {
    throw DisconnectedGraphError("normalized Laplacian has " + std::to_string(zeros) +
                                 " zero eigenvalues; extract the largest connected component "
                                 "first");
  }
  return ev[1];
}

/// 1-Wasserstein distance between two empirical distributions: the area
/// between their CDFs.
inline double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("wasserstein_1d: empty sample set");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::vector<double> xs;
  xs.reserve(sa.size() + sb.size());
  std::merge(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(xs));

  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  double area = 0.0;
  for (std::size_t t = 0; t + 1 < xs.size(); ++t) {
    while (ia < sa.size() && sa[ia] <= xs[t]) ++ia;
    while (ib < sb.size() && sb[ib] <= xs[t]) ++ib;
    const double width = xs[t + 1] - xs[t];
    if (width > 0.0) area += std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb) * width;
  }
  return area;
}

enum class StdKind { Population, Sample };

struct MeanStd {
  double mean{0.0};
  double std{0.0};
};

inline MeanStd mean_std(std::span<const double> v, StdKind kind = StdKind::Population) {
  if (v.empty()) throw InvalidArgument("mean_std: empty sample set");
  // summed in sorted order so the result does not depend on sample order
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  if (s.front() == s.back()) return {s.front(), 0.0};
  double mean = 0.0;
  for (double x : s) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : s) ss += (x - mean) * (x - mean);
  double denom = static_cast<double>(v.size());
  if (kind == StdKind::Sample) denom -= 1.0;
  return {mean, denom > 0.0 ? std::sqrt(ss / denom) : 0.0};
}

/// ceil(fraction * n), ignoring floating noise such as 0.33 * 100 = 33.000...04.
inline std::size_t fraction_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

/// Mean and spread of the ceil(fraction * n) largest samples.
inline MeanStd top_fraction_summary(std::span<const double> samples, double fraction,
                                    StdKind kind = StdKind::Population) {
  if (!(fraction > 0.0) || fraction > 1.0) throw InvalidArgument("fraction must be in (0, 1]");
  const std::size_t keep = fraction_count(fraction, samples.size());
  if (keep == 0) throw InvalidArgument("top_fraction_summary: empty selection");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(keep),
                    sorted.end(), std::greater<>());
  sorted.resize(keep);
  return mean_std(sorted, kind);
}

struct SaturationRow {
  double fraction{0.0};
  std::size_t count{0};
  double mean{0.0};
  double std{0.0};
  /// Distance to the previous checkpoint's prefix; absent on the first row.
  std::optional<double> wasserstein;
};

/// Mean, spread and successive Wasserstein distances of growing prefixes of
/// the samples, in their original order.
inline std::vector<SaturationRow> saturation_analysis(std::span<const double> samples,
                                                      std::span<const double> checkpoints,
                                                      StdKind kind = StdKind::Population) {
  if (samples.empty()) throw InvalidArgument("saturation_analysis: empty sample set");
  std::vector<SaturationRow> rows;
  double prev_fraction = 0.0;
  for (double f : checkpoints) {
    if (!(f > prev_fraction) || f > 1.0) {
      throw InvalidArgument("checkpoints must be increasing within (0, 1]");
    }
    prev_fraction = f;
    SaturationRow row;
    row.fraction = f;
    row.count = fraction_count(f, samples.size());
    if (row.count == 0) throw InvalidArgument("checkpoint yields an empty prefix");
    const auto prefix = samples.first(row.count);
    const auto ms = mean_std(prefix, kind);
    row.mean = ms.mean;
    row.std = ms.std;
    if (!rows.empty()) row.wasserstein = wasserstein_1d(samples.first(rows.back().count), prefix);
    rows.push_back(row);
  }
  return rows;
}

inline void write_saturation_csv(std::ostream& os, std::span<const SaturationRow> rows,
                                 StdKind kind = StdKind::Population) {
  os << "# std: " << (kind == StdKind::Population ? "population" : "sample") << '\n';
  os << "fraction,count,mean,std,wasserstein\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f,%zu,%.6f,%.6f,", r.fraction, r.count, r.mean, r.std);
    os << buf;
    if (r.wasserstein) {
      std::snprintf(buf, sizeof(buf), "%.6f", *r.wasserstein);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace curvkit
