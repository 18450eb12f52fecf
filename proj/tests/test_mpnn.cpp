#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "curvkit/mpnn.hpp"
#include "test_support.hpp"

using namespace curvkit;
using namespace curvkit::testing;

namespace {

double power_iteration_max_abs_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(m.rows(), 1.0, 2.0);
  double lambda = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXd w = m * v;
    lambda = w.norm() / v.norm();
    v = w / w.norm();
  }
  return lambda;
}

MpnnConfig linear(std::size_t depth = 2, std::size_t l0 = 0) {
  MpnnConfig c;
  c.depth = depth;
  c.l0 = l0;
  return c;
}

}  // namespace

TEST(NormalizedAdjacency, SmallCases) {
  EXPECT_DOUBLE_EQ(normalized_adjacency(Graph(1)).matrix(0, 0), 1.0);
  auto p2 = normalized_adjacency(path_graph(2)).matrix;
  EXPECT_TRUE(p2.isApprox(Eigen::MatrixXd::Constant(2, 2, 0.5), 1e-15));
  auto k3 = normalized_adjacency(complete_graph(3)).matrix;
  EXPECT_TRUE(k3.isApprox(Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0), 1e-15));
  EXPECT_THROW(normalized_adjacency(Graph{}), EmptyGraphError);
}

TEST(NormalizedAdjacency, SymmetricWithBoundedSpectrum) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = erdos_renyi(30, 0.2, rng);
    auto a = normalized_adjacency(g).matrix;
    EXPECT_LE((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    for (NodeId i = 0; i < g.node_count(); ++i) {
      EXPECT_NEAR(a(i, i), 1.0 / static_cast<double>(g.degree(i) + 1), 1e-12);
    }
    EXPECT_LE(power_iteration_max_abs_eigenvalue(a), 1.0 + 1e-9);
  }
}

TEST(MpnnForward, LinearLayersArePowersOfA) {
  std::mt19937_64 rng(1);
  auto g = erdos_renyi(20, 0.2, rng);
  auto a = normalized_adjacency(g);
  std::vector<double> ones(g.node_count(), 1.0);
  auto states = mpnn_forward(a, ones, linear(4));
  ASSERT_EQ(states.size(), 5u);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(20, 20);
  for (std::size_t l = 0; l <= 4; ++l) {
    Eigen::VectorXd row_sums = power.rowwise().sum();
    EXPECT_LE((states[l] - row_sums).cwiseAbs().maxCoeff(), 1e-12);
    power = power * a.matrix;
  }
}

TEST(MpnnForward, ZeroFeaturesStayZero) {
  auto a = normalized_adjacency(cycle_graph(6));
  std::vector<double> zeros(6, 0.0);
  for (const auto& h : mpnn_forward(a, zeros, linear(3))) EXPECT_EQ(h.cwiseAbs().maxCoeff(), 0.0);
}

TEST(MpnnForward, TwoLayersOnEdge) {
  auto a = normalized_adjacency(path_graph(2));
  std::vector<double> x{1.0, 0.0};
  auto states = mpnn_forward(a, x, linear(2));
  EXPECT_NEAR(states[2][0], 0.5, 1e-15);
  EXPECT_NEAR(states[2][1], 0.5, 1e-15);
}

TEST(MpnnConfig, Validation) {
  MpnnConfig c;
  c.depth = 1;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.depth = 3;
  c.l0 = 2;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.l0 = 1;
  EXPECT_NO_THROW(c.validate());
  c.alpha = 0;
  EXPECT_THROW(c.validate(), InvalidArgument);
  EXPECT_EQ(parse_activation("tanh"), Activation::Tanh);
  EXPECT_THROW(parse_activation("relu"), InvalidArgument);
}

TEST(Jacobian, CompleteGraph) {
  auto a = normalized_adjacency(complete_graph(3));
  EXPECT_NEAR(jacobian_entry(a, linear(), 0, 2), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(jacobian_entry(a, linear(), 1, 1), 1.0 / 3.0, 1e-9);
}

TEST(Jacobian, IsolatedSource) {
  auto g = Graph::from_edges(4, {{0, 1}, {1, 2}});
  auto a = normalized_adjacency(g);
  EXPECT_EQ(jacobian_entry(a, linear(), 3, 0), 0.0);
  EXPECT_EQ(jacobian_entry(a, linear(), 3, 2), 0.0);
}

TEST(Jacobian, FiniteDifferencesMatchSquaredAdjacency) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = erdos_renyi(25, 0.15, rng);
    auto a = normalized_adjacency(g);
    const Eigen::MatrixXd a2 = a.matrix * a.matrix;
    for (std::size_t l0 : {0u, 1u}) {
      for (NodeId i = 0; i < g.node_count(); ++i) {
        auto col = jacobian_column(a, linear(3, l0), i);
        EXPECT_LE((col - a2.col(i)).cwiseAbs().maxCoeff(), 1e-6);
      }
    }
  }
}

TEST(Jacobian, TanhMatchesChainRule) {
  // Two tanh layers: J = diag(a (1 - tanh^2(m2))) A diag(a b (1 - tanh^2(m1))) ...
  auto g = cycle_graph(5);
  auto a = normalized_adjacency(g);
  MpnnConfig c;
  c.sigma = Activation::Tanh;
  c.alpha = 0.9;
  c.beta = 0.8;
  const Eigen::VectorXd h0 = Eigen::VectorXd::Ones(5);
  const Eigen::VectorXd m1 = a.matrix * (c.beta * h0.array().tanh().matrix());
  const Eigen::VectorXd h1 = c.alpha * m1.array().tanh().matrix();
  const Eigen::VectorXd m2 = a.matrix * (c.beta * h1.array().tanh().matrix());
  auto sech2 = [](const Eigen::VectorXd& x) {
    return (1.0 - x.array().tanh().square()).matrix().asDiagonal();
  };
  const Eigen::MatrixXd j1 = c.alpha * c.beta * (sech2(m1) * a.matrix * sech2(h0));
  const Eigen::MatrixXd j2 = c.alpha * c.beta * (sech2(m2) * a.matrix * sech2(h1));
  const Eigen::MatrixXd jac = j2 * j1;
  for (NodeId i = 0; i < 5; ++i) {
    EXPECT_LE((jacobian_column(a, c, i) - jac.col(i)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(TreeLikeSet, Examples) {
  auto q = tree_like_set(double_star(25), 0, 1);
  ASSERT_EQ(q.size(), 24u);
  for (NodeId k : q) EXPECT_EQ(double_star(25).degree(k), 1u);
  EXPECT_TRUE(tree_like_set(complete_graph(3), 0, 1).empty());
  EXPECT_TRUE(tree_like_set(cycle_graph(4), 0, 1).empty());
  EXPECT_THROW(tree_like_set(cycle_graph(4), 0, 2), MissingEdgeError);
}

TEST(TreeLikeSet, AvoidsTriangleAndSquareNodes) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = erdos_renyi(20, 0.25, rng);
    auto dense = dense_adjacency(g);
    for (const Edge& e : g.edges()) {
      for (auto [i, j] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
        auto q = tree_like_set(g, i, j);
        const auto s = edge_local_stats(g, i, j);
        const auto two_hop = g.two_hop(i);
        std::size_t excluded_neighbors = 0;
        for (NodeId k : q) {
          EXPECT_TRUE(std::binary_search(two_hop.begin(), two_hop.end(), k));
          EXPECT_TRUE(dense[j][k]);
          EXPECT_FALSE(dense[i][k]);
          // k closes no diagonal-free square i - j - k - w - i.
          for (NodeId w = 0; w < g.node_count(); ++w) {
            if (w == i || w == j) continue;
            EXPECT_FALSE(dense[k][w] && dense[w][i] && !dense[j][w]);
          }
        }
        // Every neighbour of j except i falls into exactly one group.
        excluded_neighbors = s.triangles + s.sq_j;
        EXPECT_EQ(q.size() + excluded_neighbors + 1, s.d_j);
      }
    }
  }
}

TEST(VerifyBound, DoubleStarPasses) {
  auto r = verify_jacobian_bound(double_star(25), 0, 1, linear());
  EXPECT_NEAR(r.delta, 0.16, 1e-12);
  EXPECT_EQ(r.q_size, 24u);
  EXPECT_NEAR(r.one_over_delta, 6.25, 1e-9);
  EXPECT_NEAR(r.rhs, std::pow(0.16, 0.25), 1e-12);
  // Each leaf k of hub 1 reaches hub 0 only through the hub: A_k1 A_10.
  const double expected = (1.0 / std::sqrt(2.0 * 26.0)) * (1.0 / 26.0);
  EXPECT_NEAR(r.lhs, expected, 1e-6);
  EXPECT_TRUE(r.pass);
}

TEST(VerifyBound, TanhAlsoPasses) {
  MpnnConfig c;
  c.sigma = Activation::Tanh;
  c.depth = 4;
  c.l0 = 2;
  auto r = verify_jacobian_bound(double_star(30), 1, 0, c);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.lhs, r.rhs);
}

TEST(VerifyBound, ConditionNotMet) {
  EXPECT_THROW(verify_jacobian_bound(complete_graph(3), 0, 1, linear()), ConditionNotMet);
  EXPECT_THROW(verify_jacobian_bound(double_star(16), 0, 1, linear()), ConditionNotMet);
}

TEST(VerifyBound, ScalingTheModelScalesBothSides) {
  MpnnConfig c = linear();
  auto base = verify_jacobian_bound(double_star(20), 0, 1, c);
  c.alpha = 0.5;
  c.beta = 0.25;
  auto scaled = verify_jacobian_bound(double_star(20), 0, 1, c);
  EXPECT_NEAR(scaled.lhs, base.lhs * std::pow(0.125, 2), 1e-9);
  EXPECT_NEAR(scaled.rhs, base.rhs * std::pow(0.125, 2), 1e-12);
}
