#include <gtest/gtest.h>

#include "caqs/inference.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace caqs {
namespace {

double max_node_error(const MarginalSet& m, const testing::Enumerated& e) {
  double worst = 0.0;
  for (std::size_t i = 0; i < e.nodes.size(); ++i)
    worst = std::max(worst, (m.nodes[i] - e.nodes[i]).cwiseAbs().maxCoeff());
  return worst;
}

double max_edge_error(const MarginalSet& m, const testing::Enumerated& e) {
  double worst = 0.0;
  for (std::size_t k = 0; k < e.edges.size(); ++k)
    worst = std::max(worst, (m.edges[k] - e.edges[k]).cwiseAbs().maxCoeff());
  return worst;
}

const BpOptions kTight{1000, 1e-14, 0.5};

TEST(Infer, ExactOnRandomTrees) {
  testing::Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t q = testing::uniform_index(rng, 2, 3);
    const std::size_t n = testing::uniform_index(rng, 1, 6);
    const CrfGraph g = testing::random_tree(rng, n, q, testing::uniform_index(rng, 0, 2));
    const MarginalSet m = infer(g, kTight);
    const testing::Enumerated e = testing::enumerate(g);
    EXPECT_TRUE(m.converged);
    EXPECT_LT(max_node_error(m, e), 1e-8);
    EXPECT_LT(max_edge_error(m, e), 1e-8);
  }
}

TEST(Infer, ExactOnTreesWithClampedNodes) {
  testing::Rng rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const CrfGraph base = testing::random_tree(rng, 6, 3, 2);
    LabelMap labels{{base.node(testing::uniform_index(rng, 0, 5)).instance_id, testing::uniform_index(rng, 0, 2)}};
    const CrfGraph g = condition(base, labels);
    const MarginalSet m = infer(g, kTight);
    const testing::Enumerated e = testing::enumerate(g);
    EXPECT_LT(max_node_error(m, e), 1e-8);
    EXPECT_LT(max_edge_error(m, e), 1e-8);
    for (std::size_t i = 0; i < g.activity_count(); ++i)
      if (g.node(i).observed_label) {
        EXPECT_EQ(m.nodes[i][static_cast<Eigen::Index>(*g.node(i).observed_label)], 1.0);
        EXPECT_EQ((m.nodes[i].array() > 0.0).count(), 1);
      }
  }
}

TEST(Infer, UndampedAlsoExactOnTrees) {
  testing::Rng rng(23);
  const CrfGraph g = testing::random_tree(rng, 7, 2, 3);
  const MarginalSet m = infer(g, {1000, 1e-14, 0.0});
  EXPECT_LT(max_node_error(m, testing::enumerate(g)), 1e-8);
}

TEST(Infer, MarginalsAreDistributionsOnLoopyGraphs) {
  testing::Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const CrfGraph g = testing::random_loopy_graph(rng, 8, 3, 0.6, 3);
    const MarginalSet m = infer(g);
    for (const auto& p : m.nodes) {
      EXPECT_NEAR(p.sum(), 1.0, 1e-12);
      EXPECT_GE(p.minCoeff(), 0.0);
    }
    for (const auto& p : m.edges) EXPECT_NEAR(p.sum(), 1.0, 1e-12);
  }
}

TEST(Infer, ReportsNonConvergenceWithoutThrowing) {
  testing::Rng rng(25);
  const CrfGraph g = testing::random_loopy_graph(rng, 8, 3, 0.8, 0);
  const MarginalSet m = infer(g, {1, 1e-300, 0.5});
  EXPECT_FALSE(m.converged);
  EXPECT_EQ(m.iterations, 1u);
  EXPECT_GT(m.max_residual, 0.0);
}

TEST(Infer, IsolatedNodeKeepsItsPrior) {
  GraphNode a;
  a.instance_id = "a";
  a.potential = Eigen::Vector3d(0.2, 0.3, 0.5);
  const MarginalSet m = infer(CrfGraph(3, {a}, {}));
  EXPECT_TRUE(m.converged);
  EXPECT_LT((m.nodes[0] - a.potential).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Argmax, LowestIndexOnTies) {
  EXPECT_EQ(argmax(Eigen::Vector3d(0.4, 0.4, 0.2)), 0u);
  EXPECT_EQ(argmax(Eigen::Vector3d(0.1, 0.45, 0.45)), 1u);
}

}  // namespace
}  // namespace caqs
