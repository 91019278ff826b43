#include <cmath>

#include <gtest/gtest.h>

#include "caqs/error.hpp"
#include "caqs/inference.hpp"
#include "caqs/info_metrics.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace caqs {
namespace {

TEST(Entropy, MatchesOracleAndKnownValues) {
  testing::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd p = testing::random_pmf(rng, testing::uniform_index(rng, 1, 9));
    EXPECT_NEAR(node_entropy(p), testing::entropy_oracle(p), 1e-14);
  }
  EXPECT_EQ(node_entropy(Eigen::Vector3d(0.0, 1.0, 0.0)), 0.0);
  EXPECT_NEAR(node_entropy(Eigen::Vector4d::Constant(0.25)), std::log(4.0), 1e-15);
}

TEST(MutualInformation, MatchesOracleAndLimits) {
  testing::Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd j(3, 2);
    for (Eigen::Index i = 0; i < j.size(); ++i) j(i) = testing::uniform(rng, 0.0, 1.0);
    j /= j.sum();
    EXPECT_NEAR(edge_mutual_information(j), testing::mutual_information_oracle(j), 1e-13);
  }
  const Eigen::Vector3d a(0.2, 0.3, 0.5);
  const Eigen::Vector2d b(0.6, 0.4);
  EXPECT_EQ(edge_mutual_information(a * b.transpose()), 0.0);
  EXPECT_NEAR(edge_mutual_information(Eigen::Matrix3d::Identity() / 3.0), std::log(3.0), 1e-15);
}

TEST(JointEntropy, ProductTableAddsEntropies) {
  const Eigen::Vector3d a(0.2, 0.3, 0.5);
  const Eigen::Vector2d b(0.6, 0.4);
  EXPECT_NEAR(joint_entropy(a * b.transpose()), node_entropy(a) + node_entropy(b), 1e-15);
}

TEST(QueryProblem, ValidationRejectsBrokenInvariants) {
  testing::Rng rng(33);
  QueryProblem p = testing::random_query_problem(rng, 5, 2, 0.5);
  EXPECT_NO_THROW(validate(p));
  QueryProblem asym = p;
  asym.mutual_information(0, 1) += 0.1;
  EXPECT_THROW(validate(asym), InvalidInput);
  QueryProblem diag = p;
  diag.mutual_information(2, 2) = 0.1;
  EXPECT_THROW(validate(diag), InvalidInput);
  QueryProblem neg = p;
  neg.entropy[0] = -0.1;
  EXPECT_THROW(validate(neg), InvalidInput);
  QueryProblem k0 = p;
  k0.budget = 0;
  EXPECT_THROW(validate(k0), InvalidInput);
  QueryProblem big = p;
  big.budget = 6;
  EXPECT_THROW(validate(big), InvalidInput);
}

TEST(QueryProblem, BuiltFromMarginalsOfTheActivitySubgraph) {
  testing::Rng rng(34);
  const CrfGraph g = testing::random_loopy_graph(rng, 6, 3, 0.5, 3);
  const MarginalSet m = infer(g);
  const QueryProblem p = build_query_problem(g, m, 2);
  ASSERT_EQ(p.size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(p.ids[i], g.node(i).instance_id);
    EXPECT_EQ(p.entropy[static_cast<Eigen::Index>(i)], node_entropy(m.nodes[i]));
  }
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const EdgeRecord& edge = g.edges()[e];
    if (edge.kind != EdgeKind::activity_activity) continue;
    EXPECT_EQ(p.mutual_information(static_cast<Eigen::Index>(edge.first), static_cast<Eigen::Index>(edge.second)),
              edge_mutual_information(m.edges[e]));
  }
  const Eigen::MatrixXd adj = g.activity_adjacency();
  for (Eigen::Index i = 0; i < adj.rows(); ++i)
    for (Eigen::Index j = 0; j < adj.cols(); ++j)
      if (adj(i, j) == 0.0) EXPECT_EQ(p.mutual_information(i, j), 0.0);
  EXPECT_NO_THROW(validate(p));

  MarginalSet wrong = m;
  wrong.nodes.pop_back();
  EXPECT_THROW(build_query_problem(g, wrong, 2), InvalidInput);
}

TEST(ApproxJointEntropy, ExactOnTrees) {
  testing::Rng rng(35);
  for (int trial = 0; trial < 30; ++trial) {
    const CrfGraph g = testing::random_tree(rng, testing::uniform_index(rng, 1, 6), testing::uniform_index(rng, 2, 3), 2);
    const MarginalSet m = infer(g, {1000, 1e-14, 0.5});
    const QueryProblem p = build_query_problem(g, m, 1);
    EXPECT_NEAR(approx_joint_entropy(p), testing::enumerate(g).activity_joint_entropy, 1e-6);
  }
}

TEST(LabeledNode, CarriesNoEntropyOrMutualInformation) {
  testing::Rng rng(36);
  for (int trial = 0; trial < 20; ++trial) {
    const CrfGraph g = testing::random_loopy_graph(rng, 7, 3, 0.5, 2);
    const std::size_t node = testing::uniform_index(rng, 0, 6);
    const CrfGraph c = condition(g, {{g.node(node).instance_id, testing::uniform_index(rng, 0, 2)}});
    const QueryProblem p = build_query_problem(c, infer(c), 1);
    EXPECT_LE(p.entropy[static_cast<Eigen::Index>(node)], 1e-9);
    EXPECT_LE(p.mutual_information.row(static_cast<Eigen::Index>(node)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE(p.mutual_information.col(static_cast<Eigen::Index>(node)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

}  // namespace
}  // namespace caqs
