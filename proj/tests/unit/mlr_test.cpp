#include <cmath>

#include <gtest/gtest.h>

#include "caqs/error.hpp"
#include "caqs/mlr.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace caqs {
namespace {

Eigen::MatrixXd random_theta(testing::Rng& rng, std::size_t q, std::size_t d, double scale) {
  Eigen::MatrixXd t(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = testing::uniform(rng, -scale, scale);
  return t;
}

std::vector<LabeledExample> random_batch(testing::Rng& rng, std::size_t m, std::size_t q, std::size_t d) {
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < m; ++i) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(d));
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = testing::uniform(rng, -2.0, 2.0);
    out.push_back({x, testing::uniform_index(rng, 0, q - 1)});
  }
  return out;
}

MlrModel model_with(Eigen::MatrixXd theta, double lambda) {
  MlrModel m = MlrModel::zeros(static_cast<std::size_t>(theta.rows()), static_cast<std::size_t>(theta.cols()));
  m.theta = std::move(theta);
  m.lambda = lambda;
  return m;
}

TEST(Classify, ZeroWeightsGiveUniform) {
  const MlrModel m = MlrModel::zeros(4, 3);
  const Eigen::VectorXd p = classify(m, Eigen::Vector3d(1.0, -2.0, 0.5));
  for (Eigen::Index j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(p[j], 0.25);
}

TEST(Classify, ShiftInvariant) {
  testing::Rng rng(1);
  MlrModel m = model_with(random_theta(rng, 5, 4, 2.0), 0.0);
  const Eigen::VectorXd x = Eigen::Vector4d(0.3, -1.0, 2.0, 1.0);
  const Eigen::VectorXd before = classify(m, x);
  const Eigen::RowVectorXd shift = random_theta(rng, 1, 4, 3.0);
  m.theta.rowwise() += shift;
  EXPECT_LT((classify(m, x) - before).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Classify, MatchesIndependentSoftmax) {
  testing::Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const MlrModel m = model_with(random_theta(rng, 6, 5, 4.0), 0.0);
    const auto batch = random_batch(rng, 1, 6, 5);
    const Eigen::VectorXd expected = testing::softmax_oracle(m.theta, batch[0].features);
    EXPECT_LT((classify(m, batch[0].features) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Gradient, MatchesCentralDifferences) {
  testing::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t q = testing::uniform_index(rng, 2, 5);
    const std::size_t d = testing::uniform_index(rng, 1, 6);
    MlrModel m = model_with(random_theta(rng, q, d, 1.5), testing::uniform(rng, 0.0, 0.1));
    const auto batch = random_batch(rng, testing::uniform_index(rng, 1, 20), q, d);
    const Eigen::MatrixXd g = gradient(m, batch);
    Eigen::MatrixXd numeric(g.rows(), g.cols());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      MlrModel plus = m;
      MlrModel minus = m;
      plus.theta(i) += h;
      minus.theta(i) -= h;
      numeric(i) = (objective(plus, batch) - objective(minus, batch)) / (2.0 * h);
    }
    EXPECT_LT((g - numeric).norm() / std::max(1e-12, numeric.norm()), 1e-5);
  }
}

TEST(Gradient, SingleExampleHandValue) {
  MlrModel m = MlrModel::zeros(2, 2);
  m.lambda = 0.0;
  const std::vector<LabeledExample> batch{{Eigen::Vector2d(2.0, -4.0), 0}};
  const Eigen::MatrixXd g = gradient(m, batch);
  // -(1/m) x (1{a=j} - 1/2): -x/2 for the true class, +x/2 for the other.
  EXPECT_DOUBLE_EQ(g(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(g(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(g(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(g(1, 1), -2.0);
}

TEST(Gradient, VanishesWhenPerfectlyClassified) {
  MlrModel m = MlrModel::zeros(2, 1);
  m.lambda = 0.0;
  m.theta << 40.0, -40.0;
  const std::vector<LabeledExample> batch{{Eigen::VectorXd::Constant(1, 1.0), 0}};
  EXPECT_LT(gradient(m, batch).cwiseAbs().maxCoeff(), 1e-30);
}

TEST(Gradient, RejectsEmptyBatch) {
  const MlrModel m = MlrModel::zeros(2, 2);
  EXPECT_THROW(gradient(m, std::vector<LabeledExample>{}), InvalidInput);
}

TEST(Objective, ConvexAlongRandomSegments) {
  testing::Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t q = testing::uniform_index(rng, 2, 4);
    const std::size_t d = testing::uniform_index(rng, 1, 5);
    const auto batch = random_batch(rng, 10, q, d);
    const double lambda = testing::uniform(rng, 0.0, 0.1);
    const MlrModel a = model_with(random_theta(rng, q, d, 3.0), lambda);
    const MlrModel b = model_with(random_theta(rng, q, d, 3.0), lambda);
    const MlrModel mid = model_with(0.5 * (a.theta + b.theta), lambda);
    EXPECT_LE(objective(mid, batch), 0.5 * (objective(a, batch) + objective(b, batch)) + 1e-9);
  }
}

TEST(Objective, SmallStepDoesNotIncrease) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto batch = random_batch(rng, 30, 3, 4);
    MlrModel m = model_with(random_theta(rng, 3, 4, 1.0), 1e-3);
    const double before = objective(m, batch);
    gradient_descent(m, batch, 1, 1e-4);
    EXPECT_LE(objective(m, batch), before);
  }
}

TEST(IncrementalUpdate, BelowCapacityDefers) {
  testing::Rng rng(6);
  MlrModel m = model_with(random_theta(rng, 3, 2, 1.0), 0.0);
  m.buffer_capacity = 5;
  const auto batch = random_batch(rng, 4, 3, 2);
  const MlrModel after = incremental_update(m, batch);
  EXPECT_EQ(after.theta, m.theta);
  EXPECT_EQ(after.buffer.size(), 4u);
}

TEST(IncrementalUpdate, ZeroStepLeavesWeights) {
  testing::Rng rng(7);
  MlrModel m = model_with(random_theta(rng, 3, 2, 1.0), 0.0);
  m.buffer_capacity = 4;
  m.alpha = 0.0;
  const MlrModel after = incremental_update(m, random_batch(rng, 4, 3, 2));
  EXPECT_EQ(after.theta, m.theta);
  EXPECT_TRUE(after.buffer.empty());
}

TEST(IncrementalUpdate, FlushRunsEpochsAndDecays) {
  testing::Rng rng(8);
  MlrModel m = model_with(random_theta(rng, 3, 2, 1.0), 1e-3);
  m.buffer_capacity = 6;
  m.epochs = 3;
  const auto batch = random_batch(rng, 6, 3, 2);
  MlrModel expected = m;
  gradient_descent(expected, batch, 3, m.alpha);
  const MlrModel after = incremental_update(m, batch);
  EXPECT_LT((after.theta - expected.theta).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(after.flushes, 1u);
  EXPECT_DOUBLE_EQ(after.current_alpha(), m.alpha * m.alpha_decay);
}

TEST(IncrementalUpdate, ReplaysOnSeparableDataNeverLoseTrainingAccuracy) {
  testing::Rng rng(9);
  std::vector<LabeledExample> batch;
  for (int i = 0; i < 32; ++i) {
    const std::size_t label = static_cast<std::size_t>(i % 2);
    const double s = label == 0 ? -1.0 : 1.0;
    batch.push_back({Eigen::Vector3d(s * testing::uniform(rng, 0.5, 2.0), testing::uniform(rng, -1.0, 1.0), 1.0), label});
  }
  MlrModel m = MlrModel::zeros(2, 3);
  m.buffer_capacity = batch.size();
  auto accuracy = [&](const MlrModel& model) {
    std::size_t c = 0;
    for (const auto& ex : batch) {
      const Eigen::VectorXd p = classify(model, ex.features);
      c += (p[1] > p[0] ? 1u : 0u) == ex.label;
    }
    return c;
  };
  std::size_t last = accuracy(m);
  for (int epoch = 0; epoch < 10; ++epoch) {
    m = incremental_update(m, batch);
    const std::size_t now = accuracy(m);
    EXPECT_GE(now, last);
    last = now;
  }
  EXPECT_EQ(last, batch.size());
}

}  // namespace
}  // namespace caqs
