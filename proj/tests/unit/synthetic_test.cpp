#include <gtest/gtest.h>

#include "caqs/error.hpp"
#include "caqs/harness/session.hpp"
#include "caqs/harness/synthetic.hpp"

namespace caqs::harness {
namespace {

SyntheticConfig small() {
  SyntheticConfig cfg;
  cfg.instances = 400;
  cfg.feature_dim = 6;
  cfg.seed = 5;
  return cfg;
}

TEST(Synthetic, DeterministicPerSeed) {
  const Dataset a = generate_synthetic(small());
  const Dataset b = generate_synthetic(small());
  SyntheticConfig other = small();
  other.seed = 6;
  const Dataset c = generate_synthetic(other);
  ASSERT_EQ(a.instances.size(), b.instances.size());
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    EXPECT_EQ(a.instances[i].features, b.instances[i].features);
    EXPECT_EQ(a.instances[i].true_label, b.instances[i].true_label);
  }
  EXPECT_NE(a.instances[0].features, c.instances[0].features);
}

TEST(Synthetic, ShapeAndSplits) {
  const Dataset d = generate_synthetic(small());
  EXPECT_NO_THROW(validate(d));
  EXPECT_EQ(d.instances.size(), 400u);
  EXPECT_EQ(d.test.size(), 100u);
  EXPECT_EQ(d.train.size(), 300u);
  EXPECT_EQ(d.test.front(), 300u);
  EXPECT_EQ(d.feature_dim(), 7u);
  EXPECT_EQ(d.attributes[0].dim, 4u);
  for (std::size_t i = 1; i < d.instances.size(); ++i)
    EXPECT_GT(d.instances[i].time, d.instances[i - 1].time);
  for (const auto& inst : d.instances) EXPECT_EQ(inst.features(6), 1.0);
}

TEST(Synthetic, RejectsBadConfig) {
  SyntheticConfig cfg = small();
  cfg.super_categories = 9;
  EXPECT_THROW(generate_synthetic(cfg), InvalidInput);
  cfg = small();
  cfg.context_strength = 1.5;
  EXPECT_THROW(generate_synthetic(cfg), InvalidInput);
  cfg = small();
  cfg.run_min = 5;
  cfg.run_max = 2;
  EXPECT_THROW(generate_synthetic(cfg), InvalidInput);
}

TEST(Synthetic, NoiselessFeaturesAreSeparable) {
  SyntheticConfig cfg = small();
  cfg.noise = 0.0;
  const Dataset d = generate_synthetic(cfg);
  std::vector<LabeledExample> train;
  for (std::size_t i : d.train) train.push_back({d.instances[i].features, *d.instances[i].true_label});
  MlrModel model = MlrModel::zeros(d.class_count(), d.feature_dim());
  model.lambda = 0.0;
  gradient_descent(model, train, 5000, 2.0);
  const EvalOptions eval{false, 50, {}};
  EXPECT_EQ(evaluate(d, d.test, model, make_context_model(d.class_count(), {}, {}), eval), 1.0);
}

}  // namespace
}  // namespace caqs::harness
