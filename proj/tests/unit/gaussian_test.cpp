#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "caqs/gaussian.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace caqs {
namespace {

TEST(RunningGaussian, MatchesBatchMomentsOnRandomStreams) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 1, 400);
    const double offset = testing::uniform(rng, -1e3, 1e3);
    std::vector<double> xs;
    RunningGaussian g;
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back(offset + testing::uniform(rng, -5.0, 5.0));
      g.add(xs.back());
    }
    const testing::Moments m = testing::batch_moments(xs);
    EXPECT_EQ(g.count(), n);
    EXPECT_NEAR(g.mean(), m.mean, 1e-9);
    EXPECT_NEAR(g.variance(), m.variance, 1e-9);
  }
}

TEST(RunningGaussian, SampleAtMeanKeepsMean) {
  RunningGaussian g;
  for (double x : {1.0, 2.0, 6.0}) g.add(x);
  const double mean = g.mean();
  g.add(mean);
  EXPECT_DOUBLE_EQ(g.mean(), mean);
  EXPECT_EQ(g.count(), 4u);
}

TEST(RunningGaussian, ParamDefaultsUntilTwoSamples) {
  RunningGaussian g;
  EXPECT_EQ(g.param().mean, 0.0);
  EXPECT_EQ(g.param().variance, 1.0);
  g.add(3.0);
  EXPECT_EQ(g.param().mean, 3.0);
  EXPECT_EQ(g.param().variance, 1.0);
  g.add(3.0);
  EXPECT_EQ(g.param().variance, kMinVariance);
  g.add(5.0);
  EXPECT_NEAR(g.param().variance, g.variance(), 0.0);
}

TEST(RunningGaussian, FromStateRestoresExactly) {
  RunningGaussian g;
  for (double x : {0.1, 0.7, 2.5}) g.add(x);
  const RunningGaussian h = RunningGaussian::from_state(g.count(), g.mean(), g.m2());
  EXPECT_EQ(h.count(), g.count());
  EXPECT_EQ(h.mean(), g.mean());
  EXPECT_EQ(h.m2(), g.m2());
}

TEST(GaussianParam, DensityMatchesFormula) {
  const GaussianParam p{1.5, 0.25};
  const double x = 2.0;
  const double expected = std::exp(-0.5 * 0.25 / 0.25) / std::sqrt(2.0 * std::numbers::pi * 0.25);
  EXPECT_NEAR(p.density(x), expected, 1e-15);
}

}  // namespace
}  // namespace caqs
