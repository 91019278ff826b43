#include <gtest/gtest.h>

#include "caqs/error.hpp"
#include "caqs/structure.hpp"
#include "generators.hpp"

namespace caqs {
namespace {

std::vector<LinkSample> separable_samples(testing::Rng& rng, std::size_t n) {
  std::vector<LinkSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool related = i % 2 == 0;
    const double dt = related ? testing::uniform(rng, 0.0, 20.0) : testing::uniform(rng, 40.0, 200.0);
    const double ds = related ? testing::uniform(rng, 0.0, 5.0) : testing::uniform(rng, 0.0, 100.0);
    out.push_back({{dt, ds}, related});
  }
  return out;
}

TEST(LinkDistance, AbsoluteTimeAndEuclideanSpace) {
  ActivityInstance a;
  a.time = 5.0;
  a.position = {0.0, 0.0};
  ActivityInstance b;
  b.time = 2.0;
  b.position = {3.0, 4.0};
  EXPECT_EQ(link_distance(a, b), Eigen::Vector2d(3.0, 5.0));
  EXPECT_EQ(link_distance(b, a), Eigen::Vector2d(3.0, 5.0));
}

TEST(LinkPredictor, DefaultLinksEverything) {
  const LinkPredictor p;
  EXPECT_TRUE(p.related({1e6, 1e6}));
}

TEST(FitLinks, SeparatesSeparableData) {
  testing::Rng rng(3);
  const auto samples = separable_samples(rng, 400);
  const LinkPredictor p = fit_links(samples);
  std::size_t correct = 0;
  for (const auto& s : samples) correct += p.related(s.distance) == s.related;
  EXPECT_EQ(correct, samples.size());
  EXPECT_LT(p.weights[1], 0.0);
  EXPECT_EQ(p.trained_on, samples.size());
}

TEST(FitLinks, UnitsDoNotChangePredictions) {
  testing::Rng rng(4);
  auto samples = separable_samples(rng, 200);
  auto scaled = samples;
  for (auto& s : scaled) s.distance *= 1000.0;
  const LinkPredictor a = fit_links(samples);
  const LinkPredictor b = fit_links(scaled);
  for (const auto& s : samples) EXPECT_EQ(a.related(s.distance), b.related(s.distance * 1000.0));
}

TEST(FitLinks, HingeLossBelowTrivialPredictor) {
  testing::Rng rng(6);
  auto samples = separable_samples(rng, 300);
  for (std::size_t i = 0; i < samples.size(); i += 7) samples[i].related = !samples[i].related;
  const LinkPredictor fitted = fit_links(samples);
  EXPECT_LT(mean_hinge_loss(fitted, samples), mean_hinge_loss(LinkPredictor{}, samples));
}

TEST(FitLinks, RejectsSingleClassInput) {
  std::vector<LinkSample> all_related{{{1.0, 1.0}, true}, {{2.0, 1.0}, true}};
  EXPECT_THROW(fit_links(all_related), InvalidInput);
  EXPECT_THROW(fit_links(std::vector<LinkSample>{}), InvalidInput);
}

}  // namespace
}  // namespace caqs
