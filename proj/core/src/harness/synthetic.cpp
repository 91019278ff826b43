#include "caqs/harness/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "caqs/error.hpp"

namespace caqs::harness {
namespace {

// Classes c and c + q/2 share a feature center and differ by a small offset,
// and they sit in different super-categories, so the feature confusions are
// exactly the ones context can resolve.
constexpr double kCenterSpread = 1.0;
constexpr double kClassSpread = 0.35;
constexpr double kDetectorSignal = 2.5;
constexpr double kPersonLow = 1.0;
constexpr double kPersonHigh = 2.5;
constexpr double kPersonStd = 0.8;
constexpr double kPositionJitter = 2.0;
constexpr double kObjectJitter = 1.0;

std::size_t super_of(std::size_t c, const SyntheticConfig& cfg) {
  return c * cfg.super_categories / cfg.classes;
}

void check(const SyntheticConfig& cfg) {
  if (cfg.classes < 2) throw InvalidInput("synthetic: need at least two classes");
  if (cfg.super_categories < 1 || cfg.super_categories > cfg.classes)
    throw InvalidInput("synthetic: super_categories must be in [1, classes]");
  if (cfg.instances < 4) throw InvalidInput("synthetic: need at least four instances");
  if (cfg.feature_dim < 1) throw InvalidInput("synthetic: feature_dim must be positive");
  if (!(cfg.context_strength >= 0.0 && cfg.context_strength <= 1.0))
    throw InvalidInput("synthetic: context_strength must be in [0, 1]");
  if (!(cfg.noise >= 0.0) || !(cfg.detector_noise >= 0.0))
    throw InvalidInput("synthetic: noise must be nonnegative");
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
    throw InvalidInput("synthetic: test_fraction must be in (0, 1)");
  if (cfg.run_min < 1 || cfg.run_max < cfg.run_min)
    throw InvalidInput("synthetic: need 1 <= run_min <= run_max");
  if (cfg.person_bins < 1) throw InvalidInput("synthetic: person_bins must be positive");
}

}  // namespace

SyntheticConfig synthetic_config(const Config& config) {
  SyntheticConfig cfg;
  cfg.classes = config.get_size("q", cfg.classes);
  cfg.instances = config.get_size("n", cfg.instances);
  cfg.feature_dim = config.get_size("dim", cfg.feature_dim);
  cfg.super_categories = config.get_size("super_categories", cfg.super_categories);
  cfg.context_strength = config.get_double("context_strength", cfg.context_strength);
  cfg.noise = config.get_double("noise", cfg.noise);
  cfg.detector_noise = config.get_double("detector_noise", cfg.detector_noise);
  cfg.test_fraction = config.get_double("test_fraction", cfg.test_fraction);
  cfg.run_min = config.get_size("run_min", cfg.run_min);
  cfg.run_max = config.get_size("run_max", cfg.run_max);
  cfg.person_bins = config.get_size("bins", cfg.person_bins);
  cfg.seed = config.get_size("seed", cfg.seed);
  return cfg;
}

Dataset generate_synthetic(const SyntheticConfig& cfg) {
  check(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform_index = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };

  const std::size_t q = cfg.classes;
  const std::size_t S = cfg.super_categories;
  const auto d = static_cast<Eigen::Index>(cfg.feature_dim);

  const std::size_t half = (q + 1) / 2;
  std::vector<Eigen::VectorXd> centers(half, Eigen::VectorXd(d));
  for (auto& c : centers)
    for (Eigen::Index i = 0; i < d; ++i) c(i) = kCenterSpread * gauss(rng);
  std::vector<Eigen::VectorXd> means(q, Eigen::VectorXd(d));
  for (std::size_t c = 0; c < q; ++c)
    for (Eigen::Index i = 0; i < d; ++i) means[c](i) = centers[c % half](i) + kClassSpread * gauss(rng);

  std::vector<std::vector<std::size_t>> members(S);
  for (std::size_t c = 0; c < q; ++c) members[super_of(c, cfg)].push_back(c);

  Dataset ds;
  for (std::size_t c = 0; c < q; ++c) ds.class_names.push_back("class" + std::to_string(c));
  ds.attributes.push_back({"object", AttributeKind::object, S});
  ds.attributes.push_back({"person", AttributeKind::person, cfg.person_bins});

  double t = 0.0;
  std::int64_t run = 0;
  while (ds.instances.size() < cfg.instances) {
    const std::size_t s = uniform_index(S);
    const std::size_t length =
        std::uniform_int_distribution<std::size_t>(cfg.run_min, cfg.run_max)(rng);
    const Eigen::Vector2d center(100.0 * unit(rng), 100.0 * unit(rng));
    t += 30.0 + 30.0 * unit(rng);
    for (std::size_t m = 0; m < length && ds.instances.size() < cfg.instances; ++m) {
      ActivityInstance inst;
      char id[16];
      std::snprintf(id, sizeof id, "a%06zu", ds.instances.size());
      inst.id = id;
      inst.group = run;
      t += 1.0 + 3.0 * unit(rng);
      inst.time = t;
      inst.position = center + kPositionJitter * Eigen::Vector2d(gauss(rng), gauss(rng));

      const bool planted = unit(rng) < cfg.context_strength;
      const std::size_t label = planted ? members[s][uniform_index(members[s].size())] : uniform_index(q);
      inst.true_label = label;

      inst.features.resize(d + 1);
      for (Eigen::Index i = 0; i < d; ++i) inst.features(i) = means[label](i) + cfg.noise * gauss(rng);
      inst.features(d) = 1.0;

      ContextObservation object;
      object.attribute = 0;
      const std::size_t truth = unit(rng) < cfg.context_strength ? super_of(label, cfg) : uniform_index(S);
      Eigen::VectorXd logits(static_cast<Eigen::Index>(S));
      for (std::size_t k = 0; k < S; ++k)
        logits(static_cast<Eigen::Index>(k)) =
            (k == truth ? kDetectorSignal : 0.0) + cfg.detector_noise * gauss(rng);
      logits.array() -= logits.maxCoeff();
      Eigen::VectorXd pmf = logits.array().exp();
      object.pmf = pmf / pmf.sum();
      object.position = inst.position + kObjectJitter * Eigen::Vector2d(gauss(rng), gauss(rng));
      inst.context.push_back(std::move(object));

      ContextObservation person;
      person.attribute = 1;
      const bool person_planted = unit(rng) < cfg.context_strength;
      const double mean = person_planted ? (label % 2 == 0 ? kPersonLow : kPersonHigh)
                                         : 0.5 * (kPersonLow + kPersonHigh);
      person.value = std::abs(mean + kPersonStd * gauss(rng));
      person.position = inst.position;
      inst.context.push_back(std::move(person));

      ds.instances.push_back(std::move(inst));
    }
    ++run;
  }

  const auto n = ds.instances.size();
  const auto test = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.test_fraction * static_cast<double>(n))));
  for (std::size_t i = 0; i < n; ++i) (i < n - test ? ds.train : ds.test).push_back(i);
  return ds;
}

}  // namespace caqs::harness
