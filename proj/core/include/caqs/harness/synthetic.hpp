#pragma once

#include <cstddef>
#include <cstdint>

#include "caqs/harness/config.hpp"
#include "caqs/harness/dataset.hpp"

namespace caqs::harness {

// Planted-context event stream. Instances arrive in runs: each run picks a
// super-category, a location and a start time, and its members are close in
// space and time. Classes c and c + q/2 share a feature center and differ only
// by a small offset, and they fall in different super-categories. With
// probability context_strength a run member's class is drawn from the run's
// super-category (uniform over all classes otherwise), its object observation
// reports that super-category, and its person value follows a mean set by the
// class parity. context_strength = 0 removes every planted relation.
struct SyntheticConfig {
  std::size_t classes = 8;
  std::size_t instances = 2000;
  std::size_t feature_dim = 16;  // a constant bias feature is appended
  std::size_t super_categories = 4;
  double context_strength = 0.9;
  double noise = 1.0;            // feature noise std relative to class separation
  double detector_noise = 1.0;   // logit noise of the object detector
  double test_fraction = 0.25;   // trailing share of the stream held out
  std::size_t run_min = 3;
  std::size_t run_max = 8;
  std::size_t person_bins = 8;
  std::uint64_t seed = 1;
};

SyntheticConfig synthetic_config(const Config& config);

Dataset generate_synthetic(const SyntheticConfig& config);

}  // namespace caqs::harness
