#pragma once

#include <cstddef>

namespace caqs {

inline constexpr double kMinVariance = 1e-9;

struct GaussianParam {
  double mean = 0.0;
  double variance = 1.0;

  double density(double x) const;
};

// Welford running mean/variance. variance() is the population variance M2/n.
class RunningGaussian {
 public:
  RunningGaussian() = default;
  static RunningGaussian from_state(std::size_t count, double mean, double m2);

  void add(double x);

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  double variance() const;

  // Unit variance until two samples have been seen (mean 0 before the first);
  // afterwards the population variance floored at min_variance.
  GaussianParam param(double min_variance = kMinVariance) const;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace caqs
