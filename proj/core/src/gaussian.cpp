#include "caqs/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace caqs {

double GaussianParam::density(double x) const {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

RunningGaussian RunningGaussian::from_state(std::size_t count, double mean, double m2) {
  RunningGaussian g;
  g.count_ = count;
  g.mean_ = mean;
  g.m2_ = m2;
  return g;
}

void RunningGaussian::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

double RunningGaussian::variance() const {
  return count_ == 0 ? 0.0 : m2_ / static_cast<double>(count_);
}

GaussianParam RunningGaussian::param(double min_variance) const {
  if (count_ < 2) return {mean_, 1.0};
  return {mean_, std::max(variance(), min_variance)};
}

}  // namespace caqs
