#include "caqs/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "caqs/error.hpp"

namespace caqs {

Eigen::Vector2d link_distance(const ActivityInstance& a, const ActivityInstance& b) {
  return {std::abs(a.time - b.time), (a.position - b.position).norm()};
}

double LinkPredictor::score(const Eigen::Vector2d& distance) const {
  return weights[0] + weights[1] * distance[0] + weights[2] * distance[1];
}

bool predict_link(const LinkPredictor& predictor, const ActivityInstance& a,
                  const ActivityInstance& b) {
  return predictor.related(link_distance(a, b));
}

double mean_hinge_loss(const LinkPredictor& predictor, std::span<const LinkSample> samples) {
  if (samples.empty()) return 0.0;
  double total = 0.0;
  for (const LinkSample& s : samples) {
    const double y = s.related ? 1.0 : -1.0;
    total += std::max(0.0, 1.0 - y * predictor.score(s.distance));
  }
  return total / static_cast<double>(samples.size());
}

LinkPredictor fit_links(std::span<const LinkSample> samples, const LinkFitOptions& options) {
  const std::size_t n = samples.size();
  const auto positives = static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [](const LinkSample& s) { return s.related; }));
  if (positives == 0 || positives == n) {
    throw InvalidInput("link training needs both related and unrelated pairs");
  }
  if (!(options.l2 > 0.0)) throw InvalidInput("link L2 penalty must be positive");

  // Standardize the two distance features; the fitted weights are mapped back
  // to raw units at the end, so predictions do not depend on the units used.
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const LinkSample& s : samples) {
    if (!s.distance.allFinite()) throw InvalidInput("non-finite link distance");
    mean += s.distance;
  }
  mean /= static_cast<double>(n);
  Eigen::Vector2d scale = Eigen::Vector2d::Zero();
  for (const LinkSample& s : samples) scale += (s.distance - mean).cwiseAbs2();
  scale = (scale / static_cast<double>(n)).cwiseSqrt();
  for (int k = 0; k < 2; ++k) {
    if (!(scale[k] > 1e-12 * std::max(1.0, std::abs(mean[k])))) scale[k] = 1.0;
  }

  std::vector<Eigen::Vector3d> z(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d d = (samples[i].distance - mean).cwiseQuotient(scale);
    z[i] = Eigen::Vector3d(1.0, d[0], d[1]);
    y[i] = samples[i].related ? 1.0 : -1.0;
  }

  // Dual coordinate descent for min (l2/2)|w|^2 + (1/n) sum hinge, i.e. the
  // SVM dual with box [0, C], C = 1 / (l2 n).
  const double c = 1.0 / (options.l2 * static_cast<double>(n));
  std::vector<double> alpha(n, 0.0);
  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(0x5eed);
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double max_step = 0.0;
    for (std::size_t i : order) {
      const double qii = z[i].squaredNorm();
      const double g = y[i] * w.dot(z[i]) - 1.0;
      const double next = std::clamp(alpha[i] - g / qii, 0.0, c);
      const double step = next - alpha[i];
      if (step != 0.0) {
        w += step * y[i] * z[i];
        alpha[i] = next;
        max_step = std::max(max_step, std::abs(step) / c);
      }
    }
    if (max_step < 1e-12) break;
  }

  LinkPredictor out;
  out.weights[1] = w[1] / scale[0];
  out.weights[2] = w[2] / scale[1];
  out.weights[0] = w[0] - out.weights[1] * mean[0] - out.weights[2] * mean[1];
  out.trained_on = n;
  if (!out.weights.allFinite()) throw InvalidInput("link training diverged");
  return out;
}

}  // namespace caqs
