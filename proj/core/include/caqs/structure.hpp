#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "caqs/instance.hpp"

namespace caqs {

// Pairwise distance features d_ij = [|t_i - t_j|, ||s_i - s_j||].
Eigen::Vector2d link_distance(const ActivityInstance& a, const ActivityInstance& b);

struct LinkSample {
  Eigen::Vector2d distance = Eigen::Vector2d::Zero();
  bool related = false;
};

// Linear link score f_r(d) = w . [1, |dt|, ||ds||]; a link exists iff f_r >= 0.
// A default-constructed predictor scores every pair 0, i.e. fully connected.
struct LinkPredictor {
  Eigen::Vector3d weights = Eigen::Vector3d::Zero();
  std::size_t trained_on = 0;

  double score(const Eigen::Vector2d& distance) const;
  bool related(const Eigen::Vector2d& distance) const { return score(distance) >= 0.0; }
};

struct LinkFitOptions {
  std::size_t epochs = 200;
  double l2 = 1e-3;
};

// L2-regularized hinge-loss linear classifier (max-margin on separable data).
// Requires at least one related and one unrelated sample.
LinkPredictor fit_links(std::span<const LinkSample> samples, const LinkFitOptions& options = {});

bool predict_link(const LinkPredictor& predictor, const ActivityInstance& a,
                  const ActivityInstance& b);

// Mean hinge loss max(0, 1 - y f_r(d)) with y = +1 for related pairs.
double mean_hinge_loss(const LinkPredictor& predictor, std::span<const LinkSample> samples);

}  // namespace caqs
