#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace caqs {

struct LabeledExample {
  Eigen::VectorXd features;
  std::size_t label = 0;
};

// Multinomial logistic regression with an L2 weight-decay penalty, updated by
// buffered mini-batch gradient descent.
struct MlrModel {
  Eigen::MatrixXd theta;  // q x d, one weight row per class
  double lambda = 1e-4;
  double alpha = 0.1;
  double alpha_decay = 0.9;  // applied once per completed buffer flush
  std::size_t epochs = 10;   // gradient steps per buffer flush
  std::size_t buffer_capacity = 32;
  std::vector<LabeledExample> buffer;
  std::size_t flushes = 0;

  static MlrModel zeros(std::size_t classes, std::size_t dim);

  std::size_t class_count() const { return static_cast<std::size_t>(theta.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(theta.cols()); }
  double current_alpha() const;
};

// softmax(theta x).
Eigen::VectorXd classify(const MlrModel& model, const Eigen::VectorXd& features);

// J(theta) = -(1/m) sum_i log p(a_i | x_i) + (lambda/2) ||theta||^2.
double objective(const MlrModel& model, std::span<const LabeledExample> batch);

// dJ/dtheta_j = -(1/m) sum_i x_i (1{a_i = j} - p(j | x_i)) + lambda theta_j.
Eigen::MatrixXd gradient(const MlrModel& model, std::span<const LabeledExample> batch);

// `steps` plain gradient-descent steps at `step_size` on the whole batch.
void gradient_descent(MlrModel& model, std::span<const LabeledExample> batch, std::size_t steps,
                      double step_size);

// Appends to the buffer; when it reaches capacity runs `epochs` descent steps
// at current_alpha() on the buffered batch, clears it and decays alpha.
MlrModel incremental_update(MlrModel model, std::span<const LabeledExample> examples);

}  // namespace caqs
