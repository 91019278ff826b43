#include "caqs/mlr.hpp"

#include <cmath>
#include <string>

#include "caqs/error.hpp"

namespace caqs {
namespace {

void check_batch(const MlrModel& model, std::span<const LabeledExample> batch) {
  for (const LabeledExample& ex : batch) {
    if (static_cast<std::size_t>(ex.features.size()) != model.dimension()) {
      throw InvalidInput("example dimension " + std::to_string(ex.features.size()) +
                         " != model dimension " + std::to_string(model.dimension()));
    }
    if (ex.label >= model.class_count()) throw InvalidInput("label out of range");
  }
}

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
  const double top = scores.maxCoeff();
  Eigen::VectorXd p = (scores.array() - top).exp();
  return p / p.sum();
}

}  // namespace

MlrModel MlrModel::zeros(std::size_t classes, std::size_t dim) {
  if (classes == 0 || dim == 0) throw InvalidInput("MLR needs at least one class and feature");
  MlrModel m;
  m.theta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(classes),
                                  static_cast<Eigen::Index>(dim));
  return m;
}

double MlrModel::current_alpha() const {
  return alpha * std::pow(alpha_decay, static_cast<double>(flushes));
}

Eigen::VectorXd classify(const MlrModel& model, const Eigen::VectorXd& features) {
  if (model.theta.size() == 0) throw InvalidInput("classifier is not initialized");
  if (static_cast<std::size_t>(features.size()) != model.dimension()) {
    throw InvalidInput("feature dimension does not match classifier");
  }
  return softmax(model.theta * features);
}

double objective(const MlrModel& model, std::span<const LabeledExample> batch) {
  if (batch.empty()) throw InvalidInput("empty batch");
  check_batch(model, batch);
  double loss = 0.0;
  for (const LabeledExample& ex : batch) {
    const Eigen::VectorXd s = model.theta * ex.features;
    const double top = s.maxCoeff();
    const double lse = top + std::log((s.array() - top).exp().sum());
    loss -= s[static_cast<Eigen::Index>(ex.label)] - lse;
  }
  return loss / static_cast<double>(batch.size()) + 0.5 * model.lambda * model.theta.squaredNorm();
}

Eigen::MatrixXd gradient(const MlrModel& model, std::span<const LabeledExample> batch) {
  if (batch.empty()) throw InvalidInput("empty batch");
  check_batch(model, batch);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(model.theta.rows(), model.theta.cols());
  for (const LabeledExample& ex : batch) {
    Eigen::VectorXd residual = softmax(model.theta * ex.features);
    residual[static_cast<Eigen::Index>(ex.label)] -= 1.0;
    g.noalias() += residual * ex.features.transpose();
  }
  g /= static_cast<double>(batch.size());
  g += model.lambda * model.theta;
  return g;
}

void gradient_descent(MlrModel& model, std::span<const LabeledExample> batch, std::size_t steps,
                      double step_size) {
  for (std::size_t s = 0; s < steps; ++s) model.theta -= step_size * gradient(model, batch);
}

MlrModel incremental_update(MlrModel model, std::span<const LabeledExample> examples) {
  check_batch(model, examples);
  if (model.buffer_capacity == 0) throw InvalidInput("buffer capacity must be positive");
  for (const LabeledExample& ex : examples) {
    model.buffer.push_back(ex);
    if (model.buffer.size() >= model.buffer_capacity) {
      gradient_descent(model, model.buffer, model.epochs, model.current_alpha());
      model.buffer.clear();
      ++model.flushes;
    }
  }
  return model;
}

}  // namespace caqs
