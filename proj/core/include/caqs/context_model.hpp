#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "caqs/gaussian.hpp"
#include "caqs/instance.hpp"
#include "caqs/structure.hpp"

namespace caqs {

// Nonnegative co-occurrence counts (F_a is q x q, F_c is q x value-count).
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix() = default;
  CooccurrenceMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  explicit CooccurrenceMatrix(Eigen::MatrixXd counts);

  // Laplace-smoothed initial counts (all ones).
  static CooccurrenceMatrix laplace(std::size_t rows, std::size_t cols) {
    return CooccurrenceMatrix(rows, cols, 1.0);
  }

  std::size_t rows() const { return static_cast<std::size_t>(counts_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(counts_.cols()); }
  double operator()(std::size_t r, std::size_t c) const { return counts_(r, c); }
  const Eigen::MatrixXd& counts() const { return counts_; }

  void add(std::size_t r, std::size_t c, double amount);

 private:
  Eigen::MatrixXd counts_;
};

class BinningScheme {
 public:
  struct Location {
    std::size_t bin = 0;
    bool clamped = false;  // value fell outside [front, back] edge
  };

  BinningScheme() = default;
  explicit BinningScheme(std::vector<double> edges);
  static BinningScheme equal_width(double lo, double hi, std::size_t bins);

  std::size_t bin_count() const { return edges_.empty() ? 0 : edges_.size() - 1; }
  const std::vector<double>& edges() const { return edges_; }

  // Bins are [e_k, e_{k+1}) except the last, which is closed. Out-of-range
  // values go to the nearest boundary bin.
  Location locate(double value) const;

 private:
  std::vector<double> edges_;
};

struct AttributeModel {
  AttributeSchema schema;
  // object attributes
  CooccurrenceMatrix cooccurrence;  // F_c, q x dim
  RunningGaussian displacement;     // squared activity-to-object distance
  // person attributes
  BinningScheme binning;
  RunningGaussian value;
  std::vector<RunningGaussian> per_class;

  std::size_t dim() const { return schema.dim; }
};

struct ContextModel {
  std::size_t class_count = 0;
  CooccurrenceMatrix activity_cooccurrence;  // F_a
  RunningGaussian temporal;                  // |dt|^2 over linked pairs
  RunningGaussian spatial;                   // ||ds||^2 over linked pairs
  LinkPredictor link;
  std::vector<AttributeModel> attributes;

  std::vector<AttributeSchema> schemas() const;
};

// Fresh model: Laplace-initialized co-occurrences, empty Gaussians, and the
// given binning for every person attribute (its bin count overrides dim).
ContextModel make_context_model(std::size_t class_count, std::vector<AttributeSchema> schemas,
                                const std::vector<BinningScheme>& person_binnings);

// Labeled evidence from one batch. `labels[u]` is the class of instance u or
// nullopt to leave it out. `adjacency` is the symmetric N x N activity
// adjacency. `observation_values[u][k]`, when present, is the inferred value of
// instance u's k-th object observation; otherwise the detector argmax is used.
struct ContextEvidence {
  std::span<const ActivityInstance> instances;
  std::vector<std::optional<std::size_t>> labels;
  Eigen::MatrixXd adjacency;
  std::vector<std::vector<std::optional<std::size_t>>> observation_values;
};

// F_ij += sum([(L=i)(L=j)^T] .* Adj) for F_a; the analogous (class, value)
// accumulation for every F_c; running Gaussian updates for the linked-pair
// distances and attribute values.
ContextModel update_context(ContextModel context, const ContextEvidence& evidence);

}  // namespace caqs
