#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace caqs {

// Object-type attributes carry a detector posterior over a finite value set.
// Person-type attributes carry a scalar (e.g. displacement ||L1 - L2||) that
// is binned before it enters the graph.
enum class AttributeKind { object, person };

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::object;
  // Cardinality of the attribute's state space: value count for object
  // attributes, bin count for person attributes.
  std::size_t dim = 0;
};

struct ContextObservation {
  std::size_t attribute = 0;  // index into the session's attribute schemas
  std::optional<Eigen::VectorXd> pmf;
  std::optional<double> value;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
};

struct ActivityInstance {
  std::string id;
  Eigen::VectorXd features;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  double time = 0.0;
  std::vector<ContextObservation> context;
  // Oracle-only fields; never read by query selection.
  std::optional<std::size_t> true_label;
  std::optional<std::int64_t> group;
};

// Checks finiteness of positions/features and the pmf/value contract of each
// observation against `schemas`. Throws InvalidInput.
void validate_instance(const ActivityInstance& instance, std::size_t feature_dim,
                       const std::vector<AttributeSchema>& schemas);

}  // namespace caqs
