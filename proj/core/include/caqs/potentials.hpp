#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "caqs/context_model.hpp"
#include "caqs/instance.hpp"
#include "caqs/mlr.hpp"

namespace caqs {

// Lower clamp applied to every potential table entry.
inline constexpr double kPotentialFloor = 1e-12;

// p(a | x, P) from the baseline classifier.
Eigen::VectorXd activity_node_potential(const ActivityInstance& instance,
                                        const MlrModel& classifier);

// Object attributes pass the detector pmf through; person attributes produce
// the one-hot bin indicator scaled by N(value; mu, sigma^2). When
// `out_of_range` is given it is incremented for every value clamped into a
// boundary bin.
Eigen::VectorXd context_node_potential(const ContextObservation& observation,
                                       const ContextModel& context,
                                       std::size_t* out_of_range = nullptr);

// Concatenation of the per-observation node potentials.
Eigen::VectorXd context_node_potential(std::span<const ContextObservation> observations,
                                       const ContextModel& context,
                                       std::size_t* out_of_range = nullptr);

// q x q table F_a(p, l) N(|dt|^2; mu_t, sigma_t) N(||ds||^2; mu_s, sigma_s).
Eigen::MatrixXd activity_activity_potential(const ActivityInstance& a, const ActivityInstance& b,
                                            const ContextModel& context);

// q x dim table. Object: F_c(a, c) N(||s_a - s_c||^2; mu, sigma). Person: row a
// holds the bin indicator times the class-a density of the value.
Eigen::MatrixXd activity_context_potential(const ActivityInstance& instance,
                                           const ContextObservation& observation,
                                           const ContextModel& context,
                                           std::size_t* out_of_range = nullptr);

// Horizontal concatenation of the per-observation activity-context tables.
Eigen::MatrixXd activity_context_potential(const ActivityInstance& instance,
                                           std::span<const ContextObservation> observations,
                                           const ContextModel& context,
                                           std::size_t* out_of_range = nullptr);

// Entrywise max(value, kPotentialFloor).
Eigen::MatrixXd clamp_potential(Eigen::MatrixXd table);

}  // namespace caqs
