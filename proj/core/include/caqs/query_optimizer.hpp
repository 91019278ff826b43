#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "caqs/info_metrics.hpp"

namespace caqs {

// min 1/2 u'(Q + gamma I)u + f'u  s.t. 1'u = K, u in {0,1}^N,
// with Q = -M and f = M1 - h.
struct BqpInstance {
  Eigen::MatrixXd quadratic;
  Eigen::VectorXd linear;
  std::size_t budget = 0;
  double gamma = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(linear.size()); }
};

BqpInstance make_instance(const QueryProblem& problem);

// gamma = max_i sum_j |M_ij|, which makes Q + gamma I diagonally dominant with
// a nonnegative diagonal.
BqpInstance convexify(BqpInstance instance);

// Objective including the gamma shift. No feasibility check.
double shifted_objective(const BqpInstance& instance, const Eigen::VectorXd& u);

// Minimization form 1/2 u'Qu + f'u = -G(u). Throws InvalidInput unless u is
// binary with exactly K ones.
double objective(const QueryProblem& problem, const Eigen::VectorXd& u);

// G(u) = u'h - u'M1 + 1/2 u'Mu, the entropy reduction achieved by labeling u.
double entropy_gain(const QueryProblem& problem, const Eigen::VectorXd& u);

enum class Fix : std::int8_t { free, zero, one };

struct RelaxationOptions {
  std::size_t max_iters = 2000;
  double gap_tol = 1e-8;
  // Stop as soon as the certified bound reaches this value (pruning cutoff).
  double cutoff = std::numeric_limits<double>::infinity();
};

struct Relaxation {
  double lower_bound = 0.0;  // valid for every binary completion
  double value = 0.0;        // objective at `solution`
  Eigen::VectorXd solution;  // feasible point of the relaxed problem
  std::size_t iterations = 0;
};

// Solves the box relaxation 0 <= u <= 1, 1'u = K with the fixed coordinates
// clamped. The bound is certified by the Frank-Wolfe duality gap at the
// returned point. nullopt when the fixing cannot reach the budget.
std::optional<Relaxation> solve_relaxation(const BqpInstance& instance, std::span<const Fix> fixed,
                                           const RelaxationOptions& options = {},
                                           const Eigen::VectorXd* warm_start = nullptr);

struct Selection {
  std::vector<std::size_t> chosen;  // ascending positions
  double objective_value = 0.0;     // unshifted minimization objective
  std::size_t nodes_explored = 0;
  bool certified_optimal = false;
};

struct BranchAndBoundOptions {
  std::size_t node_limit = 2'000'000;
  RelaxationOptions relaxation;
};

// Bound on every binary completion of a fixing, from charging each chosen free
// coordinate half of its r - 1 cheapest pairwise terms (r = free budget).
// Unshifted objective; -inf when the fixing is infeasible.
double pairwise_bound(const BqpInstance& instance, std::span<const Fix> fixed);

// Global minimizer via convexification and depth-first branch and bound.
Selection select_batch(const QueryProblem& problem, const BranchAndBoundOptions& options = {});

// Exhaustive enumeration of all C(N, K) subsets in lexicographic order.
// Throws InvalidInput when C(N, K) > max_subsets.
Selection brute_force_select(const QueryProblem& problem, std::size_t max_subsets = 1'000'000);

// The K largest entropies, lowest index on ties.
Selection top_entropy_select(const QueryProblem& problem);

Eigen::VectorXd indicator(std::size_t size, std::span<const std::size_t> chosen);

}  // namespace caqs
