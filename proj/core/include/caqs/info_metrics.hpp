#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "caqs/graph_model.hpp"
#include "caqs/inference.hpp"

namespace caqs {

// Shannon entropy in nats, 0 log 0 = 0.
double node_entropy(const Eigen::VectorXd& pmf);

// Entropy of a joint table in nats.
double joint_entropy(const Eigen::MatrixXd& joint);

// I(A;B) computed against the table's own margins, clamped at 0.
double edge_mutual_information(const Eigen::MatrixXd& joint);

// Entropies h and pairwise mutual informations M over the activity
// sub-graph, plus the budget K. Position i corresponds to ids[i], which is
// activity node i of the graph it was built from.
struct QueryProblem {
  Eigen::VectorXd entropy;
  Eigen::MatrixXd mutual_information;
  std::size_t budget = 0;
  std::vector<std::string> ids;

  std::size_t size() const { return static_cast<std::size_t>(entropy.size()); }
};

// Throws InvalidInput unless h >= 0, M symmetric, nonnegative, zero diagonal,
// and 1 <= K <= N.
void validate(const QueryProblem& problem);

QueryProblem build_query_problem(const CrfGraph& graph, const MarginalSet& marginals,
                                 std::size_t budget);

// sum_i h_i - sum_{i<j} M_ij; exact joint entropy on tree-structured models.
double approx_joint_entropy(const QueryProblem& problem);

}  // namespace caqs
