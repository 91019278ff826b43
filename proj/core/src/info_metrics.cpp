#include "caqs/info_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "caqs/error.hpp"

namespace caqs {

double node_entropy(const Eigen::VectorXd& pmf) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < pmf.size(); ++i) {
    const double p = pmf[i];
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(h, 0.0);
}

double joint_entropy(const Eigen::MatrixXd& joint) {
  double h = 0.0;
  for (Eigen::Index r = 0; r < joint.rows(); ++r) {
    for (Eigen::Index c = 0; c < joint.cols(); ++c) {
      const double p = joint(r, c);
      if (p > 0.0) h -= p * std::log(p);
    }
  }
  return std::max(h, 0.0);
}

double edge_mutual_information(const Eigen::MatrixXd& joint) {
  const Eigen::VectorXd row = joint.rowwise().sum();
  const Eigen::VectorXd col = joint.colwise().sum().transpose();
  double mi = 0.0;
  for (Eigen::Index r = 0; r < joint.rows(); ++r) {
    for (Eigen::Index c = 0; c < joint.cols(); ++c) {
      const double p = joint(r, c);
      if (p > 0.0) mi += p * std::log(p / (row[r] * col[c]));
    }
  }
  return std::max(mi, 0.0);
}

void validate(const QueryProblem& problem) {
  const auto n = static_cast<Eigen::Index>(problem.size());
  const Eigen::MatrixXd& m = problem.mutual_information;
  if (m.rows() != n || m.cols() != n) throw InvalidInput("M must be N x N");
  if (!problem.ids.empty() && problem.ids.size() != problem.size()) {
    throw InvalidInput("index map does not match problem size");
  }
  if (!problem.entropy.allFinite() || !m.allFinite()) throw InvalidInput("non-finite h or M");
  if (n > 0 && problem.entropy.minCoeff() < 0.0) throw InvalidInput("negative entropy");
  if (n > 0 && m.minCoeff() < 0.0) throw InvalidInput("negative mutual information");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) throw InvalidInput("M must have a zero diagonal");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (m(i, j) != m(j, i)) throw InvalidInput("M must be symmetric");
    }
  }
  if (problem.budget < 1 || problem.budget > problem.size()) {
    throw InvalidInput("budget K=" + std::to_string(problem.budget) + " outside [1, " +
                       std::to_string(problem.size()) + "]");
  }
}

QueryProblem build_query_problem(const CrfGraph& graph, const MarginalSet& marginals,
                                 std::size_t budget) {
  if (marginals.nodes.size() != graph.node_count() ||
      marginals.edges.size() != graph.edges().size()) {
    throw InvalidInput("marginals do not match the graph");
  }
  const std::size_t n = graph.activity_count();
  QueryProblem problem;
  problem.budget = budget;
  problem.entropy.resize(static_cast<Eigen::Index>(n));
  problem.mutual_information = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n));
  problem.ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<std::size_t>(marginals.nodes[i].size()) != graph.state_count(i)) {
      throw InvalidInput("node marginal " + std::to_string(i) + " has the wrong size");
    }
    problem.entropy[static_cast<Eigen::Index>(i)] = node_entropy(marginals.nodes[i]);
    problem.ids.push_back(graph.node(i).instance_id);
  }
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    const EdgeRecord& edge = graph.edges()[e];
    if (edge.kind != EdgeKind::activity_activity) continue;
    const double mi = edge_mutual_information(marginals.edges[e]);
    const auto a = static_cast<Eigen::Index>(edge.first);
    const auto b = static_cast<Eigen::Index>(edge.second);
    problem.mutual_information(a, b) += mi;
    problem.mutual_information(b, a) += mi;
  }
  validate(problem);
  return problem;
}

double approx_joint_entropy(const QueryProblem& problem) {
  const Eigen::MatrixXd& m = problem.mutual_information;
  return problem.entropy.sum() - 0.5 * m.sum();
}

}  // namespace caqs
