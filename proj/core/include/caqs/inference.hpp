#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "caqs/graph_model.hpp"

namespace caqs {

struct BpOptions {
  std::size_t max_iters = 100;
  double tol = 1e-6;
  double damping = 0.5;  // weight of the previous message
};

// Sum-product beliefs. `nodes[i]` is the marginal of graph node i and
// `edges[e]` the pairwise marginal of graph edge e (rows: first endpoint).
struct MarginalSet {
  std::vector<Eigen::VectorXd> nodes;
  std::vector<Eigen::MatrixXd> edges;
  bool converged = false;
  std::size_t iterations = 0;
  double max_residual = 0.0;
};

// Log-domain loopy belief propagation with a synchronous (flooding) schedule.
// Clamped activity nodes contribute a one-hot evidence vector. Non-convergence
// is reported through `converged`, never thrown.
MarginalSet infer(const CrfGraph& graph, const BpOptions& options = {});

// Index of the largest entry, lowest index on ties.
std::size_t argmax(const Eigen::VectorXd& pmf);

// argmax of every node marginal, indexed like graph nodes.
std::vector<std::size_t> predict_labels(const MarginalSet& marginals);

}  // namespace caqs
