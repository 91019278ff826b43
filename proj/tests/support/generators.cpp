#include "generators.hpp"

#include <string>

namespace caqs::testing {
namespace {

Eigen::MatrixXd random_table(Rng& rng, std::size_t rows, std::size_t cols) {
  Eigen::MatrixXd t(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < t.rows(); ++r)
    for (Eigen::Index c = 0; c < t.cols(); ++c) t(r, c) = uniform(rng, 0.05, 2.0);
  return t;
}

std::vector<GraphNode> activity_nodes(Rng& rng, std::size_t n, std::size_t q) {
  std::vector<GraphNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].instance_id = "a" + std::to_string(100 + i);
    nodes[i].potential = random_pmf(rng, q);
  }
  return nodes;
}

void add_context_leaves(Rng& rng, std::vector<GraphNode>& nodes, std::vector<EdgeRecord>& edges,
                        std::size_t activities, std::size_t q, std::size_t leaves) {
  for (std::size_t k = 0; k < leaves; ++k) {
    const std::size_t owner = uniform_index(rng, 0, activities - 1);
    const std::size_t dim = uniform_index(rng, 2, 3);
    GraphNode node;
    node.kind = NodeKind::context;
    node.instance_id = nodes[owner].instance_id;
    node.potential = random_pmf(rng, dim);
    nodes.push_back(std::move(node));
    edges.push_back({owner, nodes.size() - 1, EdgeKind::activity_context, random_table(rng, q, dim)});
  }
}

}  // namespace

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Eigen::VectorXd random_pmf(Rng& rng, std::size_t size) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(size));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uniform(rng, 0.05, 1.0);
  return v / v.sum();
}

QueryProblem random_query_problem(Rng& rng, std::size_t n, std::size_t k, double density,
                                  double scale) {
  QueryProblem p;
  const auto ni = static_cast<Eigen::Index>(n);
  p.entropy = Eigen::VectorXd(ni);
  p.mutual_information = Eigen::MatrixXd::Zero(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) p.entropy[i] = uniform(rng, 0.0, 2.0);
  for (Eigen::Index i = 0; i < ni; ++i)
    for (Eigen::Index j = i + 1; j < ni; ++j)
      if (uniform(rng, 0.0, 1.0) < density) p.mutual_information(i, j) = p.mutual_information(j, i) = uniform(rng, 0.0, scale);
  p.budget = k;
  for (std::size_t i = 0; i < n; ++i) p.ids.push_back("a" + std::to_string(100 + i));
  return p;
}

CrfGraph random_tree(Rng& rng, std::size_t activities, std::size_t q, std::size_t context_leaves) {
  std::vector<GraphNode> nodes = activity_nodes(rng, activities, q);
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 1; i < activities; ++i) {
    const std::size_t parent = uniform_index(rng, 0, i - 1);
    edges.push_back({parent, i, EdgeKind::activity_activity, random_table(rng, q, q)});
  }
  add_context_leaves(rng, nodes, edges, activities, q, context_leaves);
  return CrfGraph(q, std::move(nodes), std::move(edges));
}

CrfGraph random_loopy_graph(Rng& rng, std::size_t activities, std::size_t q, double p,
                            std::size_t context_leaves) {
  std::vector<GraphNode> nodes = activity_nodes(rng, activities, q);
  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < activities; ++i)
    for (std::size_t j = i + 1; j < activities; ++j)
      if (uniform(rng, 0.0, 1.0) < p) edges.push_back({i, j, EdgeKind::activity_activity, random_table(rng, q, q)});
  add_context_leaves(rng, nodes, edges, activities, q, context_leaves);
  return CrfGraph(q, std::move(nodes), std::move(edges));
}

}  // namespace caqs::testing
