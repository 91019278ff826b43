#include "caqs/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace caqs {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Eigen's vectorized exp clamps very negative inputs, which would turn the
// -inf of a clamped state into a tiny positive probability.
template <typename Derived>
auto exact_exp(const Eigen::ArrayBase<Derived>& x) {
  return x.unaryExpr([](double v) { return std::exp(v); });
}

double log_sum_exp(const Eigen::VectorXd& v) {
  const double top = v.maxCoeff();
  if (top == kNegInf) return kNegInf;
  return top + std::log(exact_exp(v.array() - top).sum());
}

Eigen::VectorXd normalize_log(Eigen::VectorXd v) {
  const double z = log_sum_exp(v);
  v.array() -= z;
  return v;
}

Eigen::VectorXd log_node_potential(const GraphNode& node) {
  if (node.observed_label) {
    Eigen::VectorXd lp = Eigen::VectorXd::Constant(node.potential.size(), kNegInf);
    lp[static_cast<Eigen::Index>(*node.observed_label)] = 0.0;
    return lp;
  }
  return node.potential.array().log();
}

// Messages live in log space, normalized so their probabilities sum to 1.
// to_second[e] flows first -> second and has second's state count.
struct Messages {
  std::vector<Eigen::VectorXd> to_second;
  std::vector<Eigen::VectorXd> to_first;
};

// Log of phi_i times every message into i except the one arriving over `skip`.
Eigen::VectorXd cavity(const CrfGraph& graph, const std::vector<Eigen::VectorXd>& log_phi,
                       const Messages& msgs, std::size_t node, std::size_t skip) {
  Eigen::VectorXd out = log_phi[node];
  for (std::size_t e : graph.incidence()[node]) {
    if (e == skip) continue;
    const EdgeRecord& edge = graph.edges()[e];
    out += edge.second == node ? msgs.to_second[e] : msgs.to_first[e];
  }
  return out;
}

// log sum_x exp(log_table(x, y) + incoming(x)) for every y, normalized.
Eigen::VectorXd send(const Eigen::MatrixXd& log_table, const Eigen::VectorXd& incoming) {
  Eigen::VectorXd out(log_table.cols());
  for (Eigen::Index y = 0; y < log_table.cols(); ++y) {
    out[y] = log_sum_exp(log_table.col(y) + incoming);
  }
  return normalize_log(std::move(out));
}

}  // namespace

std::size_t argmax(const Eigen::VectorXd& pmf) {
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < pmf.size(); ++i) {
    if (pmf[i] > pmf[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(i);
  }
  return best;
}

MarginalSet infer(const CrfGraph& graph, const BpOptions& options) {
  const std::size_t n = graph.node_count();
  const std::vector<EdgeRecord>& edges = graph.edges();
  const double damping = std::clamp(options.damping, 0.0, 1.0);

  std::vector<Eigen::VectorXd> log_phi(n);
  for (std::size_t i = 0; i < n; ++i) log_phi[i] = log_node_potential(graph.node(i));
  std::vector<Eigen::MatrixXd> log_psi(edges.size());
  Messages msgs;
  msgs.to_second.resize(edges.size());
  msgs.to_first.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    log_psi[e] = edges[e].potential.array().log();
    const auto s1 = static_cast<double>(graph.state_count(edges[e].first));
    const auto s2 = static_cast<double>(graph.state_count(edges[e].second));
    msgs.to_first[e] = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(s1), -std::log(s1));
    msgs.to_second[e] = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(s2), -std::log(s2));
  }

  MarginalSet out;
  out.converged = edges.empty();
  // Each sweep computes every message from the previous sweep's messages.
  for (std::size_t iter = 0; iter < options.max_iters && !edges.empty(); ++iter) {
    Messages next = msgs;
    double residual = 0.0;
    auto relax = [&](Eigen::VectorXd fresh, Eigen::VectorXd& target, const Eigen::VectorXd& old) {
      const Eigen::ArrayXd p_old = exact_exp(old.array());
      Eigen::ArrayXd p = exact_exp(fresh.array());
      if (damping > 0.0) {
        p = (1.0 - damping) * p + damping * p_old;
        p /= p.sum();
      }
      residual = std::max(residual, (p - p_old).abs().maxCoeff());
      target = p.log().matrix();
    };
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const EdgeRecord& edge = edges[e];
      relax(send(log_psi[e], cavity(graph, log_phi, msgs, edge.first, e)), next.to_second[e],
            msgs.to_second[e]);
      relax(send(log_psi[e].transpose(), cavity(graph, log_phi, msgs, edge.second, e)),
            next.to_first[e], msgs.to_first[e]);
    }
    msgs = std::move(next);
    out.iterations = iter + 1;
    out.max_residual = residual;
    if (residual < options.tol) {
      out.converged = true;
      break;
    }
  }

  out.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.nodes[i] = exact_exp(normalize_log(cavity(graph, log_phi, msgs, i, edges.size())).array()).matrix();
  }
  out.edges.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const EdgeRecord& edge = edges[e];
    const Eigen::VectorXd a = cavity(graph, log_phi, msgs, edge.first, e);
    const Eigen::VectorXd b = cavity(graph, log_phi, msgs, edge.second, e);
    Eigen::MatrixXd joint = log_psi[e];
    joint.colwise() += a;
    joint.rowwise() += b.transpose();
    const double top = joint.maxCoeff();
    Eigen::MatrixXd p = exact_exp(joint.array() - top).matrix();
    out.edges[e] = p / p.sum();
  }
  return out;
}

std::vector<std::size_t> predict_labels(const MarginalSet& marginals) {
  std::vector<std::size_t> labels(marginals.nodes.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = argmax(marginals.nodes[i]);
  return labels;
}

}  // namespace caqs
