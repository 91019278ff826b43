#include "caqs/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "caqs/error.hpp"
#include "caqs/potentials.hpp"
#include "caqs/structure.hpp"

namespace caqs {

CrfGraph::CrfGraph(std::size_t class_count, std::vector<GraphNode> nodes,
                   std::vector<EdgeRecord> edges)
    : class_count_(class_count), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  activity_count_ = 0;
  while (activity_count_ < nodes_.size() && nodes_[activity_count_].kind == NodeKind::activity) {
    ++activity_count_;
  }
  incidence_.assign(nodes_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].first >= nodes_.size() || edges_[e].second >= nodes_.size()) {
      throw InvalidInput("edge " + std::to_string(e) + " references a missing node");
    }
    incidence_[edges_[e].first].push_back(e);
    incidence_[edges_[e].second].push_back(e);
  }
  validate();
}

void CrfGraph::validate() const {
  for (std::size_t i = activity_count_; i < nodes_.size(); ++i) {
    if (nodes_[i].kind == NodeKind::activity) {
      throw InvalidInput("activity nodes must precede context nodes");
    }
    if (nodes_[i].observed_label) throw InvalidInput("context nodes cannot be clamped");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const GraphNode& n = nodes_[i];
    if (n.potential.size() == 0 || !n.potential.allFinite() || n.potential.minCoeff() < 0.0 ||
        !(n.potential.maxCoeff() > 0.0)) {
      throw InvalidInput("node " + std::to_string(i) + " has an invalid potential");
    }
    if (n.kind == NodeKind::activity) {
      if (static_cast<std::size_t>(n.potential.size()) != class_count_) {
        throw InvalidInput("activity node " + std::to_string(i) + " must have q states");
      }
      if (std::abs(n.potential.sum() - 1.0) > 1e-9) {
        throw InvalidInput("activity node " + std::to_string(i) + " prior does not sum to 1");
      }
      if (n.observed_label && *n.observed_label >= class_count_) {
        throw InvalidInput("observed label out of range");
      }
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const EdgeRecord& edge = edges_[e];
    if (edge.first == edge.second) throw InvalidInput("self-loop on edge " + std::to_string(e));
    if (static_cast<std::size_t>(edge.potential.rows()) != state_count(edge.first) ||
        static_cast<std::size_t>(edge.potential.cols()) != state_count(edge.second)) {
      throw InvalidInput("edge " + std::to_string(e) + " table does not match endpoint states");
    }
    if (!edge.potential.allFinite() || edge.potential.minCoeff() < 0.0 ||
        !(edge.potential.maxCoeff() > 0.0)) {
      throw InvalidInput("edge " + std::to_string(e) + " has an invalid potential");
    }
    const bool first_activity = edge.first < activity_count_;
    const bool second_activity = edge.second < activity_count_;
    const bool aa = edge.kind == EdgeKind::activity_activity;
    if (aa != (first_activity && second_activity) || !first_activity) {
      throw InvalidInput("edge " + std::to_string(e) + " kind does not match its endpoints");
    }
  }
}

std::optional<std::size_t> CrfGraph::find_activity(const std::string& id) const {
  const auto begin = nodes_.begin();
  const auto end = begin + static_cast<std::ptrdiff_t>(activity_count_);
  const auto it = std::lower_bound(begin, end, id, [](const GraphNode& n, const std::string& key) {
    return n.instance_id < key;
  });
  if (it != end && it->instance_id == id) return static_cast<std::size_t>(it - begin);
  // Hand-built graphs need not be id-sorted.
  for (std::size_t i = 0; i < activity_count_; ++i) {
    if (nodes_[i].instance_id == id) return i;
  }
  return std::nullopt;
}

Eigen::MatrixXd CrfGraph::activity_adjacency() const {
  const auto n = static_cast<Eigen::Index>(activity_count_);
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (const EdgeRecord& e : edges_) {
    if (e.kind != EdgeKind::activity_activity) continue;
    adj(static_cast<Eigen::Index>(e.first), static_cast<Eigen::Index>(e.second)) = 1.0;
    adj(static_cast<Eigen::Index>(e.second), static_cast<Eigen::Index>(e.first)) = 1.0;
  }
  return adj;
}

CrfGraph CrfGraph::with_labels(const LabelMap& labels) const {
  CrfGraph out = *this;
  for (const auto& [id, cls] : labels) {
    const std::optional<std::size_t> node = find_activity(id);
    if (!node) throw InvalidInput("unknown instance id '" + id + "'");
    if (cls >= class_count_) {
      throw InvalidInput("class " + std::to_string(cls) + " out of range for '" + id + "'");
    }
    out.nodes_[*node].observed_label = cls;
  }
  return out;
}

CrfGraph build_graph(std::span<const ActivityInstance> instances, const MlrModel& classifier,
                     const ContextModel& context, const GraphOptions& options) {
  if (instances.empty()) throw InvalidInput("cannot build a graph over an empty batch");
  if (classifier.theta.size() == 0) throw InvalidInput("classifier is not initialized");
  const std::size_t q = context.class_count;
  if (classifier.class_count() != q) {
    throw InvalidInput("classifier and context model disagree on the class count");
  }
  const std::vector<AttributeSchema> schemas = context.schemas();
  for (const ActivityInstance& inst : instances) {
    validate_instance(inst, classifier.dimension(), schemas);
  }

  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instances[a].id < instances[b].id;
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (instances[order[k]].id == instances[order[k - 1]].id) {
      throw InvalidInput("duplicate instance id '" + instances[order[k]].id + "'");
    }
  }

  std::vector<GraphNode> nodes;
  std::vector<EdgeRecord> edges;
  for (std::size_t idx : order) {
    GraphNode node;
    node.kind = NodeKind::activity;
    node.instance_id = instances[idx].id;
    node.potential = activity_node_potential(instances[idx], classifier);
    nodes.push_back(std::move(node));
  }

  if (options.activity_edges) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const ActivityInstance& a = instances[order[i]];
        const ActivityInstance& b = instances[order[j]];
        if (!predict_link(context.link, a, b)) continue;
        edges.push_back({i, j, EdgeKind::activity_activity,
                         activity_activity_potential(a, b, context)});
      }
    }
  }

  if (options.context_nodes) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      const ActivityInstance& inst = instances[order[i]];
      for (const ContextObservation& obs : inst.context) {
        GraphNode node;
        node.kind = NodeKind::context;
        node.instance_id = inst.id;
        node.attribute = obs.attribute;
        node.potential = clamp_potential(context_node_potential(obs, context));
        nodes.push_back(std::move(node));
        edges.push_back({i, nodes.size() - 1, EdgeKind::activity_context,
                         activity_context_potential(inst, obs, context)});
      }
    }
  }
  return CrfGraph(q, std::move(nodes), std::move(edges));
}

CrfGraph condition(const CrfGraph& graph, const LabelMap& labels) {
  return graph.with_labels(labels);
}

}  // namespace caqs
