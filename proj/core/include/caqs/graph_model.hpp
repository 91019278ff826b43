#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "caqs/context_model.hpp"
#include "caqs/instance.hpp"
#include "caqs/mlr.hpp"

namespace caqs {

using PotentialTable = Eigen::MatrixXd;    // rows: first endpoint's states
using LabelMap = std::map<std::string, std::size_t>;  // instance id -> class

enum class NodeKind { activity, context };
enum class EdgeKind { activity_activity, activity_context };

struct GraphNode {
  NodeKind kind = NodeKind::activity;
  std::string instance_id;           // owning instance for context nodes
  std::size_t attribute = 0;         // context nodes only
  Eigen::VectorXd potential;         // node potential (normalized pmf for activities)
  std::optional<std::size_t> observed_label;  // clamped state, activity nodes only
};

struct EdgeRecord {
  std::size_t first = 0;
  std::size_t second = 0;
  EdgeKind kind = EdgeKind::activity_activity;
  PotentialTable potential;
};

// Pairwise CRF over one batch. Activity nodes occupy indices
// [0, activity_count()) in ascending instance-id order; context nodes follow,
// grouped by owning activity in observation order.
class CrfGraph {
 public:
  CrfGraph() = default;
  CrfGraph(std::size_t class_count, std::vector<GraphNode> nodes, std::vector<EdgeRecord> edges);

  std::size_t class_count() const { return class_count_; }
  std::size_t activity_count() const { return activity_count_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t state_count(std::size_t node) const {
    return static_cast<std::size_t>(nodes_[node].potential.size());
  }

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const GraphNode& node(std::size_t i) const { return nodes_[i]; }

  // Incident edge indices of every node, ascending.
  const std::vector<std::vector<std::size_t>>& incidence() const { return incidence_; }

  std::optional<std::size_t> find_activity(const std::string& id) const;

  // N x N 0/1 adjacency of the activity sub-graph.
  Eigen::MatrixXd activity_adjacency() const;

  // Copy with the given activity nodes clamped.
  CrfGraph with_labels(const LabelMap& labels) const;

 private:
  void validate() const;

  std::size_t class_count_ = 0;
  std::size_t activity_count_ = 0;
  std::vector<GraphNode> nodes_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::vector<std::size_t>> incidence_;
};

struct GraphOptions {
  bool activity_edges = true;  // link-predictor edges between activities
  bool context_nodes = true;   // one context node + edge per observation
};

CrfGraph build_graph(std::span<const ActivityInstance> instances, const MlrModel& classifier,
                     const ContextModel& context, const GraphOptions& options = {});

// Returns a conditioned copy; the input graph is untouched.
CrfGraph condition(const CrfGraph& graph, const LabelMap& labels);

}  // namespace caqs
