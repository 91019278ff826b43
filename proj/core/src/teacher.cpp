#include "caqs/teacher.hpp"

#include <string>

#include "caqs/error.hpp"

namespace caqs {

TeacherMode parse_teacher_mode(std::string_view name) {
  if (name == "strong_only") return TeacherMode::strong_only;
  if (name == "weak_only") return TeacherMode::weak_only;
  if (name == "strong_plus_weak") return TeacherMode::strong_plus_weak;
  if (name == "all_instances") return TeacherMode::all_instances;
  throw InvalidInput("unknown teacher mode '" + std::string(name) + "'");
}

std::string_view to_string(TeacherMode mode) {
  switch (mode) {
    case TeacherMode::strong_only: return "strong_only";
    case TeacherMode::weak_only: return "weak_only";
    case TeacherMode::strong_plus_weak: return "strong_plus_weak";
    case TeacherMode::all_instances: return "all_instances";
  }
  return "unknown";
}

void validate(const TeacherConfig& config) {
  if (!(config.delta > 0.0 && config.delta <= 1.0)) {
    throw InvalidInput("delta must lie in (0, 1]");
  }
  if (config.budget == 0) throw InvalidInput("budget K must be positive");
}

LabelMap weak_teacher(const CrfGraph& graph, const MarginalSet& marginals, double delta) {
  if (marginals.nodes.size() != graph.node_count()) {
    throw InvalidInput("marginals do not match the graph");
  }
  LabelMap out;
  for (std::size_t i = 0; i < graph.activity_count(); ++i) {
    const GraphNode& node = graph.node(i);
    if (node.observed_label) continue;
    const Eigen::VectorXd& pmf = marginals.nodes[i];
    const std::size_t best = argmax(pmf);
    if (pmf[static_cast<Eigen::Index>(best)] > delta) out.emplace(node.instance_id, best);
  }
  return out;
}

}  // namespace caqs
