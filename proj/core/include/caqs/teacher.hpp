#pragma once

#include <cstddef>
#include <string_view>

#include "caqs/graph_model.hpp"
#include "caqs/inference.hpp"

namespace caqs {

enum class TeacherMode { strong_only, weak_only, strong_plus_weak, all_instances };

TeacherMode parse_teacher_mode(std::string_view name);
std::string_view to_string(TeacherMode mode);

struct TeacherConfig {
  double delta = 0.9;
  std::size_t budget = 5;  // strong labels per batch
  TeacherMode mode = TeacherMode::strong_plus_weak;

  bool uses_strong() const { return mode != TeacherMode::weak_only; }
  bool uses_weak() const {
    return mode == TeacherMode::weak_only || mode == TeacherMode::strong_plus_weak;
  }
};

void validate(const TeacherConfig& config);

// Every unclamped activity node whose largest marginal exceeds delta
// (strictly), labeled with its argmax.
LabelMap weak_teacher(const CrfGraph& graph, const MarginalSet& marginals, double delta);

}  // namespace caqs
