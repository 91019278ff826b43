#include <gtest/gtest.h>

#include "caqs/error.hpp"
#include "caqs/inference.hpp"
#include "caqs/teacher.hpp"

namespace caqs {
namespace {

CrfGraph three_nodes() {
  std::vector<GraphNode> nodes(3);
  const char* ids[] = {"a", "b", "c"};
  for (std::size_t i = 0; i < 3; ++i) {
    nodes[i].instance_id = ids[i];
    nodes[i].potential = Eigen::Vector2d(0.5, 0.5);
  }
  return CrfGraph(2, nodes, {});
}

MarginalSet marginals(std::vector<Eigen::VectorXd> nodes) {
  MarginalSet m;
  m.nodes = std::move(nodes);
  m.converged = true;
  return m;
}

TEST(WeakTeacher, StrictThresholdAndArgmax) {
  const CrfGraph g = three_nodes();
  const MarginalSet m = marginals({Eigen::Vector2d(0.9, 0.1), Eigen::Vector2d(0.05, 0.95), Eigen::Vector2d(0.6, 0.4)});
  EXPECT_EQ(weak_teacher(g, m, 0.9), (LabelMap{{"b", 1}}));
  EXPECT_EQ(weak_teacher(g, m, 0.5), (LabelMap{{"a", 0}, {"b", 1}, {"c", 0}}));
}

TEST(WeakTeacher, DeltaOneNeverFires) {
  const CrfGraph g = three_nodes();
  const MarginalSet m = marginals({Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 1.0), Eigen::Vector2d(0.6, 0.4)});
  EXPECT_TRUE(weak_teacher(g, m, 1.0).empty());
}

TEST(WeakTeacher, SkipsClampedNodes) {
  const CrfGraph g = condition(three_nodes(), {{"a", 0}});
  const MarginalSet m = infer(g);
  const LabelMap weak = weak_teacher(g, m, 0.4);
  EXPECT_FALSE(weak.count("a"));
  EXPECT_EQ(weak.size(), 2u);
}

TEST(WeakTeacher, RejectsMismatchedMarginals) {
  EXPECT_THROW(weak_teacher(three_nodes(), marginals({Eigen::Vector2d(0.5, 0.5)}), 0.9), InvalidInput);
}

TEST(TeacherConfig, Validation) {
  TeacherConfig c;
  EXPECT_NO_THROW(validate(c));
  c.delta = 1.2;
  EXPECT_THROW(validate(c), InvalidInput);
  c.delta = 0.9;
  c.budget = 0;
  EXPECT_THROW(validate(c), InvalidInput);
}

TEST(TeacherMode, ParseRoundTrip) {
  for (TeacherMode m : {TeacherMode::strong_only, TeacherMode::weak_only, TeacherMode::strong_plus_weak,
                        TeacherMode::all_instances})
    EXPECT_EQ(parse_teacher_mode(to_string(m)), m);
  EXPECT_THROW(parse_teacher_mode("sometimes"), InvalidInput);
  TeacherConfig c;
  c.mode = TeacherMode::weak_only;
  EXPECT_FALSE(c.uses_strong());
  EXPECT_TRUE(c.uses_weak());
  c.mode = TeacherMode::strong_only;
  EXPECT_TRUE(c.uses_strong());
  EXPECT_FALSE(c.uses_weak());
}

}  // namespace
}  // namespace caqs
