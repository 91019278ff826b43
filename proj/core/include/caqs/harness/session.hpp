#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "caqs/context_model.hpp"
#include "caqs/graph_model.hpp"
#include "caqs/inference.hpp"
#include "caqs/mlr.hpp"
#include "caqs/query_optimizer.hpp"
#include "caqs/teacher.hpp"
#include "caqs/harness/config.hpp"
#include "caqs/harness/dataset.hpp"

namespace caqs::harness {

enum class StrategyKind { caqs, caqs_no_context, random, entropy_topk, brute_force_oracle };

StrategyKind parse_strategy(std::string_view name);
std::string_view to_string(StrategyKind strategy);

// Which batch labels feed the co-occurrence update: every node's
// post-inference label, the strong and weak teachers' labels, or the
// strong teacher's labels alone.
enum class ContextLabels { all, taught, strong };

struct SessionOptions {
  StrategyKind strategy = StrategyKind::caqs;
  TeacherConfig teacher;
  std::optional<double> budget_fraction;  // K = round(k * batch size) when set
  std::size_t batch_size = 50;
  double initial_fraction = 0.1;
  bool random_initial = false;
  std::size_t initial_epochs = 200;
  double initial_alpha = 0.5;
  double lambda = 1e-4;
  double alpha = 0.1;
  double alpha_decay = 0.9;
  std::size_t epochs = 10;
  std::size_t buffer = 32;
  std::size_t person_bins = 8;
  ContextLabels context_labels = ContextLabels::all;
  std::size_t link_pool = 4000;  // most recent labeled pairs kept for refits
  BpOptions bp;
  BranchAndBoundOptions branch_and_bound;
  std::uint64_t seed = 1;
};

SessionOptions session_options(const Config& config);

struct CurvePoint {
  std::size_t round = 0;
  std::size_t manual = 0;  // cumulative manual labels, initial set included
  std::size_t weak = 0;    // cumulative weak-teacher labels
  double accuracy = 0.0;
};

struct QueryItem {
  std::string id;
  Eigen::VectorXd pmf;
  double entropy = 0.0;
  std::vector<std::pair<std::string, double>> neighbors;  // (id, mutual information)
};

struct QueryBatch {
  std::size_t round = 0;
  std::vector<QueryItem> items;
};

struct GraphSnapshot {
  std::size_t round = 0;
  bool conditioned = false;
  CrfGraph graph;
  MarginalSet marginals;
};

struct SessionState {
  std::size_t round = 0;
  MlrModel classifier;
  ContextModel context;
  std::size_t train_size = 0;
  std::size_t labeled_manual = 0;
  std::size_t labeled_weak = 0;
  std::size_t aborted_rounds = 0;
  std::vector<QueryItem> pending_queries;
  std::vector<CurvePoint> curve;
  std::vector<std::vector<std::string>> queried;  // strong-label ids per round
  std::size_t bb_nodes = 0;
  bool finished = false;
};

class Teacher {
 public:
  virtual ~Teacher() = default;
  // Labels for the queried ids, or nullopt to abort the round.
  virtual std::optional<LabelMap> answer(const QueryBatch& batch) = 0;
};

class OracleTeacher : public Teacher {
 public:
  explicit OracleTeacher(const Dataset& dataset);
  std::optional<LabelMap> answer(const QueryBatch& batch) override;

 private:
  LabelMap truth_;
};

class SessionObserver {
 public:
  virtual ~SessionObserver() = default;
  virtual void on_graph(const GraphSnapshot&) {}
  virtual void on_state(const SessionState&) {}
};

struct EvalOptions {
  bool use_context = true;
  std::size_t batch_size = 50;
  BpOptions bp;
};

// Fraction of `test` instances whose predicted class matches the truth. With
// context, each stream window of batch_size instances is inferred as one CRF
// and the marginal argmax is used; otherwise the classifier argmax.
double evaluate(const Dataset& dataset, std::span<const std::size_t> test,
                const MlrModel& classifier, const ContextModel& context,
                const EvalOptions& options);

// The streaming loop: initial fit on the first share of the training
// stream, then per batch build -> infer -> select -> strong labels ->
// condition and re-infer -> weak labels -> update models -> evaluate.
SessionState run_session(const Dataset& dataset, const SessionOptions& options, Teacher& teacher,
                         SessionObserver* observer = nullptr);

}  // namespace caqs::harness
