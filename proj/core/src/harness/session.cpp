#include "caqs/harness/session.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "caqs/error.hpp"
#include "caqs/info_metrics.hpp"
#include "caqs/structure.hpp"

namespace caqs::harness {
namespace {

bool related_pair(const ActivityInstance& a, const ActivityInstance& b) {
  if (a.group && b.group) return *a.group == *b.group;
  return a.true_label && b.true_label && *a.true_label == *b.true_label;
}

Eigen::MatrixXd true_adjacency(std::span<const ActivityInstance> batch) {
  const auto n = static_cast<Eigen::Index>(batch.size());
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u)
    for (Eigen::Index v = u + 1; v < n; ++v)
      if (related_pair(batch[u], batch[v])) adj(u, v) = adj(v, u) = 1.0;
  return adj;
}

class LinkPool {
 public:
  explicit LinkPool(std::size_t capacity) : capacity_(capacity) {}

  void add_pairs(const std::vector<const ActivityInstance*>& labeled) {
    for (std::size_t i = 0; i < labeled.size(); ++i)
      for (std::size_t j = i + 1; j < labeled.size(); ++j) {
        samples_.push_back({link_distance(*labeled[i], *labeled[j]),
                            related_pair(*labeled[i], *labeled[j])});
        if (samples_.size() > capacity_) samples_.pop_front();
      }
  }

  // Keeps the previous predictor while the pool holds a single class.
  void refit(LinkPredictor& predictor) const {
    const bool any_related = std::any_of(samples_.begin(), samples_.end(),
                                         [](const LinkSample& s) { return s.related; });
    const bool any_unrelated = std::any_of(samples_.begin(), samples_.end(),
                                           [](const LinkSample& s) { return !s.related; });
    if (!any_related || !any_unrelated) return;
    std::vector<LinkSample> all(samples_.begin(), samples_.end());
    predictor = fit_links(all);
  }

 private:
  std::size_t capacity_;
  std::deque<LinkSample> samples_;
};

std::vector<ActivityInstance> sorted_batch(const Dataset& ds, std::span<const std::size_t> idx) {
  std::vector<ActivityInstance> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(ds.instances[i]);
  std::stable_sort(out.begin(), out.end(),
                   [](const ActivityInstance& a, const ActivityInstance& b) { return a.id < b.id; });
  return out;
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::size_t true_label(const ActivityInstance& inst) {
  if (!inst.true_label) throw InvalidInput("instance " + inst.id + " has no label");
  return *inst.true_label;
}

}  // namespace

StrategyKind parse_strategy(std::string_view name) {
  if (name == "caqs") return StrategyKind::caqs;
  if (name == "caqs_no_context") return StrategyKind::caqs_no_context;
  if (name == "random") return StrategyKind::random;
  if (name == "entropy_topk" || name == "entropy") return StrategyKind::entropy_topk;
  if (name == "brute_force_oracle") return StrategyKind::brute_force_oracle;
  throw InvalidInput("unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(StrategyKind strategy) {
  switch (strategy) {
    case StrategyKind::caqs: return "caqs";
    case StrategyKind::caqs_no_context: return "caqs_no_context";
    case StrategyKind::random: return "random";
    case StrategyKind::entropy_topk: return "entropy_topk";
    case StrategyKind::brute_force_oracle: return "brute_force_oracle";
  }
  return "unknown";
}

SessionOptions session_options(const Config& config) {
  SessionOptions o;
  o.strategy = parse_strategy(config.get_string("strategy", std::string(to_string(o.strategy))));
  o.teacher.mode = parse_teacher_mode(config.get_string("mode", std::string(to_string(o.teacher.mode))));
  o.teacher.delta = config.get_double("delta", o.teacher.delta);
  o.teacher.budget = config.get_size("K", o.teacher.budget);
  if (config.has("k")) {
    if (config.has("K")) throw InvalidInput("config sets both K and k");
    o.budget_fraction = config.get_double("k", 0.0);
  }
  o.batch_size = config.get_size("batch", o.batch_size);
  o.initial_fraction = config.get_double("initial_fraction", o.initial_fraction);
  o.random_initial = config.get_bool("initial_random", o.random_initial);
  o.initial_epochs = config.get_size("initial_epochs", o.initial_epochs);
  o.initial_alpha = config.get_double("initial_alpha", o.initial_alpha);
  o.lambda = config.get_double("lambda", o.lambda);
  o.alpha = config.get_double("alpha", o.alpha);
  o.alpha_decay = config.get_double("alpha_decay", o.alpha_decay);
  o.epochs = config.get_size("epochs", o.epochs);
  o.buffer = config.get_size("buffer", o.buffer);
  o.person_bins = config.get_size("bins", o.person_bins);
  o.link_pool = config.get_size("link_pool", o.link_pool);
  const std::string labels = config.get_string("context_labels", "all");
  if (labels == "all") o.context_labels = ContextLabels::all;
  else if (labels == "taught") o.context_labels = ContextLabels::taught;
  else if (labels == "strong") o.context_labels = ContextLabels::strong;
  else throw InvalidInput("context_labels must be all, taught or strong");
  o.bp.damping = config.get_double("damping", o.bp.damping);
  o.bp.tol = config.get_double("bp_tol", o.bp.tol);
  o.bp.max_iters = config.get_size("bp_iters", o.bp.max_iters);
  o.branch_and_bound.node_limit = config.get_size("node_limit", o.branch_and_bound.node_limit);
  o.seed = config.get_size("seed", o.seed);
  return o;
}

OracleTeacher::OracleTeacher(const Dataset& dataset) {
  for (const auto& inst : dataset.instances)
    if (inst.true_label) truth_.emplace(inst.id, *inst.true_label);
}

std::optional<LabelMap> OracleTeacher::answer(const QueryBatch& batch) {
  LabelMap out;
  for (const auto& item : batch.items) {
    auto it = truth_.find(item.id);
    if (it == truth_.end()) throw InvalidInput("oracle has no label for " + item.id);
    out.emplace(item.id, it->second);
  }
  return out;
}

double evaluate(const Dataset& dataset, std::span<const std::size_t> test,
                const MlrModel& classifier, const ContextModel& context,
                const EvalOptions& options) {
  if (test.empty()) throw InvalidInput("test split is empty");
  if (options.batch_size == 0) throw InvalidInput("batch size must be positive");
  std::size_t correct = 0;
  for (std::size_t start = 0; start < test.size(); start += options.batch_size) {
    const auto window = test.subspan(start, std::min(options.batch_size, test.size() - start));
    const auto batch = sorted_batch(dataset, window);
    if (options.use_context) {
      const CrfGraph graph = build_graph(batch, classifier, context);
      const MarginalSet marginals = infer(graph, options.bp);
      for (std::size_t i = 0; i < graph.activity_count(); ++i)
        if (argmax(marginals.nodes[i]) == true_label(batch[i])) ++correct;
    } else {
      for (const auto& inst : batch)
        if (argmax(classify(classifier, inst.features)) == true_label(inst)) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

SessionState run_session(const Dataset& dataset, const SessionOptions& options, Teacher& teacher,
                         SessionObserver* observer) {
  validate(dataset);
  validate(options.teacher);
  if (options.batch_size == 0) throw InvalidInput("batch size must be positive");
  if (!(options.initial_fraction > 0.0 && options.initial_fraction <= 1.0))
    throw InvalidInput("initial_fraction must be in (0, 1]");
  if (options.budget_fraction && !(*options.budget_fraction > 0.0 && *options.budget_fraction <= 1.0))
    throw InvalidInput("k must be in (0, 1]");
  if (dataset.train.empty()) throw InvalidInput("training split is empty");
  if (dataset.test.empty()) throw InvalidInput("test split is empty");

  const std::size_t q = dataset.class_count();
  const std::size_t d = dataset.feature_dim();
  const bool use_context = options.strategy != StrategyKind::caqs_no_context;
  std::mt19937_64 rng(options.seed);

  // Initial manually labeled share of the training stream.
  const std::size_t train_n = dataset.train.size();
  const std::size_t initial_n = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(options.initial_fraction * static_cast<double>(train_n))),
      1, train_n);
  std::vector<std::size_t> initial;
  std::vector<std::size_t> stream;
  if (options.random_initial) {
    std::vector<bool> pick(train_n, false);
    for (std::size_t p : random_subset(train_n, initial_n, rng)) pick[p] = true;
    for (std::size_t p = 0; p < train_n; ++p) (pick[p] ? initial : stream).push_back(dataset.train[p]);
  } else {
    initial.assign(dataset.train.begin(), dataset.train.begin() + static_cast<std::ptrdiff_t>(initial_n));
    stream.assign(dataset.train.begin() + static_cast<std::ptrdiff_t>(initial_n), dataset.train.end());
  }

  SessionState state;
  state.train_size = train_n;
  state.classifier = MlrModel::zeros(q, d);
  state.classifier.lambda = options.lambda;
  state.classifier.alpha = options.alpha;
  state.classifier.alpha_decay = options.alpha_decay;
  state.classifier.epochs = options.epochs;
  state.classifier.buffer_capacity = options.buffer;

  std::vector<LabeledExample> seed_examples;
  for (std::size_t i : initial)
    seed_examples.push_back({dataset.instances[i].features, true_label(dataset.instances[i])});
  gradient_descent(state.classifier, seed_examples, options.initial_epochs, options.initial_alpha);

  std::vector<BinningScheme> binnings;
  for (std::size_t a = 0; a < dataset.attributes.size(); ++a) {
    const auto& schema = dataset.attributes[a];
    if (schema.kind != AttributeKind::person) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i : initial)
      for (const auto& obs : dataset.instances[i].context)
        if (obs.attribute == a && obs.value) {
          lo = std::min(lo, *obs.value);
          hi = std::max(hi, *obs.value);
        }
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    binnings.push_back(BinningScheme::equal_width(lo, hi, schema.dim ? schema.dim : options.person_bins));
  }
  state.context = make_context_model(q, dataset.attributes, binnings);

  LinkPool pool(options.link_pool);
  for (std::size_t start = 0; start < initial.size(); start += options.batch_size) {
    const auto window = std::span<const std::size_t>(initial).subspan(
        start, std::min(options.batch_size, initial.size() - start));
    const auto batch = sorted_batch(dataset, window);
    ContextEvidence evidence;
    evidence.instances = batch;
    for (const auto& inst : batch) evidence.labels.emplace_back(true_label(inst));
    evidence.adjacency = true_adjacency(batch);
    state.context = update_context(std::move(state.context), evidence);
    std::vector<const ActivityInstance*> labeled;
    for (const auto& inst : batch) labeled.push_back(&inst);
    pool.add_pairs(labeled);
  }
  pool.refit(state.context.link);

  const EvalOptions eval{use_context, options.batch_size, options.bp};
  state.labeled_manual = initial_n;
  state.curve.push_back({0, state.labeled_manual, 0,
                         evaluate(dataset, dataset.test, state.classifier, state.context, eval)});
  if (observer) observer->on_state(state);

  GraphOptions graph_options;
  graph_options.activity_edges = use_context;
  graph_options.context_nodes = use_context;

  for (std::size_t start = 0; start < stream.size(); start += options.batch_size) {
    const auto window = std::span<const std::size_t>(stream).subspan(
        start, std::min(options.batch_size, stream.size() - start));
    const auto batch = sorted_batch(dataset, window);
    const std::size_t n = batch.size();
    const std::size_t round = state.round + 1;

    const CrfGraph graph = build_graph(batch, state.classifier, state.context, graph_options);
    const MarginalSet marginals = infer(graph, options.bp);
    const std::size_t budget =
        options.budget_fraction
            ? std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(
                                          *options.budget_fraction * static_cast<double>(n))),
                                      1, n)
            : std::clamp<std::size_t>(options.teacher.budget, 1, n);
    const QueryProblem problem = build_query_problem(graph, marginals, budget);

    std::vector<std::size_t> chosen;
    if (options.teacher.mode == TeacherMode::all_instances) {
      chosen.resize(n);
      std::iota(chosen.begin(), chosen.end(), std::size_t{0});
    } else if (options.teacher.uses_strong()) {
      switch (options.strategy) {
        case StrategyKind::caqs:
        case StrategyKind::caqs_no_context: {
          Selection s = select_batch(problem, options.branch_and_bound);
          state.bb_nodes += s.nodes_explored;
          chosen = std::move(s.chosen);
          break;
        }
        case StrategyKind::brute_force_oracle:
          chosen = brute_force_select(problem).chosen;
          break;
        case StrategyKind::entropy_topk:
          chosen = top_entropy_select(problem).chosen;
          break;
        case StrategyKind::random:
          chosen = random_subset(n, budget, rng);
          break;
      }
    }

    QueryBatch query{round, {}};
    for (std::size_t i : chosen) {
      QueryItem item;
      item.id = problem.ids[i];
      item.pmf = marginals.nodes[i];
      item.entropy = problem.entropy(static_cast<Eigen::Index>(i));
      for (std::size_t j = 0; j < n; ++j) {
        const double mi = problem.mutual_information(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(j));
        if (j != i && mi > 0.0) item.neighbors.emplace_back(problem.ids[j], mi);
      }
      std::stable_sort(item.neighbors.begin(), item.neighbors.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      query.items.push_back(std::move(item));
    }
    state.pending_queries = query.items;
    if (observer) {
      observer->on_graph({round, false, graph, marginals});
      observer->on_state(state);
    }

    LabelMap strong;
    if (!chosen.empty()) {
      auto reply = teacher.answer(query);
      if (!reply) {
        ++state.aborted_rounds;
        state.pending_queries.clear();
        if (observer) observer->on_state(state);
        continue;
      }
      for (const auto& item : query.items) {
        auto it = reply->find(item.id);
        if (it == reply->end()) throw InvalidInput("teacher did not label " + item.id);
        if (it->second >= q) throw InvalidInput("teacher label out of range for " + item.id);
        strong.emplace(item.id, it->second);
      }
    }

    const CrfGraph conditioned = condition(graph, strong);
    const MarginalSet posterior = strong.empty() ? marginals : infer(conditioned, options.bp);
    const LabelMap weak = options.teacher.uses_weak()
                              ? weak_teacher(conditioned, posterior, options.teacher.delta)
                              : LabelMap{};

    std::vector<LabeledExample> examples;
    ContextEvidence evidence;
    evidence.instances = batch;
    std::vector<const ActivityInstance*> labeled;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& id = batch[i].id;
      std::optional<std::size_t> label;
      if (auto it = strong.find(id); it != strong.end()) {
        label = it->second;
        labeled.push_back(&batch[i]);
      } else if (auto w = weak.find(id); w != weak.end()) {
        label = w->second;
      }
      if (label) examples.push_back({batch[i].features, *label});
      if (options.context_labels == ContextLabels::all)
        evidence.labels.emplace_back(argmax(posterior.nodes[i]));
      else if (options.context_labels == ContextLabels::taught)
        evidence.labels.push_back(label);
      else
        evidence.labels.push_back(strong.count(id) ? label : std::nullopt);
    }
    evidence.adjacency = conditioned.activity_adjacency();
    if (use_context) {
      evidence.observation_values.resize(n);
      for (std::size_t v = graph.activity_count(); v < graph.node_count(); ++v) {
        const GraphNode& node = graph.node(v);
        const std::size_t owner = *graph.find_activity(node.instance_id);
        auto& values = evidence.observation_values[owner];
        if (state.context.attributes[node.attribute].schema.kind == AttributeKind::object)
          values.emplace_back(argmax(posterior.nodes[v]));
        else
          values.emplace_back(std::nullopt);
      }
    }

    state.classifier = incremental_update(std::move(state.classifier), examples);
    state.context = update_context(std::move(state.context), evidence);
    pool.add_pairs(labeled);
    pool.refit(state.context.link);

    state.round = round;
    state.labeled_manual += strong.size();
    state.labeled_weak += weak.size();
    state.queried.emplace_back();
    for (std::size_t i : chosen) state.queried.back().push_back(problem.ids[i]);
    state.pending_queries.clear();
    state.curve.push_back({round, state.labeled_manual, state.labeled_weak,
                           evaluate(dataset, dataset.test, state.classifier, state.context, eval)});
    if (observer) {
      observer->on_graph({round, true, conditioned, posterior});
      observer->on_state(state);
    }
  }

  state.finished = true;
  if (observer) observer->on_state(state);
  return state;
}

}  // namespace caqs::harness
