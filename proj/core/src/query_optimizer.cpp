#include "caqs/query_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "caqs/error.hpp"

namespace caqs {
namespace {

using Index = Eigen::Index;

// 1/2 u'Qu + f'u for the 0/1 vector with ones at `chosen` (ascending), plus
// the gamma K / 2 shift when requested. Every caller evaluates subsets through
// this function so equal sets produce bit-identical values.
double subset_objective(const BqpInstance& inst, std::span<const std::size_t> chosen,
                        bool shifted) {
  double value = 0.0;
  for (std::size_t a = 0; a < chosen.size(); ++a) {
    const auto i = static_cast<Index>(chosen[a]);
    value += inst.linear[i] + 0.5 * inst.quadratic(i, i);
    for (std::size_t b = a + 1; b < chosen.size(); ++b) {
      value += inst.quadratic(i, static_cast<Index>(chosen[b]));
    }
  }
  if (shifted) value += 0.5 * inst.gamma * static_cast<double>(chosen.size());
  return value;
}

std::vector<std::size_t> support(const Eigen::VectorXd& u) {
  std::vector<std::size_t> out;
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] == 1.0) {
      out.push_back(static_cast<std::size_t>(i));
    } else if (u[i] != 0.0) {
      throw InvalidInput("selection vector must be binary");
    }
  }
  return out;
}

double max_abs_row_sum(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Euclidean projection onto {0 <= x <= 1, sum x = r} by bisection on the shift.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& v, double r) {
  const Index n = v.size();
  if (r <= 0.0) return Eigen::VectorXd::Zero(n);
  if (r >= static_cast<double>(n)) return Eigen::VectorXd::Ones(n);
  double lo = v.minCoeff() - 1.0;  // sum(clip(v - lo)) = n
  double hi = v.maxCoeff();        // sum(clip(v - hi)) = 0
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double s = (v.array() - mid).cwiseMax(0.0).cwiseMin(1.0).sum();
    (s > r ? lo : hi) = mid;
  }
  return (v.array() - 0.5 * (lo + hi)).cwiseMax(0.0).cwiseMin(1.0).matrix();
}

// Linear minimization oracle over the capped simplex: ones at the r smallest
// gradient entries, lowest index on ties.
Eigen::VectorXd lmo(const Eigen::VectorXd& g, std::size_t r) {
  std::vector<Index> order(static_cast<std::size_t>(g.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return g[a] < g[b]; });
  Eigen::VectorXd s = Eigen::VectorXd::Zero(g.size());
  for (std::size_t k = 0; k < r; ++k) s[order[k]] = 1.0;
  return s;
}

// Fixed ones plus the r free coordinates with the largest relaxed values.
std::vector<std::size_t> round_solution(const Eigen::VectorXd& x, std::span<const Fix> fixed,
                                        std::size_t budget) {
  std::vector<std::size_t> chosen;
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (fixed[i] == Fix::one) chosen.push_back(i);
    if (fixed[i] == Fix::free) free.push_back(i);
  }
  std::stable_sort(free.begin(), free.end(), [&](std::size_t a, std::size_t b) {
    return x[static_cast<Index>(a)] > x[static_cast<Index>(b)];
  });
  const std::size_t r = budget - chosen.size();
  chosen.insert(chosen.end(), free.begin(), free.begin() + static_cast<std::ptrdiff_t>(r));
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// Best-improvement 1-swap descent over the free coordinates.
std::vector<std::size_t> swap_descent(const BqpInstance& inst, std::vector<std::size_t> chosen,
                                      std::span<const Fix> fixed) {
  const std::size_t n = inst.size();
  for (std::size_t pass = 0; pass < 4 * n; ++pass) {
    const Eigen::VectorXd u = indicator(n, chosen);
    const Eigen::VectorXd g = inst.quadratic * u + inst.linear;
    double best = -1e-12 * std::max(1.0, std::abs(subset_objective(inst, chosen, false)));
    std::size_t best_out = n;
    std::size_t best_in = n;
    for (std::size_t i : chosen) {
      if (fixed[i] != Fix::free) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (u[static_cast<Index>(j)] != 0.0 || fixed[j] != Fix::free) continue;
        const auto ii = static_cast<Index>(i);
        const auto jj = static_cast<Index>(j);
        const double delta = g[jj] - g[ii] +
                             0.5 * (inst.quadratic(ii, ii) + inst.quadratic(jj, jj)) -
                             inst.quadratic(ii, jj);
        if (delta < best) {
          best = delta;
          best_out = i;
          best_in = j;
        }
      }
    }
    if (best_out == n) break;
    std::replace(chosen.begin(), chosen.end(), best_out, best_in);
    std::sort(chosen.begin(), chosen.end());
  }
  return chosen;
}

struct Incumbent {
  std::vector<std::size_t> chosen;
  double value = std::numeric_limits<double>::infinity();

  double tolerance() const {
    return std::isfinite(value) ? 1e-12 * std::max(1.0, std::abs(value)) : 0.0;
  }

  void offer(std::vector<std::size_t> candidate, double candidate_value) {
    if (chosen.empty() || candidate_value < value - tolerance() ||
        (std::abs(candidate_value - value) <= tolerance() && candidate < chosen)) {
      chosen = std::move(candidate);
      value = candidate_value;
    }
  }
};

}  // namespace

Eigen::VectorXd indicator(std::size_t size, std::span<const std::size_t> chosen) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Index>(size));
  for (std::size_t i : chosen) {
    if (i >= size) throw InvalidInput("selection index out of range");
    u[static_cast<Index>(i)] = 1.0;
  }
  return u;
}

BqpInstance make_instance(const QueryProblem& problem) {
  validate(problem);
  BqpInstance inst;
  inst.quadratic = -problem.mutual_information;
  inst.linear = problem.mutual_information.rowwise().sum() - problem.entropy;
  inst.budget = problem.budget;
  return inst;
}

BqpInstance convexify(BqpInstance instance) {
  instance.gamma = max_abs_row_sum(instance.quadratic);
  return instance;
}

double shifted_objective(const BqpInstance& instance, const Eigen::VectorXd& u) {
  return 0.5 * u.dot(instance.quadratic * u) + 0.5 * instance.gamma * u.squaredNorm() +
         instance.linear.dot(u);
}

double objective(const QueryProblem& problem, const Eigen::VectorXd& u) {
  if (static_cast<std::size_t>(u.size()) != problem.size()) {
    throw InvalidInput("selection vector has the wrong length");
  }
  const std::vector<std::size_t> chosen = support(u);
  if (chosen.size() != problem.budget) {
    throw InvalidInput("selection must contain exactly K=" + std::to_string(problem.budget) +
                       " nodes");
  }
  return subset_objective(make_instance(problem), chosen, false);
}

double entropy_gain(const QueryProblem& problem, const Eigen::VectorXd& u) {
  const Eigen::MatrixXd& m = problem.mutual_information;
  return u.dot(problem.entropy) - u.dot(m.rowwise().sum()) + 0.5 * u.dot(m * u);
}

std::optional<Relaxation> solve_relaxation(const BqpInstance& inst, std::span<const Fix> fixed,
                                           const RelaxationOptions& options,
                                           const Eigen::VectorXd* warm_start) {
  const std::size_t n = inst.size();
  if (fixed.size() != n) throw InvalidInput("fixing vector has the wrong length");
  std::vector<Index> free;
  std::vector<Index> ones;
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed[i] == Fix::free) free.push_back(static_cast<Index>(i));
    if (fixed[i] == Fix::one) ones.push_back(static_cast<Index>(i));
  }
  if (ones.size() > inst.budget || ones.size() + free.size() < inst.budget) return std::nullopt;
  const std::size_t r = inst.budget - ones.size();
  const auto nf = static_cast<Index>(free.size());

  // Restrict 1/2 x'Ax + c'x + const to the free coordinates.
  Eigen::MatrixXd a(nf, nf);
  Eigen::VectorXd c(nf);
  for (Index p = 0; p < nf; ++p) {
    for (Index s = 0; s < nf; ++s) a(p, s) = inst.quadratic(free[p], free[s]);
    a(p, p) += inst.gamma;
    double lin = inst.linear[free[p]];
    for (Index o : ones) lin += inst.quadratic(free[p], o);
    c[p] = lin;
  }
  double constant = 0.0;
  for (std::size_t x = 0; x < ones.size(); ++x) {
    constant += inst.linear[ones[x]] + 0.5 * (inst.quadratic(ones[x], ones[x]) + inst.gamma);
    for (std::size_t y = x + 1; y < ones.size(); ++y) {
      constant += inst.quadratic(ones[x], ones[y]);
    }
  }

  auto value_of = [&](const Eigen::VectorXd& x) { return 0.5 * x.dot(a * x) + c.dot(x); };
  auto lift = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Index>(n));
    for (Index o : ones) u[o] = 1.0;
    for (Index p = 0; p < nf; ++p) u[free[p]] = x[p];
    return u;
  };

  Relaxation out;
  if (nf == 0) {
    out.lower_bound = out.value = constant;
    out.solution = lift(Eigen::VectorXd());
    return out;
  }

  const double lipschitz = max_abs_row_sum(a);
  if (!(lipschitz > 0.0)) {
    // Linear objective: the oracle vertex is optimal.
    const Eigen::VectorXd s = lmo(c, r);
    out.lower_bound = out.value = constant + c.dot(s);
    out.solution = lift(s);
    return out;
  }

  Eigen::VectorXd x(nf);
  if (warm_start && static_cast<std::size_t>(warm_start->size()) == n) {
    for (Index p = 0; p < nf; ++p) x[p] = (*warm_start)[free[p]];
    x = project_capped_simplex(x, static_cast<double>(r));
  } else {
    x = Eigen::VectorXd::Constant(nf, static_cast<double>(r) / static_cast<double>(nf));
  }

  // FISTA with function-value restarts; every iterate is certified by the
  // Frank-Wolfe gap, so the bound stays valid however early we stop.
  double fx = value_of(x);
  double best_bound = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd y = x;
  double t = 1.0;
  const double step = 1.0 / lipschitz;
  for (std::size_t it = 0; it < options.max_iters; ++it) {
    const Eigen::VectorXd gx = a * x + c;
    const double gap = gx.dot(x - lmo(gx, r));
    best_bound = std::max(best_bound, fx - gap);
    out.iterations = it;
    if (gap <= options.gap_tol * std::max(1.0, std::abs(fx))) break;
    if (constant + best_bound >= options.cutoff) break;

    const Eigen::VectorXd gy = a * y + c;
    Eigen::VectorXd next = project_capped_simplex(y - step * gy, static_cast<double>(r));
    const double fnext = value_of(next);
    if (fnext > fx) {
      y = x;
      t = 1.0;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - x);
    x = std::move(next);
    fx = fnext;
    t = t_next;
  }
  out.value = constant + fx;
  out.lower_bound = constant + std::min(best_bound, fx);
  out.solution = lift(x);
  return out;
}

double pairwise_bound(const BqpInstance& inst, std::span<const Fix> fixed) {
  const std::size_t n = inst.size();
  if (fixed.size() != n) throw InvalidInput("fixing vector has the wrong length");
  std::vector<Index> free;
  std::vector<Index> ones;
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed[i] == Fix::free) free.push_back(static_cast<Index>(i));
    if (fixed[i] == Fix::one) ones.push_back(static_cast<Index>(i));
  }
  if (ones.size() > inst.budget || ones.size() + free.size() < inst.budget) {
    return -std::numeric_limits<double>::infinity();
  }
  const std::size_t r = inst.budget - ones.size();
  double bound = 0.0;
  for (std::size_t x = 0; x < ones.size(); ++x) {
    bound += inst.linear[ones[x]] + 0.5 * inst.quadratic(ones[x], ones[x]);
    for (std::size_t y = x + 1; y < ones.size(); ++y) bound += inst.quadratic(ones[x], ones[y]);
  }
  if (r == 0) return bound;

  std::vector<double> charge;
  charge.reserve(free.size());
  std::vector<double> row;
  for (Index i : free) {
    double w = inst.linear[i] + 0.5 * inst.quadratic(i, i);
    for (Index o : ones) w += inst.quadratic(i, o);
    row.clear();
    for (Index j : free) {
      if (j != i) row.push_back(inst.quadratic(i, j));
    }
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(r - 1), row.end());
    for (std::size_t k = 0; k + 1 < r; ++k) w += 0.5 * row[k];
    charge.push_back(w);
  }
  std::nth_element(charge.begin(), charge.begin() + static_cast<std::ptrdiff_t>(r - 1), charge.end());
  for (std::size_t k = 0; k < r; ++k) bound += charge[k];
  return bound;
}

Selection select_batch(const QueryProblem& problem, const BranchAndBoundOptions& options) {
  const BqpInstance inst = convexify(make_instance(problem));
  const std::size_t n = inst.size();
  const std::size_t k = inst.budget;

  struct Node {
    std::vector<Fix> fixed;
    Relaxation relaxation;
  };

  Selection sel;
  sel.certified_optimal = true;
  Incumbent incumbent;
  auto consider = [&](const Eigen::VectorXd& x, const std::vector<Fix>& fixed) {
    std::vector<std::size_t> chosen = swap_descent(inst, round_solution(x, fixed, k), fixed);
    const double v = subset_objective(inst, chosen, true);
    incumbent.offer(std::move(chosen), v);
  };

  const double shift = 0.5 * inst.gamma * static_cast<double>(k);
  // Relaxation of one fixing, tightened by the pairwise bound; nullopt when
  // the fixing is infeasible or already prunable without solving.
  auto bound_node = [&](const std::vector<Fix>& fixed,
                        const Eigen::VectorXd* warm) -> std::optional<Relaxation> {
    const double pair = pairwise_bound(inst, fixed);
    if (pair == -std::numeric_limits<double>::infinity()) return std::nullopt;
    if (!incumbent.chosen.empty() && pair + shift >= incumbent.value - incumbent.tolerance()) {
      return std::nullopt;
    }
    RelaxationOptions relax = options.relaxation;
    if (!incumbent.chosen.empty()) {
      relax.cutoff = std::min(relax.cutoff, incumbent.value - incumbent.tolerance());
    }
    std::optional<Relaxation> rel = solve_relaxation(inst, fixed, relax, warm);
    if (rel) rel->lower_bound = std::max(rel->lower_bound, pair + shift);
    return rel;
  };

  std::vector<Fix> root_fix(n, Fix::free);
  std::optional<Relaxation> root = bound_node(root_fix, nullptr);
  sel.nodes_explored = 1;
  if (!root) throw InvalidInput("budget exceeds problem size");
  consider(root->solution, root_fix);

  std::vector<Node> stack;
  stack.push_back({std::move(root_fix), std::move(*root)});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.relaxation.lower_bound >= incumbent.value - incumbent.tolerance()) continue;

    // Most fractional free coordinate, lowest index on ties.
    std::size_t branch = n;
    double best_frac = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (node.fixed[i] != Fix::free) continue;
      const double xi = node.relaxation.solution[static_cast<Index>(i)];
      const double frac = std::min(xi, 1.0 - xi);
      if (frac > best_frac) {
        best_frac = frac;
        branch = i;
      }
    }
    if (branch == n) continue;  // fully fixed; already offered when solved

    std::vector<Node> children;
    for (Fix value : {Fix::one, Fix::zero}) {
      if (sel.nodes_explored >= options.node_limit) {
        sel.certified_optimal = false;
        break;
      }
      std::vector<Fix> fixed = node.fixed;
      fixed[branch] = value;
      std::optional<Relaxation> rel = bound_node(fixed, &node.relaxation.solution);
      ++sel.nodes_explored;
      if (!rel) continue;
      consider(rel->solution, fixed);
      if (rel->lower_bound < incumbent.value - incumbent.tolerance()) {
        children.push_back({std::move(fixed), std::move(*rel)});
      }
    }
    if (!sel.certified_optimal) break;
    // Depth first; the child with the smaller bound is explored first.
    std::sort(children.begin(), children.end(), [](const Node& a, const Node& b) {
      return a.relaxation.lower_bound > b.relaxation.lower_bound;
    });
    for (Node& child : children) stack.push_back(std::move(child));
  }

  sel.chosen = incumbent.chosen;
  sel.objective_value = subset_objective(inst, sel.chosen, false);
  return sel;
}

Selection brute_force_select(const QueryProblem& problem, std::size_t max_subsets) {
  const BqpInstance inst = make_instance(problem);
  const std::size_t n = inst.size();
  const std::size_t k = inst.budget;
  double count = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    count = count * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  if (count > static_cast<double>(max_subsets) + 0.5) {
    throw InvalidInput("C(" + std::to_string(n) + ", " + std::to_string(k) +
                       ") subsets exceed the enumeration budget");
  }

  Selection sel;
  std::vector<std::size_t> current(k);
  std::iota(current.begin(), current.end(), std::size_t{0});
  Incumbent best;
  while (true) {
    best.offer(current, subset_objective(inst, current, false));
    ++sel.nodes_explored;
    // Next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && current[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++current[pos - 1];
    for (std::size_t j = pos; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  sel.chosen = best.chosen;
  sel.objective_value = best.value;
  sel.certified_optimal = true;
  return sel;
}

Selection top_entropy_select(const QueryProblem& problem) {
  const BqpInstance inst = make_instance(problem);
  std::vector<std::size_t> order(problem.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return problem.entropy[static_cast<Index>(a)] > problem.entropy[static_cast<Index>(b)];
  });
  Selection sel;
  sel.chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(problem.budget));
  std::sort(sel.chosen.begin(), sel.chosen.end());
  sel.objective_value = subset_objective(inst, sel.chosen, false);
  sel.nodes_explored = 0;
  return sel;
}

}  // namespace caqs
