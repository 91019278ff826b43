#include <random>

#include <benchmark/benchmark.h>

#include "caqs/graph_model.hpp"
#include "caqs/inference.hpp"
#include "caqs/info_metrics.hpp"
#include "caqs/query_optimizer.hpp"

namespace {

caqs::QueryProblem random_problem(std::size_t n, std::size_t k, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  caqs::QueryProblem p;
  p.entropy = Eigen::VectorXd(static_cast<Eigen::Index>(n));
  p.mutual_information = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) p.entropy(static_cast<Eigen::Index>(i)) = 2.0 * unit(rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (unit(rng) < density) {
        const double m = 0.3 * unit(rng);
        p.mutual_information(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m;
        p.mutual_information(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = m;
      }
  p.budget = k;
  for (std::size_t i = 0; i < n; ++i) p.ids.push_back(std::to_string(i));
  return p;
}

// Activity chain with q states and one random pairwise table per edge.
caqs::CrfGraph random_loopy_graph(std::size_t n, std::size_t q, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<caqs::GraphNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].instance_id = "n" + std::to_string(1000 + i);
    nodes[i].potential = Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(q), [&] { return unit(rng); });
    nodes[i].potential /= nodes[i].potential.sum();
  }
  std::vector<caqs::EdgeRecord> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < std::min(n, i + 4); ++j) {
      caqs::EdgeRecord e;
      e.first = i;
      e.second = j;
      e.potential = Eigen::MatrixXd::NullaryExpr(static_cast<Eigen::Index>(q),
                                                 static_cast<Eigen::Index>(q), [&] { return unit(rng); });
      edges.push_back(std::move(e));
    }
  return caqs::CrfGraph(q, std::move(nodes), std::move(edges));
}

void BM_SelectBatch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto problem = random_problem(n, k, 0.15, 7);
  for (auto _ : state) benchmark::DoNotOptimize(caqs::select_batch(problem));
}
BENCHMARK(BM_SelectBatch)->Args({12, 4})->Args({30, 10})->Args({50, 5})->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const auto problem = random_problem(static_cast<std::size_t>(state.range(0)), 4, 0.3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(caqs::brute_force_select(problem));
}
BENCHMARK(BM_BruteForce)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_LoopyBp(benchmark::State& state) {
  const auto graph = random_loopy_graph(static_cast<std::size_t>(state.range(0)), 8, 3);
  for (auto _ : state) benchmark::DoNotOptimize(caqs::infer(graph));
}
BENCHMARK(BM_LoopyBp)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
