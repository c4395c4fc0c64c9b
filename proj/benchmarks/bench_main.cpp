#include <benchmark/benchmark.h>

#include "qsearch/experiment.hpp"
#include "qsearch/graph.hpp"
#include "qsearch/solver.hpp"
#include "qsearch/strategies.hpp"

using namespace qsearch;

static void BM_BfsRow(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = sample_connected_gnp({n, 0.1, 1});
  Vertex s = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bfs_distances(g, s));
    s = (s + 1) % static_cast<Vertex>(n);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_BfsRow)->Arg(500)->Arg(2000);

static void BM_Diameter(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Graph g = sample_connected_gnp({n, 0.1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(diameter(g));
}
BENCHMARK(BM_Diameter)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_SolvePath16(benchmark::State& state) {
  const Graph g = make_path(16);
  const auto kind = state.range(0) == 0 ? QueryKind::Pair : QueryKind::Edge;
  for (auto _ : state) benchmark::DoNotOptimize(game_value(g, kind).value);
}
BENCHMARK(BM_SolvePath16)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SolveComplete8(benchmark::State& state) {
  const Graph g = make_complete(8);
  for (auto _ : state) benchmark::DoNotOptimize(game_value(g, QueryKind::Pair).value);
}
BENCHMARK(BM_SolveComplete8)->Unit(benchmark::kMillisecond);

static void BM_PhasePairPlayout(benchmark::State& state) {
  const Graph g = sample_connected_gnp({2000, 0.102, 3});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    TrialSpec spec;
    spec.algorithm = "phase-pair";
    spec.strategy.seed = seed++;
    spec.strategy.p = 0.102;
    benchmark::DoNotOptimize(run_trial(g, spec).rounds);
  }
}
BENCHMARK(BM_PhasePairPlayout)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
