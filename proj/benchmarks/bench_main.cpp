#include <benchmark/benchmark.h>

#include "strucimp/features.hpp"
#include "strucimp/generators.hpp"
#include "strucimp/importance.hpp"
#include "strucimp/netstats.hpp"
#include "strucimp/rng.hpp"
#include "strucimp/spectral.hpp"

using namespace strucimp;

namespace {

// Sparse random weighted graph with expected degree ~8.
Snapshot random_snapshot(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  std::vector<Edge> edges;
  const double p = std::min(1.0, 8.0 / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.push_back({i, j, 0.5 + rng.uniform()});
  return Snapshot(ids, std::move(edges), false);
}

void BM_EigSym(benchmark::State& state) {
  const WeightedMatrix a = adjacency(random_snapshot(static_cast<std::size_t>(state.range(0)), 1));
  for (auto _ : state) benchmark::DoNotOptimize(eig_sym(a));
}
BENCHMARK(BM_EigSym)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_ImportanceMb(benchmark::State& state) {
  const Snapshot s = random_snapshot(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(node_importance(s, Scheme::Mb));
}
BENCHMARK(BM_ImportanceMb)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_PageRank(benchmark::State& state) {
  const Snapshot s = random_snapshot(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(pagerank(s));
}
BENCHMARK(BM_PageRank)->Arg(100)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_Communities(benchmark::State& state) {
  const Snapshot s = random_snapshot(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(detect_communities(s));
}
BENCHMARK(BM_Communities)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SnapshotMeasures(benchmark::State& state) {
  SyntheticConfig cfg;
  const TemporalNetwork tn = gen_synthetic_temporal(cfg, 5);
  for (auto _ : state) benchmark::DoNotOptimize(compute_measures(tn[0]));
}
BENCHMARK(BM_SnapshotMeasures)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
