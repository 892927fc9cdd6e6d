// Serial vs OpenMP timings for the hot kernels.

#include <benchmark/benchmark.h>

#include <map>

#include "ofl/harness.hpp"
#include "ofl/kernels.hpp"
#include "ofl/offline.hpp"
#include "ofl/online.hpp"

using namespace ofl;
using kernels::Exec;

namespace {

const std::vector<Location>& points(std::size_t n) {
  static std::map<std::size_t, std::vector<Location>> cache;
  auto& v = cache[n];
  if (v.empty()) v = harness::synth_uniform(n, 1e6, 1);
  return v;
}

Exec exec_of(const benchmark::State& s) { return s.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_Pairwise(benchmark::State& state) {
  const auto& pts = points(static_cast<std::size_t>(state.range(0)));
  const auto space = MetricSpace::euclidean(2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::pairwise_distances(space, pts, exec_of(state)));
}

void BM_BestSubset(benchmark::State& state) {
  const auto& pts = points(static_cast<std::size_t>(state.range(0)));
  const auto dm = kernels::pairwise_distances(MetricSpace::euclidean(2), pts, Exec::Serial);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::best_subset(dm, 1e5, exec_of(state)));
}

void BM_EvaluateMoves(benchmark::State& state) {
  const auto& pts = points(static_cast<std::size_t>(state.range(0)));
  const auto dm = kernels::pairwise_distances(MetricSpace::euclidean(2), pts, Exec::Serial);
  std::vector<std::size_t> centers;
  for (std::size_t c = 0; c < 20; ++c) centers.push_back(c * 7);
  std::vector<std::size_t> cand(dm.n);
  for (std::size_t j = 0; j < dm.n; ++j) cand[j] = j;
  const auto cache = kernels::build_center_cache(dm, centers, Exec::Serial);
  for (auto _ : state)
    benchmark::DoNotOptimize(kernels::evaluate_moves(dm, centers, cand, cache, 1e5, exec_of(state)));
}

void BM_LocalSearch(benchmark::State& state) {
  Instance inst{MetricSpace::euclidean(2), points(static_cast<std::size_t>(state.range(0))), 1e5};
  for (auto _ : state) {
    LocalSearchOptions o;
    o.exec = exec_of(state);
    benchmark::DoNotOptimize(solve_local_search(inst, o));
  }
}

void BM_Trials(benchmark::State& state) {
  Instance inst{MetricSpace::euclidean(2), points(1000), 1e5};
  std::vector<double> totals(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    kernels::for_each_index(totals.size(), exec_of(state), [&](std::size_t t) {
      totals[t] = run(Algorithm::Meyerson, inst, {}, t, {false}).total;
    });
    benchmark::DoNotOptimize(totals.data());
  }
}

}  // namespace

BENCHMARK(BM_Pairwise)->ArgsProduct({{1000, 4000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BestSubset)->ArgsProduct({{16, 20}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateMoves)->ArgsProduct({{1000, 4000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalSearch)->ArgsProduct({{500, 1000}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trials)->ArgsProduct({{64}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
