// Serial reference vs OpenMP kernels. Pass --benchmark_filter to narrow.

#include <benchmark/benchmark.h>

#include "trunctail/distributions.hpp"
#include "trunctail/fit_path.hpp"
#include "trunctail/montecarlo.hpp"
#include "trunctail/qq.hpp"

using namespace trunctail;

namespace {

SortedSample bench_sample(std::size_t n) {
  Rng rng(2024);
  return sample(TruncatedModel::at_level(ParetoModel(0.5), 0.99), n, rng);
}

SimConfig bench_config() {
  SimConfig c;
  c.model = TruncatedModel::at_level(BurrModel(2.0, -1.0), 0.99);
  c.runs = 50;
  return c;
}

void BM_FitPathSerial(benchmark::State& state) {
  const auto s = bench_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_path_serial(s, 1, s.size() - 1, 0.002));
}

void BM_FitPathParallel(benchmark::State& state) {
  const auto s = bench_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_path(s, 1, s.size() - 1, 0.002));
}

void BM_KStarSerial(benchmark::State& state) {
  const auto s = bench_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(select_k_star_serial(s));
}

void BM_KStarParallel(benchmark::State& state) {
  const auto s = bench_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(select_k_star(s));
}

void BM_SimulationSerial(benchmark::State& state) {
  const auto c = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation_serial(c));
}

void BM_SimulationParallel(benchmark::State& state) {
  const auto c = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_simulation(c));
}

}  // namespace

BENCHMARK(BM_FitPathSerial)->Arg(400)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitPathParallel)->Arg(400)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KStarSerial)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KStarParallel)->Arg(400)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulationSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulationParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
