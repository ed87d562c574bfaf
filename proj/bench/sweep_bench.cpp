#include <benchmark/benchmark.h>

#include "pricesim/config.hpp"
#include "pricesim/market.hpp"
#include "pricesim/random.hpp"
#include "pricesim/sweep.hpp"

namespace {

using namespace pricesim;

ExperimentConfig bench_config() {
  ExperimentConfig cfg;
  cfg.experiment_id = "bench";
  cfg.families = {ValuationDistribution::uniform(), ValuationDistribution::beta_a1(2.0)};
  cfg.m_grid = {100, 200, 400, 800};
  cfg.alpha_grid = {0.0, 0.5};
  cfg.n_runs = 8;
  cfg.master_seed = 11;
  return cfg;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(sweep_size(cfg)));
}
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);

void BM_SweepParallel(benchmark::State& state) {
  const auto cfg = bench_config();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg, threads));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(sweep_size(cfg)));
}
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Engine(benchmark::State& state, Engine engine) {
  auto cfg = MarketConfig::iid(ValuationDistribution::uniform(), static_cast<std::size_t>(state.range(0)),
                               PricingStrategy::sws());
  cfg.engine = engine;
  std::uint64_t run_index = 0;
  for (auto _ : state) {
    auto rng = RandomStream::for_run(3, run_index++);
    benchmark::DoNotOptimize(run(cfg, rng));
  }
}
BENCHMARK_CAPTURE(BM_Engine, direct, Engine::Direct)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Engine, geometric, Engine::GeometricJump)
    ->Arg(100)
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
