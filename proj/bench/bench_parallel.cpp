// Serial reference vs OpenMP kernels: Monte Carlo block and key-rate sweep.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "sqcc/experiments.hpp"
#include "sqcc/mc_oracle.hpp"

namespace {

sqcc::ProtocolParams mc_point() {
  auto p = sqcc::terrestrial_protocol();
  p.transmittance = 0.2;
  return p;
}

sqcc::mc::SimulationOptions mc_options(std::int64_t pulses) {
  sqcc::mc::SimulationOptions o;
  o.pulses = static_cast<std::uint64_t>(pulses);
  o.seed = 17;
  return o;
}

void BM_MonteCarloSerial(benchmark::State& state) {
  const auto opts = mc_options(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqcc::mc::simulate_block_serial(mc_point(), 0.25, opts));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarloParallel(benchmark::State& state) {
  const auto opts = mc_options(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sqcc::mc::simulate_block(mc_point(), 0.25, opts));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
  const auto cfg = sqcc::preset("fig3");
  for (auto _ : state) benchmark::DoNotOptimize(sqcc::run_sweep_serial(cfg));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto cfg = sqcc::preset("fig3");
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sqcc::run_sweep(cfg, threads));
}

}  // namespace

BENCHMARK(BM_MonteCarloSerial)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloParallel)
    ->ArgsProduct({{1 << 20}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
