// OpenMP kernels against their serial references. Both variants compute
// bitwise-identical results; only wall time differs.

#include <benchmark/benchmark.h>

#include "ufsym/designs.hpp"
#include "ufsym/tomosim.hpp"

namespace {

ufsym::WeightedStateSet random_set(int d, int n) {
  ufsym::Rng rng(7);
  ufsym::WeightedStateSet set;
  for (int i = 0; i < n; ++i) {
    set.states.push_back(ufsym::random_pure_state(d, rng));
    set.weights.push_back(1.0);
  }
  return set;
}

void BM_FramePotentialParallel(benchmark::State& state) {
  const auto set = random_set(4, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ufsym::frame_potential(set));
}

void BM_FramePotentialSerial(benchmark::State& state) {
  const auto set = random_set(4, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ufsym::frame_potential_serial(set));
}

ufsym::SimConfig sim_config(int trials) {
  ufsym::SimConfig c;
  c.bloch = ufsym::BlochVector(0.3, 0.2, 0.5);
  c.n_copies = 10000;
  c.n_trials = trials;
  c.seed = 11;
  return c;
}

void BM_SimulationParallel(benchmark::State& state) {
  const auto c = sim_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ufsym::run_simulation(c).scaled_mse);
}

void BM_SimulationSerial(benchmark::State& state) {
  const auto c = sim_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ufsym::run_simulation_serial(c).scaled_mse);
}

}  // namespace

BENCHMARK(BM_FramePotentialParallel)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FramePotentialSerial)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulationParallel)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulationSerial)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
