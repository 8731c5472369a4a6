#include <benchmark/benchmark.h>

#include "icorr/sim.hpp"
#include "icorr/spatial.hpp"

using namespace icorr;

namespace {

NetworkParams mobile_params() {
  NetworkParams p;
  p.mobility = Mobility::Linear;
  p.avg_speed = 0.3;
  p.start_prob = 0.9;
  return p;
}

const CaseTriplet kCase = CaseTriplet::parse("2,0,1");

void BM_SimulateParallel(benchmark::State& state) {
  const NetworkParams p = mobile_params();
  for (auto _ : state) benchmark::DoNotOptimize(simulate(p, kCase, static_cast<int>(state.range(0)), 11, 1).series);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SimulateReference(benchmark::State& state) {
  const NetworkParams p = mobile_params();
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_reference(p, kCase, static_cast<int>(state.range(0)), 11, 1).series);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateReference)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_BrownianIntegralParallel(benchmark::State& state) {
  const PathLossKernel kernel(4.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(mobility_kernel_integral(kernel, {Mobility::Brownian, 0.3, 3, kDefaultBrownianAxisVariance}));
}
BENCHMARK(BM_BrownianIntegralParallel)->Unit(benchmark::kMillisecond);

void BM_BrownianIntegralReference(benchmark::State& state) {
  const PathLossKernel kernel(4.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        mobility_kernel_integral_reference(kernel, {Mobility::Brownian, 0.3, 3, kDefaultBrownianAxisVariance}));
}
BENCHMARK(BM_BrownianIntegralReference)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
