#include <benchmark/benchmark.h>

#include "modcomm/calibration.hpp"
#include "modcomm/oracle.hpp"

namespace {

using namespace modcomm;

void BM_ExactGroundState(benchmark::State& state) {
  const int n = int(state.range(0));
  const RandomInstance r = random_instance(7, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(exact_ground_state(r.h, r.particles));
}
BENCHMARK(BM_ExactGroundState)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

void BM_ExactModularCommutator(benchmark::State& state) {
  const int n = int(state.range(0));
  const RandomInstance r = random_instance(7, n, n);
  const FockState psi = exact_ground_state(r.h, r.particles);
  for (auto _ : state) benchmark::DoNotOptimize(exact_modular_commutator(psi, r.a, r.b, r.c));
}
BENCHMARK(BM_ExactModularCommutator)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_Calibration(benchmark::State& state) {
  CalibrationOptions opts;
  opts.instances = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_calibration(opts));
}
BENCHMARK(BM_Calibration)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
