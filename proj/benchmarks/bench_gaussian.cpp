#include <benchmark/benchmark.h>

#include "modcomm/gaussian.hpp"
#include "modcomm/regions.hpp"

namespace {

using namespace modcomm;

void BM_BuildHaldane(benchmark::State& state) {
  const int L = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_haldane(L, 0.0));
}
BENCHMARK(BM_BuildHaldane)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_GroundStateCorrelations(benchmark::State& state) {
  const LatticeModel m = build_haldane(int(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(ground_state_correlations(m));
  state.counters["N"] = m.size();
}
BENCHMARK(BM_GroundStateCorrelations)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_EntanglementEntropy(benchmark::State& state) {
  const LatticeModel m = build_haldane(16, 0.0);
  const CorrelationMatrix c = ground_state_correlations(m);
  const Region x = disk(m, m.center(), double(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(entanglement_entropy(c, x));
  state.counters["sites"] = double(x.size());
}
BENCHMARK(BM_EntanglementEntropy)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_ModularCommutator(benchmark::State& state) {
  const LatticeModel m = build_haldane(16, 0.0);
  const CorrelationMatrix c = ground_state_correlations(m);
  PresetParams p;
  p.r = double(state.range(0));
  const Partition part = preset("tripartite_disk", m, p);
  for (auto _ : state) benchmark::DoNotOptimize(modular_commutator(c, part.u(), part.v(), part.w()));
}
BENCHMARK(BM_ModularCommutator)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_ModularCurrent(benchmark::State& state) {
  const LatticeModel m = build_haldane(12, 0.0);
  const CorrelationMatrix c = ground_state_correlations(m);
  PresetParams p;
  p.r = 9.0;
  const Partition part = preset("tripartite_disk", m, p);
  for (auto _ : state) benchmark::DoNotOptimize(modular_current(c, part.u(), part.v(), part.w()));
}
BENCHMARK(BM_ModularCurrent)->Unit(benchmark::kMillisecond);

void BM_FindTrijunctions(benchmark::State& state) {
  const LatticeModel m = build_haldane(24, 0.0);
  const Partition part = preset("bulk_pizza_n2", m);
  for (auto _ : state) benchmark::DoNotOptimize(find_trijunctions(m, part));
}
BENCHMARK(BM_FindTrijunctions)->Unit(benchmark::kMillisecond);

}  // namespace
