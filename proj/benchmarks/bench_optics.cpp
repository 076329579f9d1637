#include <benchmark/benchmark.h>

#include "pcfpair/config.hpp"

namespace {

using namespace pcfpair;

const RunConfig& cfg() {
  static const RunConfig c = default_config();
  return c;
}

void BM_EffectiveIndex(benchmark::State& state) {
  const auto env = cfg().environment;
  double l = 400.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(effective_index(env, l, IndexVariant::resonant));
    l = l < 560.0 ? l + 0.37 : 400.0;  // stays between the first two bands
  }
}
BENCHMARK(BM_EffectiveIndex);

void BM_Gvd(benchmark::State& state) {
  const auto env = cfg().environment;
  for (auto _ : state) benchmark::DoNotOptimize(group_velocity_dispersion(env, 800.0));
}
BENCHMARK(BM_Gvd);

void BM_FindZdw(benchmark::State& state) {
  const auto env = cfg().environment.at_pressure(1.05);
  for (auto _ : state) benchmark::DoNotOptimize(find_zdw(env, 340.0, 600.0));
}
BENCHMARK(BM_FindZdw)->Unit(benchmark::kMicrosecond);

void BM_SolveTuningPoint(benchmark::State& state) {
  const auto& c = cfg();
  const auto env = c.environment.at_pressure(0.79);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_tuning_point(env, c.pump, c.nonlinear, c.signal_search, IndexVariant::resonant, c.solver));
}
BENCHMARK(BM_SolveTuningPoint)->Unit(benchmark::kMicrosecond);

void BM_JsiGrid(benchmark::State& state) {
  const auto& c = cfg();
  const auto env = c.environment.at_pressure(0.79);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(jsi_grid(env, c.pump, c.nonlinear, c.jsi.signal_window, c.jsi.idler_window, n));
}
BENCHMARK(BM_JsiGrid)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Transmittance(benchmark::State& state) {
  const auto& c = cfg();
  const TransmittanceProfile profile(c.environment, c.transmittance);
  double l = 250.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(profile(l));
    l = l < 1400.0 ? l + 0.5 : 250.0;
  }
}
BENCHMARK(BM_Transmittance);

}  // namespace
