#include <benchmark/benchmark.h>

#include "pcfpair/config.hpp"

namespace {

using namespace pcfpair;

void BM_SimulateTimeTags(benchmark::State& state) {
  const auto c = default_config();
  auto rates = c.simulation.source.at_power(140.0);
  SimulationSettings s = c.simulation.settings;
  s.pulses = static_cast<std::uint64_t>(state.range(0));
  s.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_time_tags(rates, c.simulation.signal_detector, c.simulation.idler_detector, c.pump, s));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateTimeTags)->Arg(100'000'000)->Arg(1'000'000'000)->Unit(benchmark::kMillisecond);

void BM_CorrelationHistogram(benchmark::State& state) {
  const auto c = default_config();
  EmissionRates rates;
  rates.mean_pairs_per_pulse = 0.1;
  SimulationSettings s = c.simulation.settings;
  s.pulses = 10'000'000;
  const auto [sig, idl] = simulate_time_tags(rates, c.simulation.signal_detector, c.simulation.idler_detector, c.pump, s);
  for (auto _ : state)
    benchmark::DoNotOptimize(correlation_histogram(sig, idl, 100.0, default_histogram_span_ps(c.pump)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sig.times_ps.size()));
}
BENCHMARK(BM_CorrelationHistogram)->Unit(benchmark::kMillisecond);

}  // namespace
