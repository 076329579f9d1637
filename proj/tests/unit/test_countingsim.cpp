#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "pcfpair/countingsim.hpp"
#include "pcfpair/errors.hpp"
#include "property.hpp"

namespace pcfpair {
namespace {

const PumpSpec kPump;  // 76 MHz

DetectorModel ideal() { return {1.0, 0.0, 400.0, 0.0}; }
DetectorModel signal_detector() { return {0.15, 80.0, 400.0, 10.0}; }
DetectorModel idler_detector() { return {0.30, 80.0, 400.0, 22.0}; }

EmissionRates pairs_only(double mu) {
  EmissionRates r;
  r.mean_pairs_per_pulse = mu;
  return r;
}

SimulationSettings settings(std::uint64_t pulses, std::uint64_t seed = 7) {
  SimulationSettings s;
  s.pulses = pulses;
  s.seed = seed;
  return s;
}

TEST(SimulateTimeTags, NothingInNothingOut) {
  const auto [s, i] = simulate_time_tags(pairs_only(0.0), ideal(), ideal(), kPump, settings(100000));
  EXPECT_TRUE(s.times_ps.empty());
  EXPECT_TRUE(i.times_ps.empty());
  EXPECT_EQ(s.pulses, 100000u);
  EXPECT_NEAR(s.duration_s, 100000 / 76e6, 1e-15);
}

TEST(SimulateTimeTags, PerfectCorrelationInFixedMode) {
  auto rates = pairs_only(1.0);
  rates.statistics = PairStatistics::fixed;
  const auto [s, i] = simulate_time_tags(rates, ideal(), ideal(), kPump, settings(5000));
  ASSERT_EQ(s.times_ps.size(), 5000u);
  EXPECT_EQ(s.times_ps, i.times_ps);
  const auto h = correlation_histogram(s, i, 100.0, default_histogram_span_ps(kPump));
  EXPECT_EQ(h.counts[static_cast<std::size_t>(h.half_bins)], 5000u);
  const double period = kPump.period_ps();
  EXPECT_EQ(h.sum_between(-0.5 * period, -50.0) + h.sum_between(50.0, 0.5 * period), 0u);
  // Every pulse also pairs with its neighbours one and two periods away.
  EXPECT_EQ(h.sum_between(period - 500.0, period + 500.0), 4999u);
  EXPECT_EQ(h.sum_between(-2.0 * period - 500.0, -2.0 * period + 500.0), 4998u);
}

TEST(SimulateTimeTags, SinglesRateMatchesExpectation) {
  EmissionRates rates = pairs_only(0.01);
  rates.dark_rate_signal_hz = 2000.0;
  rates.dark_rate_idler_hz = 5000.0;
  rates.fluorescence_rate_hz = 3000.0;
  DetectorModel ds = signal_detector(), di = idler_detector();
  ds.dead_time_ns = di.dead_time_ns = 0.0;
  const std::uint64_t pulses = 10'000'000;
  const auto [s, i] = simulate_time_tags(rates, ds, di, kPump, settings(pulses));
  const double duration = s.duration_s;
  const double expect_s = pulses * 0.01 * 0.15 + 2000.0 * duration;
  const double expect_i = pulses * 0.01 * 0.30 + 8000.0 * duration;
  EXPECT_LT(std::abs(static_cast<double>(s.times_ps.size()) - expect_s), 3.0 * std::sqrt(expect_s));
  EXPECT_LT(std::abs(static_cast<double>(i.times_ps.size()) - expect_i), 3.0 * std::sqrt(expect_i));
}

TEST(SimulateTimeTags, StreamsAreStrictlyIncreasingWithDeadTime) {
  const auto [s, i] = simulate_time_tags(pairs_only(0.5), signal_detector(), idler_detector(), kPump, settings(200000));
  for (const auto* st : {&s, &i}) {
    const double dead = st == &s ? 10000.0 : 22000.0;
    for (std::size_t k = 1; k < st->times_ps.size(); ++k)
      ASSERT_GE(static_cast<double>(st->times_ps[k] - st->times_ps[k - 1]), dead);
  }
}

TEST(SimulateTimeTags, DeterministicForSeed) {
  const auto a = simulate_time_tags(pairs_only(0.05), signal_detector(), idler_detector(), kPump, settings(2'000'000, 3));
  const auto b = simulate_time_tags(pairs_only(0.05), signal_detector(), idler_detector(), kPump, settings(2'000'000, 3));
  const auto c = simulate_time_tags(pairs_only(0.05), signal_detector(), idler_detector(), kPump, settings(2'000'000, 4));
  EXPECT_EQ(a.first.times_ps, b.first.times_ps);
  EXPECT_EQ(a.second.times_ps, b.second.times_ps);
  EXPECT_NE(a.first.times_ps, c.first.times_ps);
}

TEST(SimulateTimeTags, IndependentOfThreadCount) {
  auto one = settings(3'000'000, 11);
  one.block_pulses = 1 << 16;
  one.threads = 1;
  auto many = one;
  many.threads = 4;
  EmissionRates rates = pairs_only(0.02);
  rates.dark_rate_idler_hz = 1e4;
  const auto a = simulate_time_tags(rates, signal_detector(), idler_detector(), kPump, one);
  const auto b = simulate_time_tags(rates, signal_detector(), idler_detector(), kPump, many);
  EXPECT_EQ(a.first.times_ps, b.first.times_ps);
  EXPECT_EQ(a.second.times_ps, b.second.times_ps);
}

TEST(SimulateTimeTags, RejectsBadArguments) {
  EXPECT_THROW(simulate_time_tags(pairs_only(-1.0), ideal(), ideal(), kPump, settings(10)), ArgumentError);
  EXPECT_THROW(simulate_time_tags(pairs_only(0.1), ideal(), ideal(), kPump, settings(0)), ArgumentError);
  DetectorModel bad = ideal();
  bad.efficiency = 1.5;
  EXPECT_THROW(simulate_time_tags(pairs_only(0.1), bad, ideal(), kPump, settings(10)), ArgumentError);
}

TEST(ApplyDeadTime, NeverReordersAndRespectsDeadTime) {
  testing::for_all(
      300, 51,
      [](testing::Rng& rng) {
        std::vector<std::int64_t> t(static_cast<std::size_t>(testing::uniform(rng, 0.0, 400.0)));
        for (auto& v : t) v = static_cast<std::int64_t>(testing::uniform(rng, 0.0, 1e6));
        std::sort(t.begin(), t.end());
        return std::pair{t, testing::uniform(rng, 0.0, 30.0)};
      },
      [](const std::pair<std::vector<std::int64_t>, double>& c) {
        auto kept = c.first;
        apply_dead_time(kept, c.second);
        if (c.first.empty()) {
          EXPECT_TRUE(kept.empty());
          return;
        }
        EXPECT_EQ(kept.front(), c.first.front());
        EXPECT_TRUE(std::includes(c.first.begin(), c.first.end(), kept.begin(), kept.end()));
        for (std::size_t k = 1; k < kept.size(); ++k) {
          EXPECT_GT(kept[k], kept[k - 1]);
          EXPECT_GE(static_cast<double>(kept[k] - kept[k - 1]), c.second * 1e3);
        }
      });
}

// Quadratic pairing with the same binning rule.
std::map<std::int64_t, std::uint64_t> brute_force(const TimeTagStream& s, const TimeTagStream& i, double w,
                                                  std::int64_t half_bins) {
  std::map<std::int64_t, std::uint64_t> out;
  for (auto ts : s.times_ps)
    for (auto ti : i.times_ps) {
      const auto k = static_cast<std::int64_t>(std::floor(static_cast<double>(ts - ti) / w + 0.5));
      if (std::abs(k) <= half_bins) ++out[k];
    }
  return out;
}

TEST(CorrelationHistogram, MatchesBruteForcePairing) {
  testing::for_all(
      60, 52,
      [](testing::Rng& rng) {
        auto stream = [&](int channel) {
          TimeTagStream t;
          t.channel = channel;
          t.times_ps.resize(static_cast<std::size_t>(testing::uniform(rng, 0.0, 900.0)));
          for (auto& v : t.times_ps) v = static_cast<std::int64_t>(testing::uniform(rng, 0.0, 2e6));
          std::sort(t.times_ps.begin(), t.times_ps.end());
          t.times_ps.erase(std::unique(t.times_ps.begin(), t.times_ps.end()), t.times_ps.end());
          return t;
        };
        auto s = stream(kSignalChannel);
        auto i = stream(kIdlerChannel);
        return std::tuple{s, i, testing::uniform(rng, 7.0, 500.0), testing::uniform(rng, 0.0, 40000.0)};
      },
      [](const std::tuple<TimeTagStream, TimeTagStream, double, double>& c) {
        const auto& [s, i, w, span] = c;
        const auto h = correlation_histogram(s, i, w, span);
        const auto ref = brute_force(s, i, w, h.half_bins);
        std::uint64_t total = 0;
        for (std::size_t k = 0; k < h.counts.size(); ++k) {
          const auto key = static_cast<std::int64_t>(k) - h.half_bins;
          const auto it = ref.find(key);
          ASSERT_EQ(h.counts[k], it == ref.end() ? 0u : it->second) << "bin " << key;
          total += h.counts[k];
        }
        EXPECT_EQ(h.total(), total);
      });
}

TEST(CorrelationHistogram, FlatForIndependentContinuousStreams) {
  EmissionRates rates;
  rates.dark_rate_signal_hz = 1e7;
  rates.dark_rate_idler_hz = 1e7;
  const auto [s, i] = simulate_time_tags(rates, ideal(), ideal(), kPump, settings(1'000'000));
  const auto h = correlation_histogram(s, i, 100.0, default_histogram_span_ps(kPump));
  const double expected = static_cast<double>(s.times_ps.size()) * static_cast<double>(i.times_ps.size()) * 100e-12 /
                          s.duration_s;
  ASSERT_GT(expected, 50.0);
  std::size_t within = 0;
  for (auto c : h.counts) {
    const double z = (static_cast<double>(c) - expected) / std::sqrt(expected);
    EXPECT_LT(std::abs(z), 5.0);
    if (std::abs(z) <= 3.0) ++within;
  }
  EXPECT_GE(static_cast<double>(within), 0.99 * static_cast<double>(h.counts.size()));
}

TEST(CorrelationHistogram, RejectsBadBinning) {
  EXPECT_THROW(correlation_histogram({}, {}, 0.0, 100.0), ArgumentError);
  EXPECT_THROW(correlation_histogram({}, {}, 10.0, -1.0), ArgumentError);
}

TEST(G2, IndependentPulsedStreamsGiveOne) {
  const auto a = simulate_time_tags(pairs_only(0.1), ideal(), ideal(), kPump, settings(1'000'000, 21));
  const auto b = simulate_time_tags(pairs_only(0.1), ideal(), ideal(), kPump, settings(1'000'000, 22));
  const auto coincidences = count_coincidences(a.first, b.second, 200.0);
  const double g2 = g2_zero(a.first, b.second, kPump, 400.0);
  EXPECT_LT(std::abs(g2 - 1.0), 3.0 / std::sqrt(static_cast<double>(coincidences)));
  EXPECT_LT(std::abs(car(g2)), 3.0 / std::sqrt(static_cast<double>(coincidences)));
}

TEST(G2, LosslessLowMuGivesInverseMu) {
  const auto [s, i] = simulate_time_tags(pairs_only(1e-5), ideal(), ideal(), kPump, settings(200'000'000));
  EXPECT_NEAR(g2_zero(s, i, kPump, 400.0) * 1e-5, 1.0, 0.1);
}

TEST(G2, HalvingGateAroundZeroJitterPeak) {
  const auto [s, i] = simulate_time_tags(pairs_only(0.01), ideal(), ideal(), kPump, settings(5'000'000));
  const double full = g2_zero(s, i, kPump, 400.0);
  const double half = g2_zero(s, i, kPump, 200.0);
  EXPECT_NEAR(half / full, 1.0, 0.01);
}

TEST(G2, CarTimesMuApproachesOne) {
  for (double mu : {1e-3, 1e-4, 1e-5}) {
    const std::uint64_t pulses = static_cast<std::uint64_t>(5e3 / (mu * 0.045));
    const auto [s, i] = simulate_time_tags(pairs_only(mu), signal_detector(), idler_detector(), kPump, settings(pulses));
    EXPECT_NEAR(car(g2_zero(s, i, kPump, 400.0)) * mu, 1.0, 0.15) << "mu " << mu;
  }
}

TEST(G2, ZeroSinglesIsUndefined) {
  const auto [s, i] = simulate_time_tags(pairs_only(0.0), ideal(), ideal(), kPump, settings(1000));
  EXPECT_THROW(g2_zero(s, i, kPump, 400.0), UndefinedStatisticError);
}

TEST(G2, FluorescenceCorrectedIdlerRate) {
  SourceStats stats{1.5306122e-8, 1.0, 1.0, 100.0};
  const auto rates = stats.at_power(140.0);
  EXPECT_NEAR(rates.mean_pairs_per_pulse, 3e-4, 1e-9);
  const auto run = simulate_time_tags(rates, signal_detector(), idler_detector(), kPump, settings(100'000'000, 5));
  auto dark = rates;
  dark.mean_pairs_per_pulse = 0.0;
  const auto off = simulate_time_tags(dark, signal_detector(), idler_detector(), kPump, settings(100'000'000, 6));
  const double corrected = subtract_fluorescence(run.second.rate_hz(), off.second.rate_hz());
  const double expected = 3e-4 * 0.30 * 76e6;
  const double sigma = std::sqrt(static_cast<double>(run.second.times_ps.size() + off.second.times_ps.size())) /
                       run.second.duration_s;
  EXPECT_LT(std::abs(corrected - expected), 3.0 * sigma);
}

TEST(HistogramStructure, SidePeaksOnlyInAccidentalsRegime) {
  const auto high = simulate_time_tags(pairs_only(0.1), signal_detector(), idler_detector(), kPump, settings(10'000'000));
  const auto hs = histogram_structure(correlation_histogram(high.first, high.second, 100.0, default_histogram_span_ps(kPump)),
                                      kPump.period_ps(), 400.0);
  EXPECT_GT(hs.previous_pulse.significance, 5.0);
  EXPECT_GT(hs.next_pulse.significance, 5.0);

  EmissionRates low = pairs_only(1e-5);
  low.dark_rate_signal_hz = 1.0;
  low.dark_rate_idler_hz = 100.0;
  const auto quiet = simulate_time_tags(low, signal_detector(), idler_detector(), kPump, settings(1'000'000'000));
  const auto ls = histogram_structure(correlation_histogram(quiet.first, quiet.second, 100.0, default_histogram_span_ps(kPump)),
                                      kPump.period_ps(), 400.0);
  EXPECT_GT(ls.central.significance, 5.0);
  EXPECT_LT(std::abs(ls.previous_pulse.significance), 3.0);
  EXPECT_LT(std::abs(ls.next_pulse.significance), 3.0);
}

TEST(HistogramStructure, NeedsSpanBeyondOnePeriod) {
  CoincidenceHistogram h = correlation_histogram({}, {}, 100.0, 5000.0);
  EXPECT_THROW(histogram_structure(h, kPump.period_ps(), 400.0), ArgumentError);
}

TEST(Scalars, SubtractAndCar) {
  EXPECT_EQ(subtract_fluorescence(1234.5, 0.0), 1234.5);
  EXPECT_EQ(subtract_fluorescence(77.0, 77.0), 0.0);
  EXPECT_EQ(car(1.0), 0.0);
  EXPECT_EQ(car(3e5 + 1.0), 3e5);
}

TEST(Scalars, LogLogExponent) {
  const std::vector<double> x{1, 2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * v * v);
  EXPECT_NEAR(loglog_exponent(x, y), 2.0, 1e-12);
  const std::vector<double> one{5.0, 5.0};
  EXPECT_THROW(loglog_exponent(one, std::vector<double>{1.0, 2.0}), ArgumentError);
  EXPECT_THROW(loglog_exponent(x, std::vector<double>{1, 2, 0, 4, 5}), ArgumentError);
}

TEST(PowerSweep, NeedsTwoDistinctPowers) {
  const SourceStats stats{1.5306122e-8, 1.0, 1.0, 100.0};
  const std::vector<double> single{140.0};
  EXPECT_THROW(power_sweep(stats, signal_detector(), idler_detector(), kPump, single, settings(1000)), ArgumentError);
}

TEST(PowerSweep, QuadraticCoincidencesInverseSquareCar) {
  const SourceStats stats{1.5306122e-8, 0.0, 0.0, 0.0};
  const std::vector<double> powers{14, 28, 56, 140};
  const auto sweep = power_sweep(stats, signal_detector(), idler_detector(), kPump, powers, settings(2'000'000'000));
  ASSERT_EQ(sweep.points.size(), 4u);
  EXPECT_NEAR(sweep.coincidence_exponent, 2.0, 0.1);
  EXPECT_NEAR(sweep.car_exponent, -2.0, 0.2);
}

}  // namespace
}  // namespace pcfpair
