#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pcfpair/phasematch.hpp"

namespace pcfpair {

enum class PairStatistics {
  poisson,  // Poisson(mu) pairs per pulse
  fixed,    // exactly round(mu) pairs per pulse (variance-free test mode)
};

/// Emission parameters resolved at one pump power.
struct EmissionRates {
  double mean_pairs_per_pulse = 0.0;  // mu
  double fluorescence_rate_hz = 0.0;  // detected, idler channel only
  double dark_rate_signal_hz = 0.0;
  double dark_rate_idler_hz = 0.0;
  PairStatistics statistics = PairStatistics::poisson;

  void validate() const;
};

/// Power scaling of the source: mu = c P^2, fluorescence linear in P.
struct SourceStats {
  double pair_scale_per_mw2 = 0.0;  // c
  double fluorescence_hz_per_mw = 0.0;
  double dark_rate_signal_hz = 0.0;
  double dark_rate_idler_hz = 0.0;
  PairStatistics statistics = PairStatistics::poisson;

  EmissionRates at_power(double average_power_mw) const;
};

struct DetectorModel {
  double efficiency = 1.0;
  double jitter_sigma_ps = 0.0;
  double gate_window_ps = 400.0;
  double dead_time_ns = 0.0;

  void validate() const;
};

struct TimeTagStream {
  int channel = 0;
  std::vector<std::int64_t> times_ps;  // strictly increasing
  double duration_s = 0.0;
  std::uint64_t pulses = 0;

  double rate_hz() const { return duration_s > 0.0 ? static_cast<double>(times_ps.size()) / duration_s : 0.0; }
};

inline constexpr int kSignalChannel = 0;
inline constexpr int kIdlerChannel = 1;

struct SimulationSettings {
  std::uint64_t pulses = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t block_pulses = std::uint64_t{1} << 22;  // substream granularity; results depend on it, not on threads
  unsigned threads = 0;                                 // 0: hardware concurrency

  void validate() const;
};

/// Keep an event only when it is at least the dead time (and at least 1 ps)
/// after the previously kept event. Input must be sorted.
void apply_dead_time(std::vector<std::int64_t>& times_ps, double dead_time_ns);

/// Pulsed pair source followed by two lossy, jittery, dead-time-limited
/// detectors and a time tagger. Deterministic for a given seed and block size.
std::pair<TimeTagStream, TimeTagStream> simulate_time_tags(const EmissionRates& rates, const DetectorModel& signal_det,
                                                           const DetectorModel& idler_det, const PumpSpec& pump,
                                                           const SimulationSettings& settings);

struct CoincidenceHistogram {
  double bin_width_ps = 0.0;
  std::int64_t half_bins = 0;         // bins cover k = -half_bins..half_bins
  std::vector<std::uint64_t> counts;  // counts[k + half_bins]
  double duration_s = 0.0;
  std::uint64_t pulses = 0;

  double bin_center_ps(std::size_t index) const {
    return (static_cast<double>(index) - static_cast<double>(half_bins)) * bin_width_ps;
  }
  std::uint64_t total() const;
  /// Sum of the bins whose centres lie in [lo, hi].
  std::uint64_t sum_between(double lo_ps, double hi_ps) const;
};

/// Histogram of every delay tau = t_s - t_i with |tau| within the span, bins
/// centred on multiples of bin_width (bin k holds [(k - 1/2) w, (k + 1/2) w)).
/// Two-pointer sweep, linear in events plus counted pairs.
CoincidenceHistogram correlation_histogram(const TimeTagStream& signal, const TimeTagStream& idler,
                                           double bin_width_ps, double span_ps);

/// Counts in a delay window compared with the flat accidental level.
struct DelayWindow {
  double center_ps = 0.0;
  std::uint64_t counts = 0;
  std::size_t bins = 0;
  double expected_background = 0.0;
  double sigma = 0.0;         // sqrt(max(expected, 1))
  double significance = 0.0;  // (counts - expected) / sigma
};

struct HistogramStructure {
  double background_per_bin = 0.0;  // mean over bins away from every pulse multiple
  std::size_t background_bins = 0;
  DelayWindow central;
  DelayWindow previous_pulse;  // tau = -period
  DelayWindow next_pulse;      // tau = +period
};

/// Sums bins whose centres lie within window/2 of 0 and of +-period. Background
/// bins are those farther than a full window from every multiple of the period.
/// Throws ArgumentError when the span does not reach +-period or leaves no background bin.
HistogramStructure histogram_structure(const CoincidenceHistogram& histogram, double period_ps, double window_ps);

/// Default histogram half-span: two and a half pump periods.
double default_histogram_span_ps(const PumpSpec& pump);

/// Number of (signal, idler) pairs with |t_s - t_i| <= half_window_ps.
std::uint64_t count_coincidences(const TimeTagStream& signal, const TimeTagStream& idler, double half_window_ps);

/// g2(0) = N_si R_p / (N_s N_i) with N_si counted inside +-gate/2. When an idler
/// background rate is given, N_i is fluorescence-corrected first.
/// Throws UndefinedStatisticError on zero (or non-positive corrected) singles.
double g2_zero(const TimeTagStream& signal, const TimeTagStream& idler, const PumpSpec& pump, double gate_window_ps,
               std::optional<double> idler_background_hz = std::nullopt);

/// measured - offband.
double subtract_fluorescence(double idler_rate_measured_hz, double idler_rate_offband_hz);

/// Coincidence-to-accidentals ratio, g2(0) - 1.
double car(double g2_value);

struct PowerPoint {
  double power_mw = 0.0;
  double mean_pairs_per_pulse = 0.0;
  double coincidence_rate_hz = 0.0;
  double signal_rate_hz = 0.0;
  double idler_rate_hz = 0.0;
  double idler_offband_rate_hz = 0.0;
  double g2 = 0.0;
  double car = 0.0;
};

struct PowerSweep {
  std::vector<PowerPoint> points;
  double coincidence_exponent = 0.0;  // d log(coincidence rate) / d log P
  double car_exponent = 0.0;          // d log(CAR) / d log P
};

/// Full pipeline per power: simulate, simulate again with mu = 0 for the
/// off-band fluorescence level, then g2 and CAR. Needs >= 2 distinct powers.
PowerSweep power_sweep(const SourceStats& stats, const DetectorModel& signal_det, const DetectorModel& idler_det,
                       const PumpSpec& pump, std::span<const double> powers_mw, const SimulationSettings& settings);

/// Least-squares slope in log-log space. Throws ArgumentError for fewer than
/// two distinct abscissae or non-positive data.
double loglog_exponent(std::span<const double> x, std::span<const double> y);

}  // namespace pcfpair
