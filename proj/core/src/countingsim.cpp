#include "pcfpair/countingsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "pcfpair/errors.hpp"
#include "pcfpair/numerics.hpp"

namespace pcfpair {

void EmissionRates::validate() const {
  if (!(mean_pairs_per_pulse >= 0.0)) throw ArgumentError("emission: mean pairs per pulse must be >= 0");
  if (!(fluorescence_rate_hz >= 0.0 && dark_rate_signal_hz >= 0.0 && dark_rate_idler_hz >= 0.0))
    throw ArgumentError("emission: background rates must be >= 0");
}

EmissionRates SourceStats::at_power(double p) const {
  if (!(p >= 0.0)) throw ArgumentError("source: pump power must be >= 0");
  EmissionRates r;
  r.mean_pairs_per_pulse = pair_scale_per_mw2 * p * p;
  r.fluorescence_rate_hz = fluorescence_hz_per_mw * p;
  r.dark_rate_signal_hz = dark_rate_signal_hz;
  r.dark_rate_idler_hz = dark_rate_idler_hz;
  r.statistics = statistics;
  r.validate();
  return r;
}

void DetectorModel::validate() const {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw ArgumentError("detector: efficiency must be in [0, 1]");
  if (!(jitter_sigma_ps >= 0.0)) throw ArgumentError("detector: jitter must be >= 0");
  if (!(gate_window_ps > 0.0)) throw ArgumentError("detector: gate window must be > 0");
  if (!(dead_time_ns >= 0.0)) throw ArgumentError("detector: dead time must be >= 0");
}

void SimulationSettings::validate() const {
  if (pulses < 1) throw ArgumentError("simulation: need at least one pulse");
  if (block_pulses < 1) throw ArgumentError("simulation: block size must be >= 1");
}

void apply_dead_time(std::vector<std::int64_t>& times, double dead_time_ns) {
  if (times.empty()) return;
  const auto dead = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(dead_time_ns * 1e3)));
  std::size_t kept = 1;
  std::int64_t last = times.front();
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (times[k] - last >= dead) {
      last = times[k];
      times[kept++] = last;
    }
  }
  times.resize(kept);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(block + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

// Poisson(mu) conditioned on n >= 1, by inversion.
int truncated_poisson(double mu, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  double prob = mu / std::expm1(mu);
  double cdf = prob;
  int n = 1;
  while (u > cdf && n < 10000) {
    ++n;
    prob *= mu / n;
    cdf += prob;
  }
  return n;
}

struct BlockEvents {
  std::vector<std::int64_t> signal;
  std::vector<std::int64_t> idler;
};

class BlockSimulator {
 public:
  BlockSimulator(const EmissionRates& rates, const DetectorModel& sd, const DetectorModel& id, double period_ps)
      : rates_(rates), signal_det_(sd), idler_det_(id), period_ps_(period_ps) {}

  BlockEvents run(std::uint64_t k0, std::uint64_t k1, std::mt19937_64& rng) const {
    BlockEvents ev;
    emit_pairs(k0, k1, rng, ev);
    const double t0 = static_cast<double>(k0) * period_ps_;
    const double t1 = static_cast<double>(k1) * period_ps_;
    emit_background(t0, t1, rates_.dark_rate_signal_hz, rng, ev.signal);
    emit_background(t0, t1, rates_.dark_rate_idler_hz + rates_.fluorescence_rate_hz, rng, ev.idler);
    return ev;
  }

 private:
  std::int64_t pulse_time(std::uint64_t k) const { return std::llround(static_cast<double>(k) * period_ps_); }

  static std::int64_t jitter(double sigma, std::mt19937_64& rng) {
    if (sigma <= 0.0) return 0;
    std::normal_distribution<double> gauss(0.0, sigma);
    return std::llround(gauss(rng));
  }

  void emit_pair_set(std::uint64_t k, long n, std::mt19937_64& rng, BlockEvents& ev) const {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::int64_t t = pulse_time(k);
    for (long p = 0; p < n; ++p) {
      if (uniform(rng) < signal_det_.efficiency) ev.signal.push_back(t + jitter(signal_det_.jitter_sigma_ps, rng));
      if (uniform(rng) < idler_det_.efficiency) ev.idler.push_back(t + jitter(idler_det_.jitter_sigma_ps, rng));
    }
  }

  void emit_pairs(std::uint64_t k0, std::uint64_t k1, std::mt19937_64& rng, BlockEvents& ev) const {
    const double mu = rates_.mean_pairs_per_pulse;
    if (mu <= 0.0) return;
    if (rates_.statistics == PairStatistics::fixed) {
      const long n = std::lround(mu);
      for (std::uint64_t k = k0; k < k1; ++k) emit_pair_set(k, n, rng, ev);
      return;
    }
    if (mu >= 0.5) {
      std::poisson_distribution<long> poisson(mu);
      for (std::uint64_t k = k0; k < k1; ++k) emit_pair_set(k, poisson(rng), rng, ev);
      return;
    }
    // Sparse regime: jump straight to the next pulse that carries at least one pair.
    std::geometric_distribution<std::uint64_t> gap(-std::expm1(-mu));
    for (std::uint64_t k = k0 + gap(rng); k < k1; k += 1 + gap(rng)) emit_pair_set(k, truncated_poisson(mu, rng), rng, ev);
  }

  static void emit_background(double t0_ps, double t1_ps, double rate_hz, std::mt19937_64& rng,
                              std::vector<std::int64_t>& out) {
    if (rate_hz <= 0.0) return;
    std::exponential_distribution<double> gap(rate_hz * 1e-12);  // per ps
    for (double t = t0_ps + gap(rng); t < t1_ps; t += gap(rng)) out.push_back(static_cast<std::int64_t>(std::floor(t)));
  }

  EmissionRates rates_;
  DetectorModel signal_det_;
  DetectorModel idler_det_;
  double period_ps_;
};

}  // namespace

std::pair<TimeTagStream, TimeTagStream> simulate_time_tags(const EmissionRates& rates, const DetectorModel& signal_det,
                                                           const DetectorModel& idler_det, const PumpSpec& pump,
                                                           const SimulationSettings& settings) {
  rates.validate();
  signal_det.validate();
  idler_det.validate();
  pump.validate();
  settings.validate();

  const std::uint64_t blocks = (settings.pulses + settings.block_pulses - 1) / settings.block_pulses;
  const BlockSimulator sim(rates, signal_det, idler_det, pump.period_ps());
  auto events = numerics::parallel_map<BlockEvents>(
      blocks,
      [&](std::size_t b) {
        const std::uint64_t k0 = b * settings.block_pulses;
        const std::uint64_t k1 = std::min(settings.pulses, k0 + settings.block_pulses);
        auto rng = block_engine(settings.seed, b);
        return sim.run(k0, k1, rng);
      },
      settings.threads);

  TimeTagStream signal{kSignalChannel, {}, static_cast<double>(settings.pulses) / pump.repetition_rate_hz(),
                       settings.pulses};
  TimeTagStream idler{kIdlerChannel, {}, signal.duration_s, settings.pulses};
  for (auto& block : events) {
    signal.times_ps.insert(signal.times_ps.end(), block.signal.begin(), block.signal.end());
    idler.times_ps.insert(idler.times_ps.end(), block.idler.begin(), block.idler.end());
  }
  std::sort(signal.times_ps.begin(), signal.times_ps.end());
  std::sort(idler.times_ps.begin(), idler.times_ps.end());
  apply_dead_time(signal.times_ps, signal_det.dead_time_ns);
  apply_dead_time(idler.times_ps, idler_det.dead_time_ns);
  return {std::move(signal), std::move(idler)};
}

std::uint64_t CoincidenceHistogram::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

std::uint64_t CoincidenceHistogram::sum_between(double lo_ps, double hi_ps) const {
  std::uint64_t sum = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double centre = bin_center_ps(k);
    if (centre >= lo_ps && centre <= hi_ps) sum += counts[k];
  }
  return sum;
}

CoincidenceHistogram correlation_histogram(const TimeTagStream& signal, const TimeTagStream& idler,
                                           double bin_width_ps, double span_ps) {
  if (!(bin_width_ps > 0.0)) throw ArgumentError("correlation_histogram: bin width must be > 0");
  if (!(span_ps >= 0.0)) throw ArgumentError("correlation_histogram: span must be >= 0");
  CoincidenceHistogram h;
  h.bin_width_ps = bin_width_ps;
  h.half_bins = static_cast<std::int64_t>(std::floor(span_ps / bin_width_ps));
  h.counts.assign(static_cast<std::size_t>(2 * h.half_bins + 1), 0);
  h.duration_s = signal.duration_s;
  h.pulses = signal.pulses;

  const double reach = (static_cast<double>(h.half_bins) + 0.5) * bin_width_ps;
  const auto& s = signal.times_ps;
  const auto& i = idler.times_ps;
  std::size_t first = 0;
  for (std::int64_t ts : s) {
    // tau = ts - ti must satisfy -reach <= tau < reach.
    while (first < i.size() && static_cast<double>(ts - i[first]) >= reach) ++first;
    for (std::size_t j = first; j < i.size(); ++j) {
      const double tau = static_cast<double>(ts - i[j]);
      if (tau < -reach) break;
      const auto k = static_cast<std::int64_t>(std::floor(tau / bin_width_ps + 0.5));
      if (k >= -h.half_bins && k <= h.half_bins) ++h.counts[static_cast<std::size_t>(k + h.half_bins)];
    }
  }
  return h;
}

HistogramStructure histogram_structure(const CoincidenceHistogram& h, double period_ps, double window_ps) {
  if (!(period_ps > 0.0 && window_ps > 0.0)) throw ArgumentError("histogram_structure: period and window must be > 0");
  const double reach = static_cast<double>(h.half_bins) * h.bin_width_ps;
  if (reach < period_ps + 0.5 * window_ps) throw ArgumentError("histogram_structure: span must cover +-one period");

  HistogramStructure s;
  double background = 0.0;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    const double tau = h.bin_center_ps(k);
    const double nearest = std::round(tau / period_ps) * period_ps;
    if (std::abs(tau - nearest) > window_ps) {
      background += static_cast<double>(h.counts[k]);
      ++s.background_bins;
    }
  }
  if (s.background_bins == 0) throw ArgumentError("histogram_structure: no background bins in span");
  s.background_per_bin = background / static_cast<double>(s.background_bins);

  auto window = [&](double centre) {
    DelayWindow w;
    w.center_ps = centre;
    for (std::size_t k = 0; k < h.counts.size(); ++k) {
      if (std::abs(h.bin_center_ps(k) - centre) <= 0.5 * window_ps) {
        w.counts += h.counts[k];
        ++w.bins;
      }
    }
    w.expected_background = s.background_per_bin * static_cast<double>(w.bins);
    w.sigma = std::sqrt(std::max(w.expected_background, 1.0));
    w.significance = (static_cast<double>(w.counts) - w.expected_background) / w.sigma;
    return w;
  };
  s.central = window(0.0);
  s.previous_pulse = window(-period_ps);
  s.next_pulse = window(period_ps);
  return s;
}

double default_histogram_span_ps(const PumpSpec& pump) { return 2.5 * pump.period_ps(); }

std::uint64_t count_coincidences(const TimeTagStream& signal, const TimeTagStream& idler, double half_window_ps) {
  if (!(half_window_ps >= 0.0)) throw ArgumentError("count_coincidences: window must be >= 0");
  const auto& s = signal.times_ps;
  const auto& i = idler.times_ps;
  std::uint64_t count = 0;
  std::size_t first = 0;
  for (std::int64_t ts : s) {
    while (first < i.size() && static_cast<double>(ts - i[first]) > half_window_ps) ++first;
    for (std::size_t j = first; j < i.size() && static_cast<double>(i[j] - ts) <= half_window_ps; ++j) ++count;
  }
  return count;
}

double g2_zero(const TimeTagStream& signal, const TimeTagStream& idler, const PumpSpec& pump, double gate_window_ps,
               std::optional<double> idler_background_hz) {
  if (!(gate_window_ps > 0.0)) throw ArgumentError("g2_zero: gate window must be > 0");
  if (!(signal.duration_s > 0.0) || signal.duration_s != idler.duration_s)
    throw ArgumentError("g2_zero: streams must share a positive duration");
  const double duration = signal.duration_s;
  const double ns = signal.rate_hz();
  double ni = idler.rate_hz();
  if (idler_background_hz) ni = subtract_fluorescence(ni, *idler_background_hz);
  if (!(ns > 0.0) || !(ni > 0.0)) {
    std::ostringstream msg;
    msg << "g2_zero: undefined with singles rates N_s = " << ns << " Hz, N_i = " << ni << " Hz";
    throw UndefinedStatisticError(msg.str());
  }
  const double nsi = static_cast<double>(count_coincidences(signal, idler, 0.5 * gate_window_ps)) / duration;
  return nsi * pump.repetition_rate_hz() / (ns * ni);
}

double subtract_fluorescence(double measured, double offband) { return measured - offband; }

double car(double g2_value) { return g2_value - 1.0; }

double loglog_exponent(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("loglog_exponent: size mismatch");
  std::set<double> distinct(x.begin(), x.end());
  if (distinct.size() < 2) throw ArgumentError("loglog_exponent: need at least two distinct abscissae");
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0 && y[k] > 0.0)) throw ArgumentError("loglog_exponent: data must be positive");
    lx.push_back(std::log(x[k]));
    ly.push_back(std::log(y[k]));
  }
  return numerics::least_squares_slope(lx, ly);
}

PowerSweep power_sweep(const SourceStats& stats, const DetectorModel& signal_det, const DetectorModel& idler_det,
                       const PumpSpec& pump, std::span<const double> powers_mw, const SimulationSettings& settings) {
  if (std::set<double>(powers_mw.begin(), powers_mw.end()).size() < 2)
    throw ArgumentError("power_sweep: exponents need at least two distinct powers");
  PowerSweep sweep;
  for (std::size_t k = 0; k < powers_mw.size(); ++k) {
    PumpSpec at = pump;
    at.average_power_mw = powers_mw[k];
    const EmissionRates rates = stats.at_power(powers_mw[k]);
    EmissionRates offband = rates;
    offband.mean_pairs_per_pulse = 0.0;

    SimulationSettings main_run = settings;
    main_run.seed = splitmix64(settings.seed ^ splitmix64(2 * k));
    SimulationSettings off_run = settings;
    off_run.seed = splitmix64(settings.seed ^ splitmix64(2 * k + 1));

    const auto [signal, idler] = simulate_time_tags(rates, signal_det, idler_det, at, main_run);
    const auto off = simulate_time_tags(offband, signal_det, idler_det, at, off_run);

    PowerPoint point;
    point.power_mw = powers_mw[k];
    point.mean_pairs_per_pulse = rates.mean_pairs_per_pulse;
    point.signal_rate_hz = signal.rate_hz();
    point.idler_rate_hz = idler.rate_hz();
    point.idler_offband_rate_hz = off.second.rate_hz();
    point.coincidence_rate_hz =
        static_cast<double>(count_coincidences(signal, idler, 0.5 * signal_det.gate_window_ps)) / signal.duration_s;
    point.g2 = g2_zero(signal, idler, at, signal_det.gate_window_ps, point.idler_offband_rate_hz);
    point.car = car(point.g2);
    sweep.points.push_back(point);
  }
  std::vector<double> p, rate, cars;
  for (const auto& pt : sweep.points) {
    p.push_back(pt.power_mw);
    rate.push_back(pt.coincidence_rate_hz);
    cars.push_back(pt.car);
  }
  sweep.coincidence_exponent = loglog_exponent(p, rate);
  sweep.car_exponent = loglog_exponent(p, cars);
  return sweep;
}

}  // namespace pcfpair
