#include "pcfpair/phasematch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pcfpair/constants.hpp"
#include "pcfpair/errors.hpp"
#include "pcfpair/numerics.hpp"

namespace pcfpair {

void PumpSpec::validate() const {
  if (!(center_wavelength_nm > 0.0 && repetition_rate_mhz > 0.0 && pulse_duration_ps > 0.0))
    throw ArgumentError("pump: wavelength, repetition rate and pulse duration must be > 0");
  if (!(average_power_mw >= 0.0)) throw ArgumentError("pump: average power must be >= 0");
}

double derive_peak_power(const PumpSpec& pump) {
  pump.validate();
  double shape_factor = 1.0;
  switch (pump.shape) {
    case PulseShape::gaussian: shape_factor = 2.0 * std::sqrt(std::numbers::ln2 / kPi); break;
  }
  return shape_factor * (pump.average_power_mw * 1e-3) / (pump.repetition_rate_hz() * pump.pulse_duration_ps * 1e-12);
}

void NonlinearParams::validate() const {
  if (!(n2_reference_m2_per_w >= 0.0)) throw ArgumentError("nonlinear: n2 must be >= 0");
  if (!(reference_pressure_bar > 0.0)) throw ArgumentError("nonlinear: reference pressure must be > 0");
  if (!(effective_area_factor > 0.0)) throw ArgumentError("nonlinear: effective-area factor must be > 0");
}

double nonlinear_gamma(const NonlinearParams& params, const OpticalEnvironment& env, double pump_wavelength_nm) {
  params.validate();
  if (!(pump_wavelength_nm > 0.0)) throw ArgumentError("nonlinear_gamma: pump wavelength must be > 0");
  if (!(env.pressure_bar >= 0.0)) throw ArgumentError("nonlinear_gamma: pressure must be >= 0");
  const double n2 = params.n2_reference_m2_per_w * env.pressure_bar / params.reference_pressure_bar;
  const double radius = env.geometry.core_radius_um * 1e-6;
  const double area = params.effective_area_factor * kPi * radius * radius;
  return 2.0 * kPi * n2 / (pump_wavelength_nm * 1e-9 * area) * 1e3;
}

double conjugate_idler(double pump_nm, double signal_nm) {
  if (!(pump_nm > 0.0 && signal_nm > 0.0)) throw ArgumentError("conjugate_idler: wavelengths must be > 0");
  const double inverse = 2.0 / pump_nm - 1.0 / signal_nm;
  if (!(inverse > 0.0)) {
    std::ostringstream msg;
    msg << "conjugate_idler: signal " << signal_nm << " nm leaves no positive idler frequency for pump " << pump_nm
        << " nm";
    throw ArgumentError(msg.str());
  }
  return 1.0 / inverse;
}

double four_wave_mismatch(const std::function<double(double)>& beta_of_nm, double pump_nm, double signal_nm,
                          double nonlinear_phase_rad_per_m) {
  const double idler_nm = conjugate_idler(pump_nm, signal_nm);
  return 2.0 * beta_of_nm(pump_nm) - beta_of_nm(signal_nm) - beta_of_nm(idler_nm) - nonlinear_phase_rad_per_m;
}

double PhaseMatchPoint::energy_residual(double pump_nm) const {
  return std::abs(1.0 / signal_nm + 1.0 / idler_nm - 2.0 / pump_nm);
}

double PhaseMatchPoint::detuning_thz(double pump_nm) const { return frequency_thz(signal_nm) - frequency_thz(pump_nm); }

double PhaseMatchPoint::separation_thz() const { return frequency_thz(signal_nm) - frequency_thz(idler_nm); }

namespace {

void check_leg(const OpticalEnvironment& env, double wavelength_nm, Leg leg, IndexVariant variant) {
  if (variant != IndexVariant::resonant) return;
  const TubePhase phase = tube_phase(env, wavelength_nm);
  if (phase.pole_distance < env.numerics.pole_guard_rad) {
    std::ostringstream msg;
    msg << to_string(leg) << " leg at " << wavelength_nm << " nm lies inside the order-" << phase.nearest_order
        << " resonance band (|Psi - m pi| = " << phase.pole_distance << " rad)";
    throw BandError(msg.str(), leg, phase.nearest_order, wavelength_nm);
  }
}

double nonlinear_phase(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params) {
  if (!params.include_nonlinear_phase) return 0.0;
  const double gamma_per_w_m = nonlinear_gamma(params, env, pump.center_wavelength_nm) * 1e-3;
  return 2.0 * gamma_per_w_m * derive_peak_power(pump);
}

// Mismatch split into the vacuum part (zero under energy conservation) and
// the n_eff - 1 part, so the cancellation of the O(1) index never happens.
double split_mismatch(const OpticalEnvironment& env, double pump_omega, double signal_omega, double idler_omega,
                      IndexVariant variant) {
  auto excess = [&](double omega) { return effective_index_excess(env, wavelength_nm(omega), variant); };
  const double vacuum = (2.0 * pump_omega - signal_omega - idler_omega) / kSpeedOfLight;
  const double material =
      (2.0 * pump_omega * excess(pump_omega) - signal_omega * excess(signal_omega) - idler_omega * excess(idler_omega)) /
      kSpeedOfLight;
  return vacuum + material;
}

}  // namespace

double mismatch(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params, double signal_nm,
                IndexVariant variant) {
  const double pump_nm = pump.center_wavelength_nm;
  const double idler_nm = conjugate_idler(pump_nm, signal_nm);
  check_leg(env, pump_nm, Leg::pump, variant);
  check_leg(env, signal_nm, Leg::signal, variant);
  check_leg(env, idler_nm, Leg::idler, variant);
  const double dk = 2.0 * kPi * 1e9 *
                    ((2.0 / pump_nm - 1.0 / signal_nm - 1.0 / idler_nm) +
                     (2.0 * effective_index_excess(env, pump_nm, variant) / pump_nm -
                      effective_index_excess(env, signal_nm, variant) / signal_nm -
                      effective_index_excess(env, idler_nm, variant) / idler_nm));
  return dk - nonlinear_phase(env, pump, params);
}

double pair_mismatch(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params,
                     double signal_omega, double idler_omega, IndexVariant variant) {
  const double mean_omega = 0.5 * (signal_omega + idler_omega);
  check_leg(env, wavelength_nm(mean_omega), Leg::pump, variant);
  check_leg(env, wavelength_nm(signal_omega), Leg::signal, variant);
  check_leg(env, wavelength_nm(idler_omega), Leg::idler, variant);
  return split_mismatch(env, mean_omega, signal_omega, idler_omega, variant) - nonlinear_phase(env, pump, params);
}

namespace {

struct ScanSample {
  double signal_nm;
  bool admissible;
  double value;
  double signal_order;  // floor(Psi / pi), to detect poles between samples
  double idler_order;
};

}  // namespace

PhaseMatchSolution solve_tuning_point(const OpticalEnvironment& env, const PumpSpec& pump,
                                      const NonlinearParams& params, const SearchWindow& window, IndexVariant variant,
                                      const SolverSettings& settings) {
  pump.validate();
  const double pump_nm = pump.center_wavelength_nm;
  if (!(window.lo_nm < window.hi_nm)) throw ArgumentError("solve_tuning_point: empty signal window");
  if (!(window.lo_nm > 0.5 * pump_nm && window.hi_nm < pump_nm))
    throw ArgumentError("solve_tuning_point: signal window must lie inside (lambda_p / 2, lambda_p)");
  if (!(settings.scan_step_nm > 0.0 && settings.root_tolerance_nm > 0.0))
    throw ArgumentError("solve_tuning_point: scan step and tolerance must be > 0");
  check_leg(env, pump_nm, Leg::pump, variant);

  const auto n = static_cast<std::size_t>(std::ceil((window.hi_nm - window.lo_nm) / settings.scan_step_nm)) + 1;
  const auto grid = numerics::linspace(window.lo_nm, window.hi_nm, n);

  std::vector<ScanSample> samples;
  samples.reserve(n);
  for (double s : grid) {
    ScanSample sample{s, false, 0.0, 0.0, 0.0};
    try {
      const double i = conjugate_idler(pump_nm, s);
      if (variant == IndexVariant::resonant) {
        const TubePhase ps = tube_phase(env, s);
        const TubePhase pi = tube_phase(env, i);
        sample.signal_order = std::floor(ps.psi / kPi);
        sample.idler_order = std::floor(pi.psi / kPi);
        if (ps.pole_distance < env.numerics.pole_guard_rad || pi.pole_distance < env.numerics.pole_guard_rad) {
          samples.push_back(sample);
          continue;
        }
      }
      sample.value = mismatch(env, pump, params, s, variant);
      sample.admissible = true;
    } catch (const DomainError&) {
      // Outside a material window or inside a band: excised from the search.
    }
    samples.push_back(sample);
  }

  auto f = [&](double s) { return mismatch(env, pump, params, s, variant); };
  PhaseMatchSolution solution;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const auto& a = samples[k];
    const auto& b = samples[k + 1];
    if (!a.admissible || !b.admissible) continue;
    if (a.signal_order != b.signal_order || a.idler_order != b.idler_order) continue;
    const bool at_a = a.value == 0.0;
    if (!at_a && std::signbit(a.value) == std::signbit(b.value)) continue;
    if (b.value == 0.0 && k + 2 < samples.size()) continue;  // picked up as the next interval's left end
    const double root = at_a ? a.signal_nm : numerics::bracketed_root(f, a.signal_nm, b.signal_nm, settings.root_tolerance_nm);
    PhaseMatchPoint point;
    point.pressure_bar = env.pressure_bar;
    point.signal_nm = root;
    point.idler_nm = conjugate_idler(pump_nm, root);
    point.residual_rad_per_m = f(root);
    point.variant = variant;
    if (solution.roots.empty() || std::abs(solution.roots.back().signal_nm - root) > 2.0 * settings.root_tolerance_nm)
      solution.roots.push_back(point);
  }

  if (solution.roots.empty()) {
    std::ostringstream msg;
    msg << "no phase matching in signal window [" << window.lo_nm << ", " << window.hi_nm << "] nm at "
        << env.pressure_bar << " bar (" << to_string(variant) << " model)";
    throw NoRootError(msg.str());
  }
  std::sort(solution.roots.begin(), solution.roots.end(),
            [](const PhaseMatchPoint& x, const PhaseMatchPoint& y) { return x.signal_nm < y.signal_nm; });
  return solution;
}

std::vector<PhaseMatchPoint> TuningCurve::points() const {
  std::vector<PhaseMatchPoint> out;
  for (const auto& entry : entries)
    if (entry.solution) out.push_back(entry.solution->primary());
  return out;
}

std::vector<double> pressure_grid(double pmin, double pmax, double step) {
  std::vector<double> out;
  if (pmin > pmax) return out;
  if (pmin == pmax) return {pmin};
  if (!(step > 0.0)) throw ArgumentError("pressure_grid: step must be > 0");
  const double span = pmax - pmin;
  const auto n = static_cast<std::size_t>(std::floor(span / step + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) out.push_back(std::round((pmin + static_cast<double>(k) * step) * 1e12) / 1e12);
  if (pmax - out.back() > 1e-9) out.push_back(pmax);
  return out;
}

TuningCurve tuning_curve(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params,
                         double pmin, double pmax, double step, const SearchWindow& window, IndexVariant variant,
                         const SolverSettings& settings) {
  TuningCurve curve;
  curve.variant = variant;
  curve.pump_nm = pump.center_wavelength_nm;
  const auto pressures = pressure_grid(pmin, pmax, step);
  curve.entries = numerics::parallel_map<TuningEntry>(pressures.size(), [&](std::size_t k) {
    TuningEntry entry{pressures[k], std::nullopt};
    try {
      entry.solution = solve_tuning_point(env.at_pressure(pressures[k]), pump, params, window, variant, settings);
    } catch (const NoRootError&) {
    }
    return entry;
  });
  return curve;
}

TuningRate tuning_rate(const TuningCurve& curve) {
  const auto points = curve.points();
  if (points.empty()) throw ArgumentError("tuning_rate: curve has no solved points");
  std::vector<double> pressure, detuning, separation;
  for (const auto& p : points) {
    pressure.push_back(p.pressure_bar);
    detuning.push_back(p.detuning_thz(curve.pump_nm));
    separation.push_back(p.separation_thz());
  }
  auto span = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  TuningRate rate;
  rate.points = points.size();
  rate.detuning_slope_thz_per_bar = numerics::least_squares_slope(pressure, detuning);
  rate.detuning_span_thz = span(detuning);
  rate.separation_slope_thz_per_bar = numerics::least_squares_slope(pressure, separation);
  rate.separation_span_thz = span(separation);
  return rate;
}

}  // namespace pcfpair
