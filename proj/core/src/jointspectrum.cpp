#include "pcfpair/jointspectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pcfpair/constants.hpp"
#include "pcfpair/errors.hpp"
#include "pcfpair/numerics.hpp"

namespace pcfpair {

namespace {

// Standard deviation of the single-pump intensity spectrum in angular frequency.
double pump_sigma(const PumpSpec& pump) {
  return 2.0 * kPi * pump_spectral_fwhm_thz(pump) * 1e12 / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

// Second antiderivative of exp(-u^2 / 2 s^2).
double gaussian_g2(double u, double s) {
  const double root2 = std::numbers::sqrt2;
  return s * std::sqrt(kPi / 2.0) * u * std::erf(u / (s * root2)) + s * s * (std::exp(-u * u / (2.0 * s * s)) - 1.0);
}

// Mean of exp(-(x + y)^2 / 2 s^2) over x in [a, b], y in [c, d].
double cell_average(double a, double b, double c, double d, double s) {
  const double integral = gaussian_g2(b + d, s) - gaussian_g2(a + d, s) - gaussian_g2(b + c, s) + gaussian_g2(a + c, s);
  return std::max(0.0, integral / ((b - a) * (d - c)));
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

std::vector<double> cell_centres(const WavelengthRange& window, std::size_t n) {
  const double lo = angular_frequency(window.hi_nm);
  const double hi = angular_frequency(window.lo_nm);
  const double h = (hi - lo) / static_cast<double>(n);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + (static_cast<double>(k) + 0.5) * h;
  return out;
}

void check_window(const OpticalEnvironment& env, const WavelengthRange& window, const std::vector<double>& omega,
                  Leg leg, IndexVariant variant) {
  if (!(window.lo_nm > 0.0 && window.lo_nm < window.hi_nm)) throw ArgumentError("jsi_grid: invalid wavelength window");
  if (variant != IndexVariant::resonant) return;
  const double h = omega[1] - omega[0];
  std::vector<double> probes = {angular_frequency(window.hi_nm), angular_frequency(window.lo_nm)};
  for (double w : omega) probes.push_back(w);
  for (double w : omega) probes.push_back(w + 0.5 * h);
  double first_order = std::floor(tube_phase(env, window.lo_nm).psi / kPi);
  for (double w : probes) {
    const TubePhase phase = tube_phase(env, wavelength_nm(w));
    if (phase.pole_distance < env.numerics.pole_guard_rad || std::floor(phase.psi / kPi) != first_order) {
      std::ostringstream msg;
      msg << to_string(leg) << " window [" << window.lo_nm << ", " << window.hi_nm << "] nm intersects the order-"
          << phase.nearest_order << " resonance band near " << wavelength_nm(w) << " nm";
      throw BandError(msg.str(), leg, phase.nearest_order, wavelength_nm(w));
    }
  }
}

}  // namespace

double pump_spectral_fwhm_thz(const PumpSpec& pump) {
  pump.validate();
  return 2.0 * std::numbers::ln2 / (kPi * pump.pulse_duration_ps * 1e-12) * 1e-12;
}

double pump_pair_envelope(const PumpSpec& pump, double detuning) {
  const double s = pump_sigma(pump);
  return std::exp(-detuning * detuning / (4.0 * s * s));
}

double jsi_point(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params,
                 double signal_omega, double idler_omega, IndexVariant variant) {
  const double detuning = signal_omega + idler_omega - 2.0 * angular_frequency(pump.center_wavelength_nm);
  const double envelope = pump_pair_envelope(pump, detuning);
  const double dk = pair_mismatch(env, pump, params, signal_omega, idler_omega, variant);
  const double phase = sinc(dk * env.geometry.effective_length_cm * 1e-2 / 2.0);
  return envelope * envelope * phase * phase;
}

JsiGrid jsi_grid(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params,
                 const WavelengthRange& signal_window, const WavelengthRange& idler_window, std::size_t n,
                 IndexVariant variant) {
  if (n < 64) throw ArgumentError("jsi_grid: need at least 64 points per axis");
  pump.validate();
  JsiGrid grid;
  grid.signal_omega = cell_centres(signal_window, n);
  grid.idler_omega = cell_centres(idler_window, n);
  grid.pressure_bar = env.pressure_bar;
  grid.effective_length_cm = env.geometry.effective_length_cm;
  grid.pump_nm = pump.center_wavelength_nm;
  grid.variant = variant;
  check_window(env, signal_window, grid.signal_omega, Leg::signal, variant);
  check_window(env, idler_window, grid.idler_omega, Leg::idler, variant);

  const double s = pump_sigma(pump);
  const double two_pump = 2.0 * angular_frequency(pump.center_wavelength_nm);
  const double hs = grid.signal_step();
  const double hi = grid.idler_step();
  const double length_m = env.geometry.effective_length_cm * 1e-2;
  const double cutoff = 8.0 * s + 0.5 * (hs + hi);

  auto rows = numerics::parallel_map<std::vector<double>>(n, [&](std::size_t i) {
    std::vector<double> row(n, 0.0);
    const double ws = grid.signal_omega[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double wi = grid.idler_omega[j];
      const double centre = ws + wi - two_pump;
      if (std::abs(centre) > cutoff) continue;
      const double envelope = cell_average(centre - 0.5 * hs, centre + 0.5 * hs, -0.5 * hi, 0.5 * hi, s);
      if (envelope == 0.0) continue;
      const double dk = pair_mismatch(env, pump, params, ws, wi, variant);
      const double phase = sinc(dk * length_m / 2.0);
      row[j] = envelope * phase * phase;
    }
    return row;
  });

  grid.intensity.reserve(n * n);
  for (const auto& row : rows) grid.intensity.insert(grid.intensity.end(), row.begin(), row.end());
  grid.normalization = *std::max_element(grid.intensity.begin(), grid.intensity.end());
  if (!(grid.normalization > 0.0))
    throw NumericError("jsi_grid: the energy-conservation line does not cross the requested windows");
  for (double& v : grid.intensity) v /= grid.normalization;
  return grid;
}

void SpectralFilter::validate() const {
  if (!(fwhm_nm > 0.0)) throw ArgumentError("spectral filter: bandwidth must be > 0");
}

double SpectralFilter::cell_weight(double a_nm, double b_nm) const {
  if (a_nm > b_nm) std::swap(a_nm, b_nm);
  if (shape == FilterShape::gaussian) {
    const double x = 0.5 * (a_nm + b_nm) - center_nm;
    return std::exp(-4.0 * std::numbers::ln2 * x * x / (fwhm_nm * fwhm_nm));
  }
  const double lo = std::max(a_nm, center_nm - 0.5 * fwhm_nm);
  const double hi = std::min(b_nm, center_nm + 0.5 * fwhm_nm);
  return hi > lo ? (hi - lo) / (b_nm - a_nm) : 0.0;
}

namespace {

Spectrum make_spectrum(const std::vector<double>& omega, std::vector<double> values) {
  Spectrum out;
  out.omega = omega;
  out.wavelength_nm.reserve(omega.size());
  for (double w : omega) out.wavelength_nm.push_back(wavelength_nm(w));
  const double peak = *std::max_element(values.begin(), values.end());
  if (!(peak > 0.0)) throw UndefinedStatisticError("spectrum is identically zero");
  for (double v : values) out.total += v;
  for (double& v : values) v /= peak;
  out.values = std::move(values);
  const auto width = numerics::full_width_half_maximum(out.omega, out.values);
  out.peak_nm = out.wavelength_nm[width.peak_index];
  out.fwhm_thz = width.width() / (2.0 * kPi) * 1e-12;
  out.fwhm_nm = wavelength_nm(width.left) - wavelength_nm(width.right);
  return out;
}

// Wavelength edges of a frequency cell.
std::pair<double, double> cell_edges_nm(double omega, double step) {
  return {wavelength_nm(omega + 0.5 * step), wavelength_nm(omega - 0.5 * step)};
}

}  // namespace

Spectrum marginal(const JsiGrid& grid, Axis axis) {
  if (axis == Axis::signal) {
    std::vector<double> values(grid.rows(), 0.0);
    for (std::size_t i = 0; i < grid.rows(); ++i)
      for (double v : grid.row(i)) values[i] += v;
    return make_spectrum(grid.signal_omega, std::move(values));
  }
  std::vector<double> values(grid.cols(), 0.0);
  for (std::size_t i = 0; i < grid.rows(); ++i)
    for (std::size_t j = 0; j < grid.cols(); ++j) values[j] += grid.at(i, j);
  return make_spectrum(grid.idler_omega, std::move(values));
}

namespace {

std::vector<double> signal_weights(const JsiGrid& grid, const SpectralFilter& filter) {
  std::vector<double> w(grid.rows());
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    const auto [a, b] = cell_edges_nm(grid.signal_omega[i], grid.signal_step());
    w[i] = filter.cell_weight(a, b);
  }
  return w;
}

}  // namespace

Spectrum conditional_spectrum(const JsiGrid& grid, const SpectralFilter& signal_filter) {
  signal_filter.validate();
  const auto w = signal_weights(grid, signal_filter);
  std::vector<double> values(grid.cols(), 0.0);
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    if (w[i] == 0.0) continue;
    for (std::size_t j = 0; j < grid.cols(); ++j) values[j] += w[i] * grid.at(i, j);
  }
  return make_spectrum(grid.idler_omega, std::move(values));
}

FilteredRates filtered_rates(const JsiGrid& grid, const SpectralFilter& signal_filter, double idler_center_nm,
                             std::vector<double> bandwidths_nm, FilterShape idler_shape) {
  signal_filter.validate();
  if (bandwidths_nm.empty()) throw ArgumentError("filtered_rates: no bandwidths given");
  std::sort(bandwidths_nm.begin(), bandwidths_nm.end());
  if (!(bandwidths_nm.front() > 0.0)) throw ArgumentError("filtered_rates: bandwidths must be > 0");

  const auto ws = signal_weights(grid, signal_filter);
  std::vector<double> conditional(grid.cols(), 0.0);
  std::vector<double> unconditional(grid.cols(), 0.0);
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      unconditional[j] += grid.at(i, j);
      conditional[j] += ws[i] * grid.at(i, j);
    }
  }

  FilteredRates out;
  out.bandwidth_nm = bandwidths_nm;
  for (double b : bandwidths_nm) {
    const SpectralFilter idler_filter{idler_center_nm, b, idler_shape};
    double coincidences = 0.0, singles = 0.0;
    for (std::size_t j = 0; j < grid.cols(); ++j) {
      const auto [lo, hi] = cell_edges_nm(grid.idler_omega[j], grid.idler_step());
      const double w = idler_filter.cell_weight(lo, hi);
      coincidences += w * conditional[j];
      singles += w * unconditional[j];
    }
    out.coincidence.push_back(coincidences);
    out.singles.push_back(singles);
  }
  const double c_max = out.coincidence.back();
  const double s_max = out.singles.back();
  if (!(c_max > 0.0 && s_max > 0.0))
    throw UndefinedStatisticError("filtered_rates: widest idler filter collects no pairs");
  for (double& v : out.coincidence) v /= c_max;
  for (double& v : out.singles) v /= s_max;
  return out;
}

}  // namespace pcfpair
