#include "pcfpair/fibermodel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pcfpair/constants.hpp"
#include "pcfpair/errors.hpp"
#include "pcfpair/numerics.hpp"

namespace pcfpair {

void FiberGeometry::validate() const {
  if (!(core_radius_um > 0.0)) throw ArgumentError("geometry: core radius must be > 0");
  if (!(thickness_min_nm > 0.0 && thickness_min_nm <= tube_thickness_nm && tube_thickness_nm <= thickness_max_nm))
    throw ArgumentError("geometry: require 0 < t_min <= t <= t_max");
  if (!(effective_length_cm > 0.0 && effective_length_cm <= length_cm))
    throw ArgumentError("geometry: require 0 < L_eff <= L");
}

void OpticalEnvironment::validate() const {
  geometry.validate();
  gas.validate();
  silica.validate();
  if (!(pressure_bar >= 0.0)) throw ArgumentError("environment: pressure must be >= 0 bar");
  if (!(temperature_k > 0.0)) throw ArgumentError("environment: temperature must be > 0 K");
  if (!(numerics.pole_guard_rad > 0.0 && numerics.pole_guard_rad < kPi / 2))
    throw ArgumentError("numerics: pole guard must lie in (0, pi/2)");
}

OpticalEnvironment OpticalEnvironment::at_pressure(double p) const {
  OpticalEnvironment out = *this;
  out.pressure_bar = p;
  return out;
}

OpticalEnvironment OpticalEnvironment::at_thickness(double t) const {
  OpticalEnvironment out = *this;
  out.geometry.tube_thickness_nm = t;
  out.geometry.thickness_min_nm = t;
  out.geometry.thickness_max_nm = t;
  return out;
}

const char* to_string(IndexVariant variant) {
  return variant == IndexVariant::resonant ? "resonant" : "baseline";
}

namespace {

struct LocalIndices {
  double gas_excess;  // n_gas - 1
  double silica;      // n_si
};

LocalIndices indices_at(const OpticalEnvironment& env, double wavelength_nm) {
  return {gas_excess_index(env.gas, wavelength_nm, env.pressure_bar, env.temperature_k),
          silica_index(env.silica, wavelength_nm)};
}

TubePhase phase_from(double wavelength_nm, double thickness_nm, const LocalIndices& idx) {
  const double n_gas = 1.0 + idx.gas_excess;
  const double k0 = 2.0 * kPi / (wavelength_nm * 1e-9);
  TubePhase out;
  out.psi = k0 * thickness_nm * 1e-9 * std::sqrt(idx.silica * idx.silica - n_gas * n_gas);
  out.nearest_order = static_cast<int>(std::lround(out.psi / kPi));
  out.pole_distance = std::abs(out.psi - kPi * out.nearest_order);
  return out;
}

[[noreturn]] void throw_pole(double wavelength_nm, const TubePhase& phase, double guard) {
  std::ostringstream msg;
  msg << "resonance pole: lambda = " << wavelength_nm << " nm is within " << guard << " rad of the order-"
      << phase.nearest_order << " cladding resonance (|Psi - m pi| = " << phase.pole_distance << ")";
  throw ResonancePoleError(msg.str(), phase.nearest_order, wavelength_nm);
}

}  // namespace

TubePhase tube_phase(const OpticalEnvironment& env, double wavelength_nm, double thickness_nm) {
  return phase_from(wavelength_nm, thickness_nm, indices_at(env, wavelength_nm));
}

TubePhase tube_phase(const OpticalEnvironment& env, double wavelength_nm) {
  return tube_phase(env, wavelength_nm, env.geometry.tube_thickness_nm);
}

bool inside_pole_guard(const OpticalEnvironment& env, double wavelength_nm) {
  return tube_phase(env, wavelength_nm).pole_distance < env.numerics.pole_guard_rad;
}

double effective_index_excess(const OpticalEnvironment& env, double wavelength_nm, IndexVariant variant) {
  const LocalIndices idx = indices_at(env, wavelength_nm);
  const double n_gas = 1.0 + idx.gas_excess;
  const double k0 = 2.0 * kPi / (wavelength_nm * 1e-9);
  const double radius = env.geometry.core_radius_um * 1e-6;
  const double j2 = kBesselJ0FirstZero * kBesselJ0FirstZero;

  const double capillary = j2 / (2.0 * k0 * k0 * n_gas * radius * radius);
  double excess = idx.gas_excess - capillary;
  if (variant == IndexVariant::baseline) return excess;

  const TubePhase phase = phase_from(wavelength_nm, env.geometry.tube_thickness_nm, idx);
  if (phase.pole_distance < env.numerics.pole_guard_rad) throw_pole(wavelength_nm, phase, env.numerics.pole_guard_rad);
  const double eps = (idx.silica * idx.silica) / (n_gas * n_gas);
  const double prefactor = j2 / (k0 * k0 * k0 * n_gas * n_gas * radius * radius * radius);
  const double resonance = prefactor * (1.0 / std::tan(phase.psi)) / std::sqrt(eps - 1.0) * (eps + 1.0) / 2.0;
  return excess - resonance;
}

double effective_index(const OpticalEnvironment& env, double wavelength_nm, IndexVariant variant) {
  return 1.0 + effective_index_excess(env, wavelength_nm, variant);
}

double propagation_beta(const OpticalEnvironment& env, double wavelength_nm, IndexVariant variant) {
  return 2.0 * kPi / (wavelength_nm * 1e-9) * effective_index(env, wavelength_nm, variant);
}

namespace {

// omega/c * (n_eff - 1); differs from beta by omega/c, whose second derivative vanishes.
double excess_beta(const OpticalEnvironment& env, double omega, IndexVariant variant) {
  return omega / kSpeedOfLight * effective_index_excess(env, wavelength_nm(omega), variant);
}

void check_stencil(const OpticalEnvironment& env, double omega, double step, IndexVariant variant) {
  if (variant == IndexVariant::baseline) return;
  const double guard = env.numerics.pole_guard_rad;
  const TubePhase lo = tube_phase(env, wavelength_nm(omega + step));
  const TubePhase hi = tube_phase(env, wavelength_nm(omega - step));
  for (const auto& [phase, omega_k] : {std::pair{lo, omega + step}, std::pair{hi, omega - step}}) {
    if (phase.pole_distance < guard) {
      std::ostringstream msg;
      msg << "GVD stencil at lambda = " << wavelength_nm(omega) << " nm touches the order-" << phase.nearest_order
          << " resonance guard; shrink the step or move lambda away from the band";
      throw ResonancePoleError(msg.str(), phase.nearest_order, wavelength_nm(omega_k));
    }
  }
  if (std::floor(lo.psi / kPi) != std::floor(hi.psi / kPi)) {
    std::ostringstream msg;
    msg << "GVD stencil at lambda = " << wavelength_nm(omega) << " nm straddles a resonance pole; shrink the step";
    throw ResonancePoleError(msg.str(), static_cast<int>(std::ceil(hi.psi / kPi)), wavelength_nm(omega));
  }
}

double second_difference(const OpticalEnvironment& env, double omega, double step, IndexVariant variant) {
  check_stencil(env, omega, step, variant);
  const double plus = excess_beta(env, omega + step, variant);
  const double mid = excess_beta(env, omega, variant);
  const double minus = excess_beta(env, omega - step, variant);
  return (plus - 2.0 * mid + minus) / (step * step) * 1e27;  // s^2/m -> fs^2/mm
}

}  // namespace

GvdResult group_velocity_dispersion(const OpticalEnvironment& env, double wavelength_nm_, IndexVariant variant) {
  const auto& num = env.numerics;
  if (!(num.gvd_step_thz > 0.0)) throw ArgumentError("numerics: GVD step must be > 0");
  const double omega = angular_frequency(wavelength_nm_);
  if (variant == IndexVariant::resonant && inside_pole_guard(env, wavelength_nm_))
    throw_pole(wavelength_nm_, tube_phase(env, wavelength_nm_), num.pole_guard_rad);

  double step = 2.0 * kPi * num.gvd_step_thz * 1e12;
  double previous = second_difference(env, omega, step, variant);
  for (int r = 1; r <= num.gvd_max_refinements; ++r) {
    step *= 0.5;
    const double current = second_difference(env, omega, step, variant);
    const double scale = std::max(std::abs(current), num.gvd_absolute_floor_fs2_per_mm);
    if (std::abs(current - previous) <= num.gvd_relative_tolerance * scale)
      return {current, step / (2.0 * kPi) * 1e-12, r};
    previous = current;
  }
  std::ostringstream msg;
  msg << "GVD at " << wavelength_nm_ << " nm did not converge after " << num.gvd_max_refinements << " step halvings";
  throw NumericError(msg.str());
}

double find_zdw(const OpticalEnvironment& env, double lo_nm, double hi_nm, IndexVariant variant) {
  if (!(lo_nm < hi_nm)) throw ArgumentError("find_zdw: bracket must satisfy lo < hi");
  if (variant == IndexVariant::resonant) {
    const TubePhase lo = tube_phase(env, lo_nm);
    const TubePhase hi = tube_phase(env, hi_nm);
    // Psi decreases monotonically with wavelength, so equal floors mean no pole inside.
    const bool touches = lo.pole_distance < env.numerics.pole_guard_rad ||
                         hi.pole_distance < env.numerics.pole_guard_rad ||
                         std::floor(lo.psi / kPi) != std::floor(hi.psi / kPi);
    if (touches) {
      std::ostringstream msg;
      msg << "find_zdw: bracket [" << lo_nm << ", " << hi_nm << "] nm touches a resonance band";
      throw ResonancePoleError(msg.str(), hi.nearest_order, hi_nm);
    }
  }
  auto beta2 = [&](double l) { return group_velocity_dispersion(env, l, variant).beta2_fs2_per_mm; };
  try {
    return numerics::bracketed_root(beta2, lo_nm, hi_nm, env.numerics.zdw_tolerance_nm);
  } catch (const NoRootError&) {
    std::ostringstream msg;
    msg << "find_zdw: beta2 does not change sign on [" << lo_nm << ", " << hi_nm << "] nm at " << env.pressure_bar
        << " bar";
    throw NoRootError(msg.str());
  }
}

std::vector<ResonanceLine> resonance_wavelengths(const OpticalEnvironment& env, int max_order, double thickness_nm) {
  if (max_order < 1) throw ArgumentError("resonance_wavelengths: m_max must be >= 1");
  if (!(thickness_nm > 0.0)) throw ArgumentError("resonance_wavelengths: thickness must be > 0");
  const auto& num = env.numerics;
  auto in_windows = [&](double l) { return env.silica.window.contains(l) && env.gas.window.contains(l); };

  std::vector<ResonanceLine> out;
  for (int m = 1; m <= max_order; ++m) {
    const double scale = 2.0 * thickness_nm / m;
    double lambda = scale * 1.05;  // sqrt(n_si^2 - 1) is close to 1.05 for silica in the visible
    bool dropped = false;
    bool converged = false;
    int it = 0;
    double step = 0.0;
    for (; it < num.resonance_max_iterations; ++it) {
      if (!in_windows(lambda)) {
        dropped = true;
        break;
      }
      const LocalIndices idx = indices_at(env, lambda);
      const double n_gas = 1.0 + idx.gas_excess;
      const double next = scale * std::sqrt(idx.silica * idx.silica - n_gas * n_gas);
      step = next - lambda;
      lambda = next;
      if (std::abs(step) < num.resonance_tolerance_nm) {
        converged = true;
        ++it;
        break;
      }
    }
    if (dropped || !in_windows(lambda)) continue;
    if (!converged) {
      std::ostringstream msg;
      msg << "resonance_wavelengths: order " << m << " at t = " << thickness_nm << " nm did not converge in "
          << num.resonance_max_iterations << " iterations (last lambda " << lambda << " nm, last step " << step
          << " nm)";
      throw NumericError(msg.str());
    }
    out.push_back({m, lambda, it});
  }
  return out;
}

std::vector<ResonanceLine> resonance_wavelengths(const OpticalEnvironment& env, int max_order) {
  return resonance_wavelengths(env, max_order, env.geometry.tube_thickness_nm);
}

std::vector<ResonanceBand> resonance_bands(const OpticalEnvironment& env, int max_order) {
  const auto thin = resonance_wavelengths(env, max_order, env.geometry.thickness_min_nm);
  const auto thick = resonance_wavelengths(env, max_order, env.geometry.thickness_max_nm);
  const double margin = env.numerics.band_margin_nm;
  std::vector<ResonanceBand> out;
  for (const auto& a : thin) {
    auto b = std::find_if(thick.begin(), thick.end(), [&](const ResonanceLine& l) { return l.order == a.order; });
    if (b == thick.end()) continue;
    out.push_back({a.order, std::min(a.wavelength_nm, b->wavelength_nm) - margin,
                   std::max(a.wavelength_nm, b->wavelength_nm) + margin});
  }
  return out;
}

void TransmittanceModel::validate() const {
  if (!(length_cm > 0.0)) throw ArgumentError("transmittance: length must be > 0");
  if (!(capillary_loss_coefficient >= 0.0)) throw ArgumentError("transmittance: loss coefficient must be >= 0");
  if (!(notch_depth >= 0.0 && notch_depth < 1.0)) throw ArgumentError("transmittance: notch depth must be in [0, 1)");
  if (!(notch_relative_width > 0.0)) throw ArgumentError("transmittance: notch width must be > 0");
  if (thickness_samples < 1) throw ArgumentError("transmittance: need at least one thickness sample");
  if (max_order < 1) throw ArgumentError("transmittance: max order must be >= 1");
}

double capillary_loss_per_m(const OpticalEnvironment& env, double wavelength_nm, const TransmittanceModel& model) {
  const double lambda_um = wavelength_nm * 1e-3;
  const double r_um = env.geometry.core_radius_um;
  return model.capillary_loss_coefficient * lambda_um * lambda_um / (r_um * r_um * r_um);
}

TransmittanceProfile::TransmittanceProfile(OpticalEnvironment env, TransmittanceModel model)
    : env_(std::move(env)), model_(model) {
  model_.validate();
  const auto& g = env_.geometry;
  const int samples = g.thickness_max_nm > g.thickness_min_nm ? model_.thickness_samples : 1;
  thicknesses_ = numerics::linspace(g.thickness_min_nm, g.thickness_max_nm, static_cast<std::size_t>(samples));
  for (double t : thicknesses_) lines_.push_back(resonance_wavelengths(env_, model_.max_order, t));
}

double TransmittanceProfile::operator()(double wavelength_nm) const {
  // Material windows are part of the contract even though the notch model never reads the indices.
  (void)silica_index(env_.silica, wavelength_nm);
  (void)gas_index(env_.gas, wavelength_nm, env_.pressure_bar, env_.temperature_k);

  double log_notch = 0.0;
  for (const auto& lines : lines_) {
    double segment = 1.0;
    for (const auto& line : lines) {
      const double hwhm = model_.notch_relative_width * line.wavelength_nm;
      const double x = wavelength_nm - line.wavelength_nm;
      segment *= 1.0 - model_.notch_depth * hwhm * hwhm / (x * x + hwhm * hwhm);
    }
    log_notch += std::log(segment);
  }
  log_notch /= static_cast<double>(lines_.size());
  const double loss = capillary_loss_per_m(env_, wavelength_nm, model_) * model_.length_cm * 1e-2;
  return std::exp(log_notch - loss);
}

double transmittance(const OpticalEnvironment& env, double wavelength_nm, const TransmittanceModel& model) {
  return TransmittanceProfile(env, model)(wavelength_nm);
}

}  // namespace pcfpair
