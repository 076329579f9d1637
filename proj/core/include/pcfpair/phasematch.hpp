#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pcfpair/fibermodel.hpp"

namespace pcfpair {

enum class PulseShape { gaussian };

struct PumpSpec {
  double center_wavelength_nm = 400.0;
  double repetition_rate_mhz = 76.0;
  double pulse_duration_ps = 6.7;  // intensity FWHM
  double average_power_mw = 140.0;
  PulseShape shape = PulseShape::gaussian;

  void validate() const;
  double period_ps() const { return 1e6 / repetition_rate_mhz; }
  double repetition_rate_hz() const { return repetition_rate_mhz * 1e6; }
};

/// Peak power [W] = shape_factor * P_avg / (R_p * tau_fwhm); Gaussian factor 2 sqrt(ln2 / pi).
double derive_peak_power(const PumpSpec& pump);

struct NonlinearParams {
  double n2_reference_m2_per_w = 5.2e-23;  // at reference_pressure_bar
  double reference_pressure_bar = 1.0;
  double effective_area_factor = 1.5;      // A_eff = k * pi * R^2
  bool include_nonlinear_phase = true;     // the 2 gamma P_P term

  void validate() const;
};

/// gamma = 2 pi n2(P) / (lambda_p A_eff) in 1/(W km).
double nonlinear_gamma(const NonlinearParams& params, const OpticalEnvironment& env, double pump_wavelength_nm);

/// 1/lambda_i = 2/lambda_p - 1/lambda_s. Throws ArgumentError when the idler frequency is not positive.
double conjugate_idler(double pump_nm, double signal_nm);

/// 2 beta(pump) - beta(signal) - beta(idler) - nonlinear_phase for an arbitrary dispersion relation.
double four_wave_mismatch(const std::function<double(double)>& beta_of_nm, double pump_nm, double signal_nm,
                          double nonlinear_phase_rad_per_m);

/// Momentum mismatch [rad/m] with the idler fixed by energy conservation.
/// Throws BandError naming the leg that sits inside a pole guard (resonant variant).
double mismatch(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params,
                double signal_nm, IndexVariant variant = IndexVariant::resonant);

/// Mismatch with both daughter frequencies free; the two pump photons are taken
/// degenerate at (omega_s + omega_i) / 2.
double pair_mismatch(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params,
                     double signal_omega, double idler_omega, IndexVariant variant = IndexVariant::resonant);

struct PhaseMatchPoint {
  double pressure_bar = 0.0;
  double signal_nm = 0.0;
  double idler_nm = 0.0;
  double residual_rad_per_m = 0.0;
  IndexVariant variant = IndexVariant::resonant;

  /// |1/lambda_s + 1/lambda_i - 2/lambda_p| in 1/nm.
  double energy_residual(double pump_nm) const;
  /// (omega_s - omega_p) / 2 pi, i.e. half the signal-idler separation [THz].
  double detuning_thz(double pump_nm) const;
  /// (omega_s - omega_i) / 2 pi [THz].
  double separation_thz() const;
};

struct SearchWindow {
  double lo_nm = 220.0;
  double hi_nm = 330.0;
};

struct SolverSettings {
  double scan_step_nm = 0.1;
  double root_tolerance_nm = 1e-6;
};

/// All phase-matched signal wavelengths found in a window, sorted ascending.
struct PhaseMatchSolution {
  std::vector<PhaseMatchPoint> roots;

  bool multiple_roots() const { return roots.size() > 1; }
  /// Outermost root (largest detuning from the pump).
  const PhaseMatchPoint& primary() const { return roots.front(); }
};

/// Scan the signal window, excise every sample whose signal or conjugate idler
/// lies inside a pole guard, and refine each sign change in the remaining
/// sub-intervals. Throws NoRootError when nothing is found and BandError when
/// the pump itself is inside a guard.
PhaseMatchSolution solve_tuning_point(const OpticalEnvironment& env, const PumpSpec& pump,
                                      const NonlinearParams& params, const SearchWindow& window,
                                      IndexVariant variant = IndexVariant::resonant,
                                      const SolverSettings& settings = {});

struct TuningEntry {
  double pressure_bar = 0.0;
  std::optional<PhaseMatchSolution> solution;  // empty: no phase matching (gap)
};

struct TuningCurve {
  IndexVariant variant = IndexVariant::resonant;
  double pump_nm = 400.0;
  std::vector<TuningEntry> entries;

  std::vector<PhaseMatchPoint> points() const;  // primary roots, gaps skipped
};

/// Pressures pmin, pmin + step, ... up to pmax (pmax itself always included
/// when pmin <= pmax). Empty when pmin > pmax.
std::vector<double> pressure_grid(double pmin, double pmax, double step);

TuningCurve tuning_curve(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params,
                         double pmin, double pmax, double step, const SearchWindow& window,
                         IndexVariant variant = IndexVariant::resonant, const SolverSettings& settings = {});

struct TuningRate {
  double detuning_slope_thz_per_bar = 0.0;    // d[(omega_s - omega_p)/2pi]/dP
  double detuning_span_thz = 0.0;             // max - min over the curve
  double separation_slope_thz_per_bar = 0.0;  // d[(omega_s - omega_i)/2pi]/dP
  double separation_span_thz = 0.0;
  std::size_t points = 0;
};

/// Least-squares tuning slope and total span over the solved points.
/// Throws ArgumentError when the curve has no solved point.
TuningRate tuning_rate(const TuningCurve& curve);

}  // namespace pcfpair
