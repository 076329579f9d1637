#pragma once

#include <vector>

#include "pcfpair/gasoptics.hpp"

namespace pcfpair {

struct FiberGeometry {
  double core_radius_um = 10.25;
  double tube_thickness_nm = 300.0;
  double thickness_min_nm = 300.0;  // inhomogeneity range along the fiber
  double thickness_max_nm = 340.0;
  int tube_count = 6;               // informational; the analytic model ignores it
  double length_cm = 65.0;
  double effective_length_cm = 3.0;

  void validate() const;
};

/// Tolerances and step sizes shared by the dispersion and resonance solvers.
struct FiberNumerics {
  double pole_guard_rad = 0.05;          // refuse the cot term when |Psi - m pi| is below this
  double gvd_step_thz = 0.2;             // initial finite-difference step (frequency, not angular)
  double gvd_relative_tolerance = 1e-3;
  double gvd_absolute_floor_fs2_per_mm = 1e-3;  // round-off in the second difference sits near 1e-9
  int gvd_max_refinements = 10;
  double zdw_tolerance_nm = 0.01;
  double resonance_tolerance_nm = 1e-6;
  int resonance_max_iterations = 200;
  double band_margin_nm = 2.0;
};

struct OpticalEnvironment {
  FiberGeometry geometry;
  GasModel gas;
  SilicaModel silica;
  double pressure_bar = 0.0;
  double temperature_k = kDefaultTemperatureK;
  FiberNumerics numerics;

  void validate() const;
  OpticalEnvironment at_pressure(double pressure_bar) const;
  /// Copy with a single homogeneous tube thickness (range collapsed to t).
  OpticalEnvironment at_thickness(double thickness_nm) const;
};

enum class IndexVariant {
  resonant,  // capillary + cladding-resonance (cot) term
  baseline,  // capillary only
};

const char* to_string(IndexVariant variant);

/// Transverse phase across a tube wall, Psi = k0 t sqrt(n_si^2 - n_gas^2).
struct TubePhase {
  double psi = 0.0;
  int nearest_order = 0;       // m minimising |Psi - m pi|
  double pole_distance = 0.0;  // |Psi - m pi| [rad]
};

TubePhase tube_phase(const OpticalEnvironment& env, double wavelength_nm, double thickness_nm);
TubePhase tube_phase(const OpticalEnvironment& env, double wavelength_nm);

/// True when the resonant variant refuses this wavelength.
bool inside_pole_guard(const OpticalEnvironment& env, double wavelength_nm);

/// n_eff - 1 of the LP01 mode, computed without forming 1 + small.
double effective_index_excess(const OpticalEnvironment& env, double wavelength_nm, IndexVariant variant);

/// LP01 effective index of the gas-filled single-ring fiber (extended
/// Marcatili-Schmeltzer capillary model). The resonant variant throws
/// ResonancePoleError inside the pole guard; material DomainErrors propagate.
double effective_index(const OpticalEnvironment& env, double wavelength_nm, IndexVariant variant);

/// beta = k0 n_eff [rad/m].
double propagation_beta(const OpticalEnvironment& env, double wavelength_nm, IndexVariant variant);

struct GvdResult {
  double beta2_fs2_per_mm = 0.0;
  double step_thz = 0.0;  // finite-difference step behind the returned value
  int refinements = 0;
};

/// d^2 beta / d omega^2 by central differences in angular frequency with
/// automatic step halving. Throws ResonancePoleError when the stencil
/// straddles or touches a pole guard.
GvdResult group_velocity_dispersion(const OpticalEnvironment& env, double wavelength_nm,
                                    IndexVariant variant = IndexVariant::resonant);

/// Zero-dispersion wavelength inside [lo, hi]. Throws NoRootError without a
/// sign change and ResonancePoleError when the bracket touches a pole.
double find_zdw(const OpticalEnvironment& env, double lo_nm, double hi_nm,
                IndexVariant variant = IndexVariant::resonant);

struct ResonanceLine {
  int order = 0;
  double wavelength_nm = 0.0;
  int iterations = 0;
};

/// Solutions of Psi(t) = m pi for m = 1..m_max by fixed-point iteration;
/// orders whose solution leaves the material windows are dropped.
std::vector<ResonanceLine> resonance_wavelengths(const OpticalEnvironment& env, int max_order,
                                                 double thickness_nm);
std::vector<ResonanceLine> resonance_wavelengths(const OpticalEnvironment& env, int max_order);

struct ResonanceBand {
  int order = 0;
  double low_nm = 0.0;
  double high_nm = 0.0;
};

/// [lambda_m(t_min), lambda_m(t_max)] per order, widened by the band margin.
std::vector<ResonanceBand> resonance_bands(const OpticalEnvironment& env, int max_order);

/// Phenomenological transmittance model: capillary loss times one Lorentzian
/// notch per resonance order and thickness sample.
struct TransmittanceModel {
  double length_cm = 30.0;
  double capillary_loss_coefficient = 800.0;  // alpha0 [1/m] = coeff * lambda[um]^2 / R[um]^3
  double notch_depth = 0.9;                   // fractional dip depth, [0, 1)
  double notch_relative_width = 0.02;         // Lorentzian HWHM as a fraction of lambda_m
  int thickness_samples = 9;
  int max_order = 4;

  void validate() const;
};

double capillary_loss_per_m(const OpticalEnvironment& env, double wavelength_nm, const TransmittanceModel& model);

/// Transmittance evaluator with resonance lines solved once up front.
/// A thickness range is modelled as equal-length segments in cascade
/// (geometric mean over thickness samples).
class TransmittanceProfile {
 public:
  TransmittanceProfile(OpticalEnvironment env, TransmittanceModel model);

  double operator()(double wavelength_nm) const;
  const std::vector<std::vector<ResonanceLine>>& lines() const { return lines_; }
  const std::vector<double>& thicknesses_nm() const { return thicknesses_; }

 private:
  OpticalEnvironment env_;
  TransmittanceModel model_;
  std::vector<double> thicknesses_;
  std::vector<std::vector<ResonanceLine>> lines_;
};

double transmittance(const OpticalEnvironment& env, double wavelength_nm, const TransmittanceModel& model);

}  // namespace pcfpair
