#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcfpair/phasematch.hpp"

namespace pcfpair {

/// Intensity FWHM [THz] of a transform-limited pump pulse (Gaussian: 2 ln2 / (pi tau)).
double pump_spectral_fwhm_thz(const PumpSpec& pump);

/// Spectral amplitude of the two-pump-photon sum frequency at detuning
/// Omega = omega_s + omega_i - 2 omega_p [rad/s]: a Gaussian whose variance is
/// twice the single-pump spectral variance, unity at Omega = 0.
double pump_pair_envelope(const PumpSpec& pump, double detuning_rad_per_s);

struct WavelengthRange {
  double lo_nm = 0.0;
  double hi_nm = 0.0;
};

/// Joint spectral intensity sampled on cells uniform in angular frequency.
/// Each cell holds the pump envelope averaged over the cell (the envelope is
/// far narrower than any practical cell) times sinc^2 at the cell centre.
struct JsiGrid {
  std::vector<double> signal_omega;  // ascending cell centres [rad/s]
  std::vector<double> idler_omega;   // ascending cell centres [rad/s]
  std::vector<double> intensity;     // row-major [signal][idler], max == 1
  double normalization = 0.0;        // raw maximum before normalising
  double pressure_bar = 0.0;
  double effective_length_cm = 0.0;
  double pump_nm = 0.0;
  IndexVariant variant = IndexVariant::resonant;

  std::size_t rows() const { return signal_omega.size(); }
  std::size_t cols() const { return idler_omega.size(); }
  double at(std::size_t i, std::size_t j) const { return intensity[i * cols() + j]; }
  double signal_step() const { return signal_omega[1] - signal_omega[0]; }
  double idler_step() const { return idler_omega[1] - idler_omega[0]; }
  std::span<const double> row(std::size_t i) const { return {intensity.data() + i * cols(), cols()}; }
};

/// Pointwise |envelope * sinc(dk L_eff / 2)|^2 (not normalised, no cell averaging).
double jsi_point(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params,
                 double signal_omega, double idler_omega, IndexVariant variant = IndexVariant::resonant);

/// n x n grid over the two windows; n >= 64. Throws BandError when a window
/// crosses a resonance pole guard.
JsiGrid jsi_grid(const OpticalEnvironment& env, const PumpSpec& pump, const NonlinearParams& params,
                 const WavelengthRange& signal_window, const WavelengthRange& idler_window, std::size_t n,
                 IndexVariant variant = IndexVariant::resonant);

enum class Axis { signal, idler };
enum class FilterShape { rectangular, gaussian };

struct SpectralFilter {
  double center_nm = 0.0;
  double fwhm_nm = 0.0;
  FilterShape shape = FilterShape::rectangular;

  void validate() const;
  /// Mean transmission over the wavelength interval [a, b].
  double cell_weight(double a_nm, double b_nm) const;
};

struct Spectrum {
  std::vector<double> omega;          // ascending [rad/s]
  std::vector<double> wavelength_nm;  // matching wavelengths (descending)
  std::vector<double> values;         // normalised to peak 1
  double total = 0.0;                 // raw sum before normalising
  double peak_nm = 0.0;
  double fwhm_nm = 0.0;
  double fwhm_thz = 0.0;
};

/// Projection of the JSI onto one axis.
Spectrum marginal(const JsiGrid& grid, Axis axis);

/// Idler spectrum of pairs whose signal passes the filter.
Spectrum conditional_spectrum(const JsiGrid& grid, const SpectralFilter& signal_filter);

struct FilteredRates {
  std::vector<double> bandwidth_nm;  // ascending
  std::vector<double> coincidence;   // normalised to the widest bandwidth
  std::vector<double> singles;
};

/// Coincidence and idler-singles integrals versus idler filter bandwidth, the
/// idler filter centred on idler_center_nm. Bandwidths are sorted ascending.
FilteredRates filtered_rates(const JsiGrid& grid, const SpectralFilter& signal_filter, double idler_center_nm,
                             std::vector<double> bandwidths_nm, FilterShape idler_shape = FilterShape::rectangular);

}  // namespace pcfpair
