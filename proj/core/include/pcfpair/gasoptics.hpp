#pragma once

#include <span>
#include <string>
#include <vector>

namespace pcfpair {

/// One Sellmeier term B * lambda^2 / (lambda^2 - lambda_r^2).
struct SellmeierTerm {
  double strength = 0.0;       // B, dimensionless
  double resonance_um = 0.0;   // lambda_r [um]
};

struct WavelengthWindow {
  double min_nm = 0.0;
  double max_nm = 0.0;

  bool contains(double wavelength_nm) const { return wavelength_nm >= min_nm && wavelength_nm <= max_nm; }
};

/// Filling gas: Sellmeier sum at reference conditions, scaled to other
/// densities with the ideal-gas law.
struct GasModel {
  std::string species;
  std::vector<SellmeierTerm> terms;
  double reference_pressure_bar = 1.0;
  double reference_temperature_k = 273.15;
  WavelengthWindow window;

  void validate() const;
};

struct SilicaModel {
  std::vector<SellmeierTerm> terms;
  WavelengthWindow window;

  void validate() const;
};

inline constexpr double kDefaultTemperatureK = 293.0;

/// Susceptibility n^2 - 1 of a Sellmeier sum; no window check.
double sellmeier_susceptibility(std::span<const SellmeierTerm> terms, double wavelength_nm);

/// n - 1 of the gas at (P, T); exact zero at P = 0.
/// Throws DomainError outside the validity window, ArgumentError for P < 0 or T <= 0.
double gas_excess_index(const GasModel& model, double wavelength_nm, double pressure_bar,
                        double temperature_k = kDefaultTemperatureK);

double gas_index(const GasModel& model, double wavelength_nm, double pressure_bar,
                 double temperature_k = kDefaultTemperatureK);

/// Throws DomainError outside the validity window.
double silica_index(const SilicaModel& model, double wavelength_nm);

/// Xenon coefficients at 273.15 K and 1 bar (Boerzsoenyi et al., Appl. Opt. 47, 4856, 2008).
GasModel xenon_reference_model();

/// Fused silica, three-term Sellmeier (Malitson, JOSA 55, 1205, 1965).
SilicaModel fused_silica_reference_model();

}  // namespace pcfpair
