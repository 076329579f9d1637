#include "pcfpair/gasoptics.hpp"

#include <cmath>
#include <sstream>

#include "pcfpair/errors.hpp"

namespace pcfpair {
namespace {

void check_window(const WavelengthWindow& window, double wavelength_nm, const char* material) {
  if (!window.contains(wavelength_nm)) {
    std::ostringstream msg;
    msg << material << ": wavelength " << wavelength_nm << " nm outside validity window [" << window.min_nm << ", "
        << window.max_nm << "] nm";
    throw DomainError(msg.str());
  }
}

void check_terms(std::span<const SellmeierTerm> terms, const WavelengthWindow& window, const char* material) {
  if (terms.empty()) throw ArgumentError(std::string(material) + ": no Sellmeier terms");
  if (!(window.min_nm > 0.0 && window.min_nm < window.max_nm))
    throw ArgumentError(std::string(material) + ": invalid validity window");
  for (const auto& term : terms) {
    // A pole inside the window would make the index non-physical there.
    const double pole_nm = term.resonance_um * 1e3;
    if (pole_nm >= window.min_nm && pole_nm <= window.max_nm)
      throw ArgumentError(std::string(material) + ": Sellmeier pole inside validity window");
  }
}

}  // namespace

void GasModel::validate() const {
  check_terms(terms, window, species.empty() ? "gas" : species.c_str());
  if (!(reference_pressure_bar > 0.0) || !(reference_temperature_k > 0.0))
    throw ArgumentError("gas: reference conditions must be positive");
}

void SilicaModel::validate() const { check_terms(terms, window, "silica"); }

double sellmeier_susceptibility(std::span<const SellmeierTerm> terms, double wavelength_nm) {
  const double l2 = (wavelength_nm * 1e-3) * (wavelength_nm * 1e-3);
  double chi = 0.0;
  for (const auto& term : terms) chi += term.strength * l2 / (l2 - term.resonance_um * term.resonance_um);
  return chi;
}

double gas_excess_index(const GasModel& model, double wavelength_nm, double pressure_bar, double temperature_k) {
  check_window(model.window, wavelength_nm, model.species.empty() ? "gas" : model.species.c_str());
  if (!(pressure_bar >= 0.0)) throw ArgumentError("gas_index: pressure must be >= 0 bar");
  if (!(temperature_k > 0.0)) throw ArgumentError("gas_index: temperature must be > 0 K");
  const double chi = sellmeier_susceptibility(model.terms, wavelength_nm);
  // sqrt(1 + chi) - 1 without cancellation.
  const double reference_excess = chi / (std::sqrt(1.0 + chi) + 1.0);
  return reference_excess * (pressure_bar / model.reference_pressure_bar) *
         (model.reference_temperature_k / temperature_k);
}

double gas_index(const GasModel& model, double wavelength_nm, double pressure_bar, double temperature_k) {
  return 1.0 + gas_excess_index(model, wavelength_nm, pressure_bar, temperature_k);
}

double silica_index(const SilicaModel& model, double wavelength_nm) {
  check_window(model.window, wavelength_nm, "silica");
  return std::sqrt(1.0 + sellmeier_susceptibility(model.terms, wavelength_nm));
}

GasModel xenon_reference_model() {
  GasModel xe;
  xe.species = "xenon";
  // Published as B * l^2 / (l^2 - C) with C = 12.75e-3 um^2 and 0.561e-3 um^2.
  xe.terms = {{103701.61e-8, std::sqrt(12.75e-3)}, {31228.61e-8, std::sqrt(0.561e-3)}};
  xe.reference_pressure_bar = 1.0;
  xe.reference_temperature_k = 273.15;
  xe.window = {200.0, 2000.0};
  return xe;
}

SilicaModel fused_silica_reference_model() {
  SilicaModel si;
  si.terms = {{0.6961663, 0.0684043}, {0.4079426, 0.1162414}, {0.8974794, 9.896161}};
  si.window = {210.0, 3710.0};
  return si;
}

}  // namespace pcfpair
