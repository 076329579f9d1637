#pragma once

#include <numbers>

namespace pcfpair {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// First zero of J0, to the precision used by the capillary model.
inline constexpr double kBesselJ0FirstZero = 2.405;

/// Angular frequency [rad/s] of a vacuum wavelength [nm].
constexpr double angular_frequency(double wavelength_nm) {
  return 2.0 * kPi * kSpeedOfLight / (wavelength_nm * 1e-9);
}

/// Vacuum wavelength [nm] of an angular frequency [rad/s].
constexpr double wavelength_nm(double angular_frequency) {
  return 2.0 * kPi * kSpeedOfLight / angular_frequency * 1e9;
}

/// Optical frequency [THz] of a vacuum wavelength [nm].
constexpr double frequency_thz(double wavelength_nm) {
  return kSpeedOfLight / (wavelength_nm * 1e-9) * 1e-12;
}

}  // namespace pcfpair
