#pragma once

#include <stdexcept>
#include <string>

namespace pcfpair {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid caller-supplied argument (negative pressure, empty range, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A wavelength or parameter outside the domain where a model is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The cot term of the effective-index model is inside its pole guard.
class ResonancePoleError : public DomainError {
 public:
  ResonancePoleError(const std::string& what, int order, double wavelength_nm)
      : DomainError(what), order_(order), wavelength_nm_(wavelength_nm) {}

  int order() const noexcept { return order_; }
  double wavelength_nm() const noexcept { return wavelength_nm_; }

 private:
  int order_;
  double wavelength_nm_;
};

enum class Leg { pump, signal, idler };

inline const char* to_string(Leg leg) {
  switch (leg) {
    case Leg::pump: return "pump";
    case Leg::signal: return "signal";
    case Leg::idler: return "idler";
  }
  return "?";
}

/// One leg of a four-wave-mixing triple sits inside a resonance band.
class BandError : public DomainError {
 public:
  BandError(const std::string& what, Leg leg, int order, double wavelength_nm)
      : DomainError(what), leg_(leg), order_(order), wavelength_nm_(wavelength_nm) {}

  Leg leg() const noexcept { return leg_; }
  int order() const noexcept { return order_; }
  double wavelength_nm() const noexcept { return wavelength_nm_; }

 private:
  Leg leg_;
  int order_;
  double wavelength_nm_;
};

/// A bracketed search found no sign change (no ZDW, no phase matching).
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A statistic is undefined for the supplied data (e.g. zero singles).
class UndefinedStatisticError : public Error {
 public:
  using Error::Error;
};

/// Malformed or schema-violating configuration input.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& location, const std::string& message)
      : Error(location.empty() ? message : location + ": " + message), location_(location) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace pcfpair
