#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcfpair/countingsim.hpp"
#include "pcfpair/fibermodel.hpp"
#include "pcfpair/jointspectrum.hpp"
#include "pcfpair/phasematch.hpp"

namespace pcfpair {

inline constexpr int kConfigSchemaVersion = 1;

struct TuningSettings {
  double pmin_bar = 0.79;
  double pmax_bar = 1.32;
  double step_bar = 0.01;
  IndexVariant variant = IndexVariant::resonant;
};

struct JsiSettings {
  double pressure_bar = 0.79;
  std::size_t grid_points = 256;
  WavelengthRange signal_window{252.0, 286.0};
  WavelengthRange idler_window{665.0, 969.0};
  std::optional<double> signal_filter_center_nm;  // empty: centre on the solved signal
  double signal_filter_fwhm_nm = 4.5;
  FilterShape signal_filter_shape = FilterShape::rectangular;
  FilterShape idler_filter_shape = FilterShape::rectangular;
  std::vector<double> idler_bandwidths_nm{3, 5, 10, 15, 20, 25, 30, 35, 40, 50, 60, 70, 80, 90, 100};
};

struct SimulationConfig {
  SourceStats source;
  DetectorModel signal_detector;
  DetectorModel idler_detector;
  SimulationSettings settings;
  double histogram_bin_ps = 100.0;
  std::optional<double> histogram_span_ps;  // empty: 2.5 pump periods
  std::vector<double> sweep_powers_mw{14, 20, 28, 40, 56, 80, 112, 140};
};

struct ZdwSettings {
  double lo_nm = 340.0;
  double hi_nm = 600.0;
};

/// Everything a run needs. Flags on the command line override these values.
struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  OpticalEnvironment environment;  // materials, geometry, numerics, pressure, temperature
  SearchWindow signal_search;
  SolverSettings solver;
  ZdwSettings zdw;
  int max_resonance_order = 4;
  TransmittanceModel transmittance;
  PumpSpec pump;
  NonlinearParams nonlinear;
  TuningSettings tuning;
  JsiSettings jsi;
  SimulationConfig simulation;
  std::string output_directory = ".";

  /// Cross-field checks; throws ConfigError (or the domain validators' errors).
  void validate() const;
};

/// Built-in defaults: reference xenon and silica, the single-ring fiber, the 400 nm pump.
RunConfig default_config();

/// Parse YAML text. Every key must be known; missing sections keep their
/// defaults except schema_version, which is required. Errors carry
/// "source:line:column".
RunConfig parse_config(std::string_view text, std::string_view source_name = "<config>");

RunConfig load_config(const std::filesystem::path& path);

}  // namespace pcfpair
