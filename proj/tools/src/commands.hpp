#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "output.hpp"
#include "pcfpair/config.hpp"

namespace pcfpair::cli {

/// What every command receives: the resolved configuration, where to write, and
/// the provenance to stamp. Flags have already been folded into `config`.
struct Context {
  RunConfig config;
  std::filesystem::path out_dir;
  Provenance provenance;
  std::ostream* out = nullptr;  // one-line-per-file summary and small JSON results
};

struct TuningArgs {
  std::optional<double> pmin, pmax, step;
  std::optional<std::string> variant;
};

struct JsiArgs {
  std::optional<double> pressure;
  std::optional<std::size_t> n;
  std::vector<double> signal_window, idler_window;  // empty or {lo, hi}
};

struct FilteredArgs {
  std::optional<double> pressure;
  std::vector<double> bandwidths;
};

struct TransmittanceArgs {
  double lmin = 250.0;
  double lmax = 1400.0;
  std::size_t points = 2301;
  std::optional<double> thickness;  // collapses the thickness range
};

struct MonteCarloArgs {
  std::optional<std::uint64_t> pulses, seed;
  std::optional<double> power;
  std::optional<double> mu;  // overrides c P^2
  bool noiseless = false;
  std::optional<std::string> tags_out;
};

struct SweepArgs {
  std::vector<double> powers;
  std::optional<std::uint64_t> pulses, seed;
};

struct ZdwArgs {
  std::optional<double> pressure;
  std::vector<double> bracket;
  std::optional<std::string> variant;
};

int cmd_tuning_curve(const Context& ctx, const TuningArgs& args);
int cmd_jsi(const Context& ctx, const JsiArgs& args);
int cmd_filtered_rates(const Context& ctx, const FilteredArgs& args);
int cmd_transmittance(const Context& ctx, const TransmittanceArgs& args);
int cmd_montecarlo(const Context& ctx, const MonteCarloArgs& args);
int cmd_power_sweep(const Context& ctx, const SweepArgs& args);
int cmd_zdw(const Context& ctx, const ZdwArgs& args);

}  // namespace pcfpair::cli
