#include "pcfpair/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "pcfpair/errors.hpp"

namespace pcfpair {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  std::string where(const YAML::Node& node) const {
    const YAML::Mark mark = node.Mark();
    if (mark.is_null()) return source_;
    std::ostringstream out;
    out << source_ << ':' << mark.line + 1 << ':' << mark.column + 1;
    return out.str();
  }

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    throw ConfigError(where(node), message);
  }

  // Rejects anything that is not a mapping and any key outside `allowed`.
  void check_section(const YAML::Node& node, const std::string& path, std::initializer_list<std::string_view> allowed) const {
    if (!node.IsMap()) fail(node, "section '" + path + "' must be a mapping");
    for (const auto& entry : node) {
      const auto key = entry.first.as<std::string>();
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) fail(entry.first, "unknown key '" + key + "' in section '" + path + "'");
    }
  }

  template <typename T>
  T scalar(const YAML::Node& node, const std::string& path, const char* what) const {
    if (!node.IsScalar()) fail(node, "'" + path + "' must be " + what);
    try {
      return node.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(node, "'" + path + "' must be " + what);
    }
  }

  void number(const YAML::Node& section, const char* key, const std::string& path, double& out) const {
    if (auto n = section[key]) out = scalar<double>(n, path + "." + key, "a number");
  }

  void integer(const YAML::Node& section, const char* key, const std::string& path, int& out) const {
    if (auto n = section[key]) out = scalar<int>(n, path + "." + key, "an integer");
  }

  void count(const YAML::Node& section, const char* key, const std::string& path, std::uint64_t& out) const {
    if (auto n = section[key]) {
      const auto v = scalar<double>(n, path + "." + key, "a non-negative integer");
      if (v < 0.0 || v != static_cast<double>(static_cast<std::uint64_t>(v)))
        fail(n, "'" + path + "." + key + "' must be a non-negative integer");
      out = static_cast<std::uint64_t>(v);
    }
  }

  void boolean(const YAML::Node& section, const char* key, const std::string& path, bool& out) const {
    if (auto n = section[key]) out = scalar<bool>(n, path + "." + key, "true or false");
  }

  void text(const YAML::Node& section, const char* key, const std::string& path, std::string& out) const {
    if (auto n = section[key]) out = scalar<std::string>(n, path + "." + key, "a string");
  }

  void numbers(const YAML::Node& section, const char* key, const std::string& path, std::vector<double>& out) const {
    auto n = section[key];
    if (!n) return;
    if (!n.IsSequence()) fail(n, "'" + path + "." + key + "' must be a list of numbers");
    out.clear();
    for (const auto& item : n) out.push_back(scalar<double>(item, path + "." + key, "a list of numbers"));
  }

  void range(const YAML::Node& section, const char* key, const std::string& path, double& lo, double& hi) const {
    auto n = section[key];
    if (!n) return;
    if (!n.IsSequence() || n.size() != 2) fail(n, "'" + path + "." + key + "' must be a two-element list [lo, hi]");
    lo = scalar<double>(n[0], path + "." + key, "a two-element list [lo, hi]");
    hi = scalar<double>(n[1], path + "." + key, "a two-element list [lo, hi]");
    if (!(lo < hi)) fail(n, "'" + path + "." + key + "' needs lo < hi");
  }

  template <typename E>
  void choice(const YAML::Node& section, const char* key, const std::string& path, E& out,
              std::initializer_list<std::pair<std::string_view, E>> options) const {
    auto n = section[key];
    if (!n) return;
    const auto value = scalar<std::string>(n, path + "." + key, "a string");
    std::string names;
    for (const auto& [name, e] : options) {
      if (value == name) {
        out = e;
        return;
      }
      names += names.empty() ? std::string(name) : ", " + std::string(name);
    }
    fail(n, "'" + path + "." + key + "' must be one of: " + names);
  }

 private:
  std::string source_;
};

std::vector<SellmeierTerm> read_terms(const Reader& r, const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() == 0) r.fail(node, "'" + path + "' must be a non-empty list of terms");
  std::vector<SellmeierTerm> terms;
  for (const auto& item : node) {
    r.check_section(item, path + "[]", {"strength", "resonance_um", "resonance_um2"});
    SellmeierTerm term;
    if (!item["strength"]) r.fail(item, "'" + path + "[]' needs 'strength'");
    r.number(item, "strength", path, term.strength);
    const bool has_um = static_cast<bool>(item["resonance_um"]);
    const bool has_um2 = static_cast<bool>(item["resonance_um2"]);
    if (has_um == has_um2) r.fail(item, "'" + path + "[]' needs exactly one of 'resonance_um' or 'resonance_um2'");
    if (has_um) {
      r.number(item, "resonance_um", path, term.resonance_um);
    } else {
      double c = 0.0;
      r.number(item, "resonance_um2", path, c);
      if (c < 0.0) r.fail(item["resonance_um2"], "'" + path + ".resonance_um2' must be >= 0");
      term.resonance_um = std::sqrt(c);
    }
    terms.push_back(term);
  }
  return terms;
}

void read_materials(const Reader& r, const YAML::Node& node, RunConfig& cfg) {
  r.check_section(node, "materials", {"gas", "silica"});
  if (auto gas = node["gas"]) {
    r.check_section(gas, "materials.gas",
                    {"species", "reference_pressure_bar", "reference_temperature_k", "window_nm", "sellmeier"});
    auto& g = cfg.environment.gas;
    r.text(gas, "species", "materials.gas", g.species);
    r.number(gas, "reference_pressure_bar", "materials.gas", g.reference_pressure_bar);
    r.number(gas, "reference_temperature_k", "materials.gas", g.reference_temperature_k);
    r.range(gas, "window_nm", "materials.gas", g.window.min_nm, g.window.max_nm);
    if (auto terms = gas["sellmeier"]) g.terms = read_terms(r, terms, "materials.gas.sellmeier");
  }
  if (auto silica = node["silica"]) {
    r.check_section(silica, "materials.silica", {"window_nm", "sellmeier"});
    auto& s = cfg.environment.silica;
    r.range(silica, "window_nm", "materials.silica", s.window.min_nm, s.window.max_nm);
    if (auto terms = silica["sellmeier"]) s.terms = read_terms(r, terms, "materials.silica.sellmeier");
  }
}

void read_geometry(const Reader& r, const YAML::Node& node, RunConfig& cfg) {
  r.check_section(node, "geometry",
                  {"core_radius_um", "tube_thickness_nm", "thickness_range_nm", "tube_count", "length_cm",
                   "effective_length_cm"});
  auto& g = cfg.environment.geometry;
  r.number(node, "core_radius_um", "geometry", g.core_radius_um);
  r.number(node, "tube_thickness_nm", "geometry", g.tube_thickness_nm);
  if (auto range = node["thickness_range_nm"]) {
    if (!range.IsSequence() || range.size() != 2) r.fail(range, "'geometry.thickness_range_nm' must be [t_min, t_max]");
    g.thickness_min_nm = r.scalar<double>(range[0], "geometry.thickness_range_nm", "[t_min, t_max]");
    g.thickness_max_nm = r.scalar<double>(range[1], "geometry.thickness_range_nm", "[t_min, t_max]");
  }
  r.integer(node, "tube_count", "geometry", g.tube_count);
  r.number(node, "length_cm", "geometry", g.length_cm);
  r.number(node, "effective_length_cm", "geometry", g.effective_length_cm);
}

void read_numerics(const Reader& r, const YAML::Node& node, RunConfig& cfg) {
  r.check_section(node, "numerics",
                  {"pole_guard_rad", "gvd_step_thz", "gvd_relative_tolerance", "gvd_absolute_floor_fs2_per_mm",
                   "gvd_max_refinements", "zdw_tolerance_nm", "zdw_bracket_nm", "resonance_tolerance_nm",
                   "resonance_max_iterations", "band_margin_nm", "max_resonance_order", "signal_search_window_nm",
                   "scan_step_nm", "root_tolerance_nm"});
  auto& n = cfg.environment.numerics;
  const std::string p = "numerics";
  r.number(node, "pole_guard_rad", p, n.pole_guard_rad);
  r.number(node, "gvd_step_thz", p, n.gvd_step_thz);
  r.number(node, "gvd_relative_tolerance", p, n.gvd_relative_tolerance);
  r.number(node, "gvd_absolute_floor_fs2_per_mm", p, n.gvd_absolute_floor_fs2_per_mm);
  r.integer(node, "gvd_max_refinements", p, n.gvd_max_refinements);
  r.number(node, "zdw_tolerance_nm", p, n.zdw_tolerance_nm);
  r.range(node, "zdw_bracket_nm", p, cfg.zdw.lo_nm, cfg.zdw.hi_nm);
  r.number(node, "resonance_tolerance_nm", p, n.resonance_tolerance_nm);
  r.integer(node, "resonance_max_iterations", p, n.resonance_max_iterations);
  r.number(node, "band_margin_nm", p, n.band_margin_nm);
  r.integer(node, "max_resonance_order", p, cfg.max_resonance_order);
  r.range(node, "signal_search_window_nm", p, cfg.signal_search.lo_nm, cfg.signal_search.hi_nm);
  r.number(node, "scan_step_nm", p, cfg.solver.scan_step_nm);
  r.number(node, "root_tolerance_nm", p, cfg.solver.root_tolerance_nm);
}

void read_transmittance(const Reader& r, const YAML::Node& node, RunConfig& cfg) {
  r.check_section(node, "transmittance",
                  {"length_cm", "capillary_loss_coefficient", "notch_depth", "notch_relative_width",
                   "thickness_samples", "max_order"});
  auto& t = cfg.transmittance;
  r.number(node, "length_cm", "transmittance", t.length_cm);
  r.number(node, "capillary_loss_coefficient", "transmittance", t.capillary_loss_coefficient);
  r.number(node, "notch_depth", "transmittance", t.notch_depth);
  r.number(node, "notch_relative_width", "transmittance", t.notch_relative_width);
  r.integer(node, "thickness_samples", "transmittance", t.thickness_samples);
  r.integer(node, "max_order", "transmittance", t.max_order);
}

void read_pump(const Reader& r, const YAML::Node& node, RunConfig& cfg) {
  r.check_section(node, "pump",
                  {"center_wavelength_nm", "repetition_rate_mhz", "pulse_duration_ps", "average_power_mw", "shape"});
  auto& p = cfg.pump;
  r.number(node, "center_wavelength_nm", "pump", p.center_wavelength_nm);
  r.number(node, "repetition_rate_mhz", "pump", p.repetition_rate_mhz);
  r.number(node, "pulse_duration_ps", "pump", p.pulse_duration_ps);
  r.number(node, "average_power_mw", "pump", p.average_power_mw);
  r.choice(node, "shape", "pump", p.shape, {{"gaussian", PulseShape::gaussian}});
}

void read_nonlinear(const Reader& r, const YAML::Node& node, RunConfig& cfg) {
  r.check_section(node, "nonlinear",
                  {"n2_reference_m2_per_w", "reference_pressure_bar", "effective_area_factor", "include_nonlinear_phase"});
  auto& n = cfg.nonlinear;
  r.number(node, "n2_reference_m2_per_w", "nonlinear", n.n2_reference_m2_per_w);
  r.number(node, "reference_pressure_bar", "nonlinear", n.reference_pressure_bar);
  r.number(node, "effective_area_factor", "nonlinear", n.effective_area_factor);
  r.boolean(node, "include_nonlinear_phase", "nonlinear", n.include_nonlinear_phase);
}

const std::initializer_list<std::pair<std::string_view, IndexVariant>> kVariants = {
    {"resonant", IndexVariant::resonant}, {"baseline", IndexVariant::baseline}};
const std::initializer_list<std::pair<std::string_view, FilterShape>> kShapes = {
    {"rectangular", FilterShape::rectangular}, {"gaussian", FilterShape::gaussian}};

void read_tuning(const Reader& r, const YAML::Node& node, RunConfig& cfg) {
  r.check_section(node, "tuning", {"pmin_bar", "pmax_bar", "step_bar", "variant"});
  r.number(node, "pmin_bar", "tuning", cfg.tuning.pmin_bar);
  r.number(node, "pmax_bar", "tuning", cfg.tuning.pmax_bar);
  r.number(node, "step_bar", "tuning", cfg.tuning.step_bar);
  r.choice(node, "variant", "tuning", cfg.tuning.variant, kVariants);
}

void read_jsi(const Reader& r, const YAML::Node& node, RunConfig& cfg) {
  r.check_section(node, "jsi",
                  {"pressure_bar", "grid_points", "signal_window_nm", "idler_window_nm", "signal_filter",
                   "idler_filter_shape", "idler_bandwidths_nm"});
  auto& j = cfg.jsi;
  r.number(node, "pressure_bar", "jsi", j.pressure_bar);
  std::uint64_t n = j.grid_points;
  r.count(node, "grid_points", "jsi", n);
  j.grid_points = n;
  r.range(node, "signal_window_nm", "jsi", j.signal_window.lo_nm, j.signal_window.hi_nm);
  r.range(node, "idler_window_nm", "jsi", j.idler_window.lo_nm, j.idler_window.hi_nm);
  if (auto f = node["signal_filter"]) {
    r.check_section(f, "jsi.signal_filter", {"center_nm", "fwhm_nm", "shape"});
    if (auto c = f["center_nm"]) {
      if (c.IsScalar() && c.Scalar() == "auto")
        j.signal_filter_center_nm.reset();
      else
        j.signal_filter_center_nm = r.scalar<double>(c, "jsi.signal_filter.center_nm", "a number or 'auto'");
    }
    r.number(f, "fwhm_nm", "jsi.signal_filter", j.signal_filter_fwhm_nm);
    r.choice(f, "shape", "jsi.signal_filter", j.signal_filter_shape, kShapes);
  }
  r.choice(node, "idler_filter_shape", "jsi", j.idler_filter_shape, kShapes);
  r.numbers(node, "idler_bandwidths_nm", "jsi", j.idler_bandwidths_nm);
}

void read_detector(const Reader& r, const YAML::Node& node, const std::string& path, DetectorModel& det,
                   double& dark_rate_hz) {
  r.check_section(node, path, {"efficiency", "jitter_sigma_ps", "gate_window_ps", "dead_time_ns", "dark_rate_hz"});
  r.number(node, "efficiency", path, det.efficiency);
  r.number(node, "jitter_sigma_ps", path, det.jitter_sigma_ps);
  r.number(node, "gate_window_ps", path, det.gate_window_ps);
  r.number(node, "dead_time_ns", path, det.dead_time_ns);
  r.number(node, "dark_rate_hz", path, dark_rate_hz);
}

void read_simulation(const Reader& r, const YAML::Node& node, RunConfig& cfg) {
  r.check_section(node, "simulation",
                  {"seed", "pulses", "block_pulses", "threads", "statistics", "pair_scale_per_mw2",
                   "fluorescence_hz_per_mw", "histogram_bin_ps", "histogram_span_ps", "sweep_powers_mw",
                   "signal_detector", "idler_detector"});
  auto& s = cfg.simulation;
  const std::string p = "simulation";
  r.count(node, "seed", p, s.settings.seed);
  r.count(node, "pulses", p, s.settings.pulses);
  r.count(node, "block_pulses", p, s.settings.block_pulses);
  std::uint64_t threads = s.settings.threads;
  r.count(node, "threads", p, threads);
  s.settings.threads = static_cast<unsigned>(threads);
  r.choice(node, "statistics", p, s.source.statistics,
           {{"poisson", PairStatistics::poisson}, {"fixed", PairStatistics::fixed}});
  r.number(node, "pair_scale_per_mw2", p, s.source.pair_scale_per_mw2);
  r.number(node, "fluorescence_hz_per_mw", p, s.source.fluorescence_hz_per_mw);
  r.number(node, "histogram_bin_ps", p, s.histogram_bin_ps);
  if (auto span = node["histogram_span_ps"]) {
    if (span.IsScalar() && span.Scalar() == "auto")
      s.histogram_span_ps.reset();
    else
      s.histogram_span_ps = r.scalar<double>(span, p + ".histogram_span_ps", "a number or 'auto'");
  }
  r.numbers(node, "sweep_powers_mw", p, s.sweep_powers_mw);
  if (auto d = node["signal_detector"]) read_detector(r, d, p + ".signal_detector", s.signal_detector, s.source.dark_rate_signal_hz);
  if (auto d = node["idler_detector"]) read_detector(r, d, p + ".idler_detector", s.idler_detector, s.source.dark_rate_idler_hz);
}

}  // namespace

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError("", message);
  };
  require(schema_version == kConfigSchemaVersion, "unsupported schema_version " + std::to_string(schema_version));
  environment.validate();
  transmittance.validate();
  pump.validate();
  nonlinear.validate();
  simulation.signal_detector.validate();
  simulation.idler_detector.validate();
  simulation.settings.validate();
  require(signal_search.lo_nm < signal_search.hi_nm, "numerics.signal_search_window_nm needs lo < hi");
  require(zdw.lo_nm < zdw.hi_nm, "numerics.zdw_bracket_nm needs lo < hi");
  require(solver.scan_step_nm > 0.0 && solver.root_tolerance_nm > 0.0, "numerics: scan step and root tolerance must be > 0");
  require(max_resonance_order >= 1, "numerics.max_resonance_order must be >= 1");
  require(tuning.step_bar > 0.0, "tuning.step_bar must be > 0");
  require(tuning.pmin_bar >= 0.0 && tuning.pmax_bar >= 0.0, "tuning: pressures must be >= 0");
  require(jsi.pressure_bar >= 0.0, "jsi.pressure_bar must be >= 0");
  require(jsi.grid_points >= 64, "jsi.grid_points must be >= 64");
  require(jsi.signal_filter_fwhm_nm > 0.0, "jsi.signal_filter.fwhm_nm must be > 0");
  require(!jsi.idler_bandwidths_nm.empty(), "jsi.idler_bandwidths_nm must not be empty");
  for (double b : jsi.idler_bandwidths_nm) require(b > 0.0, "jsi.idler_bandwidths_nm entries must be > 0");
  require(simulation.source.pair_scale_per_mw2 >= 0.0, "simulation.pair_scale_per_mw2 must be >= 0");
  require(simulation.source.fluorescence_hz_per_mw >= 0.0, "simulation.fluorescence_hz_per_mw must be >= 0");
  require(simulation.source.dark_rate_signal_hz >= 0.0 && simulation.source.dark_rate_idler_hz >= 0.0,
          "simulation: dark rates must be >= 0");
  require(simulation.histogram_bin_ps > 0.0, "simulation.histogram_bin_ps must be > 0");
  require(!simulation.histogram_span_ps || *simulation.histogram_span_ps > 0.0, "simulation.histogram_span_ps must be > 0");
  for (double p : simulation.sweep_powers_mw) require(p > 0.0, "simulation.sweep_powers_mw entries must be > 0");
  require(!output_directory.empty(), "output.directory must not be empty");
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.environment.gas = xenon_reference_model();
  cfg.environment.silica = fused_silica_reference_model();
  cfg.environment.pressure_bar = 0.79;
  cfg.environment.geometry.effective_length_cm = 3.5;
  auto& sim = cfg.simulation;
  sim.source.pair_scale_per_mw2 = 1.5306122e-8;  // mu(140 mW) = 3e-4
  sim.source.fluorescence_hz_per_mw = 1.0;
  sim.source.dark_rate_signal_hz = 1.0;
  sim.source.dark_rate_idler_hz = 100.0;
  sim.signal_detector = {0.15, 80.0, 400.0, 10.0};
  sim.idler_detector = {0.30, 80.0, 400.0, 22.0};
  sim.settings.pulses = 10'000'000'000;
  return cfg;
}

RunConfig parse_config(std::string_view text, std::string_view source_name) {
  const Reader r(source_name);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    std::ostringstream loc;
    loc << source_name << ':' << e.mark.line + 1 << ':' << e.mark.column + 1;
    throw ConfigError(loc.str(), "YAML syntax error: " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(std::string(source_name), "top level must be a mapping");
  r.check_section(root, "<top>",
                  {"schema_version", "materials", "environment", "geometry", "numerics", "transmittance", "pump",
                   "nonlinear", "tuning", "jsi", "simulation", "output"});

  RunConfig cfg = default_config();
  auto version = root["schema_version"];
  if (!version) throw ConfigError(std::string(source_name), "missing required key 'schema_version'");
  cfg.schema_version = r.scalar<int>(version, "schema_version", "an integer");
  if (cfg.schema_version != kConfigSchemaVersion)
    r.fail(version, "unsupported schema_version " + std::to_string(cfg.schema_version) + " (expected " +
                        std::to_string(kConfigSchemaVersion) + ")");

  if (auto n = root["materials"]) read_materials(r, n, cfg);
  if (auto n = root["environment"]) {
    r.check_section(n, "environment", {"pressure_bar", "temperature_k"});
    r.number(n, "pressure_bar", "environment", cfg.environment.pressure_bar);
    r.number(n, "temperature_k", "environment", cfg.environment.temperature_k);
  }
  if (auto n = root["geometry"]) read_geometry(r, n, cfg);
  if (auto n = root["numerics"]) read_numerics(r, n, cfg);
  if (auto n = root["transmittance"]) read_transmittance(r, n, cfg);
  if (auto n = root["pump"]) read_pump(r, n, cfg);
  if (auto n = root["nonlinear"]) read_nonlinear(r, n, cfg);
  if (auto n = root["tuning"]) read_tuning(r, n, cfg);
  if (auto n = root["jsi"]) read_jsi(r, n, cfg);
  if (auto n = root["simulation"]) read_simulation(r, n, cfg);
  if (auto n = root["output"]) {
    r.check_section(n, "output", {"directory"});
    r.text(n, "directory", "output", cfg.output_directory);
  }

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source_name), e.what());
  } catch (const Error& e) {
    throw ConfigError(std::string(source_name), e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

}  // namespace pcfpair
