#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "pcfpair/cli/app.hpp"
#include "pcfpair/constants.hpp"
#include "pcfpair/errors.hpp"
#include "pcfpair/numerics.hpp"

namespace pcfpair::cli {

using nlohmann::ordered_json;

namespace {

IndexVariant parse_variant(const std::string& name) {
  if (name == "resonant") return IndexVariant::resonant;
  if (name == "baseline") return IndexVariant::baseline;
  throw ArgumentError("variant must be 'resonant' or 'baseline', got '" + name + "'");
}

WavelengthRange window_or(const std::vector<double>& flag, const WavelengthRange& fallback, const char* name) {
  if (flag.empty()) return fallback;
  if (flag.size() != 2 || !(flag[0] < flag[1]))
    throw ArgumentError(std::string(name) + " needs two values lo hi with lo < hi");
  return {flag[0], flag[1]};
}

void announce(const Context& ctx, const std::filesystem::path& path) { *ctx.out << "wrote " << path.string() << '\n'; }

ordered_json pump_json(const PumpSpec& p) {
  return {{"center_wavelength_nm", p.center_wavelength_nm},
          {"repetition_rate_mhz", p.repetition_rate_mhz},
          {"pulse_duration_ps", p.pulse_duration_ps},
          {"average_power_mw", p.average_power_mw},
          {"peak_power_w", derive_peak_power(p)}};
}

ordered_json detector_json(const DetectorModel& d, double dark_rate_hz) {
  return {{"efficiency", d.efficiency},
          {"jitter_sigma_ps", d.jitter_sigma_ps},
          {"gate_window_ps", d.gate_window_ps},
          {"dead_time_ns", d.dead_time_ns},
          {"dark_rate_hz", dark_rate_hz}};
}

ordered_json spectrum_json(const Spectrum& s) {
  return {{"peak_nm", s.peak_nm}, {"fwhm_nm", s.fwhm_nm}, {"fwhm_thz", s.fwhm_thz}};
}

ordered_json window_json(const DelayWindow& w) {
  return {{"center_ps", w.center_ps},
          {"counts", w.counts},
          {"bins", w.bins},
          {"expected_background", w.expected_background},
          {"significance_sigma", w.significance}};
}

struct JsiSetup {
  OpticalEnvironment env;
  JsiGrid grid;
  std::optional<PhaseMatchPoint> matched;
};

JsiSetup build_jsi(const Context& ctx, std::optional<double> pressure, std::optional<std::size_t> n,
                   const std::vector<double>& sw, const std::vector<double>& iw) {
  const auto& cfg = ctx.config;
  JsiSetup s;
  s.env = cfg.environment.at_pressure(pressure.value_or(cfg.jsi.pressure_bar));
  const std::size_t points = n.value_or(cfg.jsi.grid_points);
  if (points < 64) throw ArgumentError("--n must be >= 64");
  s.grid = jsi_grid(s.env, cfg.pump, cfg.nonlinear, window_or(sw, cfg.jsi.signal_window, "--signal-window"),
                    window_or(iw, cfg.jsi.idler_window, "--idler-window"), points);
  try {
    s.matched = solve_tuning_point(s.env, cfg.pump, cfg.nonlinear, cfg.signal_search, IndexVariant::resonant,
                                   cfg.solver)
                    .primary();
  } catch (const NoRootError&) {
  }
  return s;
}

}  // namespace

int cmd_tuning_curve(const Context& ctx, const TuningArgs& args) {
  const auto& cfg = ctx.config;
  const double pmin = args.pmin.value_or(cfg.tuning.pmin_bar);
  const double pmax = args.pmax.value_or(cfg.tuning.pmax_bar);
  const double step = args.step.value_or(cfg.tuning.step_bar);
  const IndexVariant variant = args.variant ? parse_variant(*args.variant) : cfg.tuning.variant;
  if (pmin > pmax) throw ArgumentError("--pmin must not exceed --pmax");
  if (!(step > 0.0)) throw ArgumentError("--step must be > 0");

  const TuningCurve curve =
      tuning_curve(cfg.environment, cfg.pump, cfg.nonlinear, pmin, pmax, step, cfg.signal_search, variant, cfg.solver);
  const std::string tag = to_string(variant);

  const auto csv_path = ctx.out_dir / ("tuning_curve_" + tag + ".csv");
  {
    CsvWriter csv(csv_path, ctx.provenance);
    csv.header({"pressure_bar", "lambda_s_nm", "lambda_i_nm", "residual", "variant", "roots"});
    for (const auto& e : curve.entries) {
      if (!e.solution) {
        csv.row({format_number(e.pressure_bar), "", "", "", tag, "0"});
        continue;
      }
      const auto& p = e.solution->primary();
      csv.values(e.pressure_bar, p.signal_nm, p.idler_nm, p.residual_rad_per_m, tag, e.solution->roots.size());
    }
  }
  announce(ctx, csv_path);

  const auto bands = resonance_bands(cfg.environment, cfg.max_resonance_order);
  const auto bands_path = ctx.out_dir / "resonance_bands.csv";
  {
    CsvWriter csv(bands_path, ctx.provenance);
    csv.header({"order", "low_nm", "high_nm"});
    for (const auto& b : bands) csv.values(b.order, b.low_nm, b.high_nm);
  }
  announce(ctx, bands_path);

  ordered_json summary;
  summary["variant"] = tag;
  summary["pressure_range_bar"] = {pmin, pmax};
  summary["step_bar"] = step;
  ordered_json gaps = ordered_json::array();
  ordered_json multi = ordered_json::array();
  for (const auto& e : curve.entries) {
    if (!e.solution) {
      gaps.push_back(e.pressure_bar);
    } else if (e.solution->multiple_roots()) {
      ordered_json roots = ordered_json::array();
      for (const auto& r : e.solution->roots) roots.push_back({{"lambda_s_nm", r.signal_nm}, {"lambda_i_nm", r.idler_nm}});
      multi.push_back({{"pressure_bar", e.pressure_bar}, {"roots", roots}});
    }
  }
  summary["gaps_bar"] = gaps;
  summary["multiple_roots"] = multi;
  ordered_json band_list = ordered_json::array();
  for (const auto& b : bands) band_list.push_back({{"order", b.order}, {"low_nm", b.low_nm}, {"high_nm", b.high_nm}});
  summary["resonance_bands"] = band_list;

  const auto points = curve.points();
  if (!points.empty()) {
    const TuningRate rate = tuning_rate(curve);
    summary["tuning_rate"] = {{"detuning_slope_thz_per_bar", rate.detuning_slope_thz_per_bar},
                              {"detuning_span_thz", rate.detuning_span_thz},
                              {"separation_slope_thz_per_bar", rate.separation_slope_thz_per_bar},
                              {"separation_span_thz", rate.separation_span_thz},
                              {"points", rate.points}};
  }
  const auto json_path = ctx.out_dir / ("tuning_curve_" + tag + ".json");
  write_json(json_path, ctx.provenance, summary);
  announce(ctx, json_path);

  if (points.empty()) throw NoRootError("no phase matching at any pressure in the requested range");
  return kExitOk;
}

int cmd_jsi(const Context& ctx, const JsiArgs& args) {
  const auto& cfg = ctx.config;
  const JsiSetup s = build_jsi(ctx, args.pressure, args.n, args.signal_window, args.idler_window);
  const auto& g = s.grid;
  const Spectrum ms = marginal(g, Axis::signal);
  const Spectrum mi = marginal(g, Axis::idler);

  const auto matrix_path = ctx.out_dir / "jsi_matrix.csv";
  {
    CsvWriter csv(matrix_path, ctx.provenance);
    std::vector<std::string> head{"signal_nm\\idler_nm"};
    for (double w : g.idler_omega) head.push_back(format_number(wavelength_nm(w)));
    csv.row(head);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      std::vector<std::string> row{format_number(wavelength_nm(g.signal_omega[i]))};
      for (double v : g.row(i)) row.push_back(format_number(v));
      csv.row(row);
    }
  }
  announce(ctx, matrix_path);

  const auto marg_path = ctx.out_dir / "jsi_marginals.csv";
  {
    CsvWriter csv(marg_path, ctx.provenance);
    csv.header({"axis", "wavelength_nm", "frequency_thz", "value"});
    for (const auto* sp : {&ms, &mi}) {
      const char* axis = sp == &ms ? "signal" : "idler";
      for (std::size_t k = 0; k < sp->values.size(); ++k)
        csv.values(axis, sp->wavelength_nm[k], sp->omega[k] / (2.0 * kPi) * 1e-12, sp->values[k]);
    }
  }
  announce(ctx, marg_path);

  ordered_json doc;
  doc["pressure_bar"] = g.pressure_bar;
  doc["pump"] = pump_json(cfg.pump);
  doc["effective_length_cm"] = g.effective_length_cm;
  doc["grid_points"] = g.rows();
  doc["signal_window_nm"] = {wavelength_nm(g.signal_omega.back()), wavelength_nm(g.signal_omega.front())};
  doc["idler_window_nm"] = {wavelength_nm(g.idler_omega.back()), wavelength_nm(g.idler_omega.front())};
  doc["normalization"] = g.normalization;
  doc["signal_marginal"] = spectrum_json(ms);
  doc["idler_marginal"] = spectrum_json(mi);
  if (s.matched) doc["phase_matched"] = {{"lambda_s_nm", s.matched->signal_nm}, {"lambda_i_nm", s.matched->idler_nm}};
  const auto json_path = ctx.out_dir / "jsi.json";
  write_json(json_path, ctx.provenance, doc);
  announce(ctx, json_path);
  return kExitOk;
}

int cmd_filtered_rates(const Context& ctx, const FilteredArgs& args) {
  const auto& cfg = ctx.config;
  const JsiSetup s = build_jsi(ctx, args.pressure, std::nullopt, {}, {});
  if (!s.matched) throw NoRootError("no phase-matched pair to centre the filters on");

  SpectralFilter signal_filter{cfg.jsi.signal_filter_center_nm.value_or(s.matched->signal_nm),
                               cfg.jsi.signal_filter_fwhm_nm, cfg.jsi.signal_filter_shape};
  const double idler_center = cfg.jsi.signal_filter_center_nm
                                  ? conjugate_idler(cfg.pump.center_wavelength_nm, signal_filter.center_nm)
                                  : s.matched->idler_nm;
  auto bandwidths = args.bandwidths.empty() ? cfg.jsi.idler_bandwidths_nm : args.bandwidths;
  const FilteredRates rates = filtered_rates(s.grid, signal_filter, idler_center, bandwidths, cfg.jsi.idler_filter_shape);
  const Spectrum cond = conditional_spectrum(s.grid, signal_filter);

  const auto csv_path = ctx.out_dir / "filtered_rates.csv";
  {
    CsvWriter csv(csv_path, ctx.provenance);
    csv.header({"bandwidth_nm", "coincidence_norm", "singles_norm"});
    for (std::size_t k = 0; k < rates.bandwidth_nm.size(); ++k)
      csv.values(rates.bandwidth_nm[k], rates.coincidence[k], rates.singles[k]);
  }
  announce(ctx, csv_path);

  ordered_json doc;
  doc["pressure_bar"] = s.grid.pressure_bar;
  doc["signal_filter"] = {{"center_nm", signal_filter.center_nm},
                          {"fwhm_nm", signal_filter.fwhm_nm},
                          {"shape", signal_filter.shape == FilterShape::rectangular ? "rectangular" : "gaussian"}};
  doc["idler_center_nm"] = idler_center;
  doc["conditional_idler"] = spectrum_json(cond);
  ordered_json saturation = nullptr;
  for (std::size_t k = 0; k < rates.bandwidth_nm.size(); ++k) {
    if (rates.coincidence[k] >= 0.95) {
      saturation = rates.bandwidth_nm[k];
      break;
    }
  }
  doc["coincidence_95pct_bandwidth_nm"] = saturation;
  const auto json_path = ctx.out_dir / "filtered_rates.json";
  write_json(json_path, ctx.provenance, doc);
  announce(ctx, json_path);
  return kExitOk;
}

int cmd_transmittance(const Context& ctx, const TransmittanceArgs& args) {
  const auto& cfg = ctx.config;
  if (!(args.lmin < args.lmax)) throw ArgumentError("--lmin must be below --lmax");
  if (args.points < 2) throw ArgumentError("--points must be >= 2");
  OpticalEnvironment env = cfg.environment;
  if (args.thickness) env = env.at_thickness(*args.thickness);
  const TransmittanceProfile profile(env, cfg.transmittance);

  const auto lambda = numerics::linspace(args.lmin, args.lmax, args.points);
  std::vector<double> t(lambda.size());
  std::transform(lambda.begin(), lambda.end(), t.begin(), [&](double l) { return profile(l); });

  const auto csv_path = ctx.out_dir / "transmittance.csv";
  {
    CsvWriter csv(csv_path, ctx.provenance);
    csv.header({"wavelength_nm", "transmittance"});
    for (std::size_t k = 0; k < lambda.size(); ++k) csv.values(lambda[k], t[k]);
  }
  announce(ctx, csv_path);

  ordered_json doc;
  doc["thickness_range_nm"] = {env.geometry.thickness_min_nm, env.geometry.thickness_max_nm};
  doc["length_cm"] = cfg.transmittance.length_cm;
  ordered_json lines = ordered_json::array();
  std::vector<double> extremes{env.geometry.thickness_min_nm};
  if (env.geometry.thickness_max_nm > env.geometry.thickness_min_nm) extremes.push_back(env.geometry.thickness_max_nm);
  for (double thickness : extremes) {
    for (const auto& line : resonance_wavelengths(env, cfg.transmittance.max_order, thickness))
      lines.push_back({{"thickness_nm", thickness}, {"order", line.order}, {"wavelength_nm", line.wavelength_nm}});
  }
  doc["resonance_lines"] = lines;
  ordered_json minima = ordered_json::array();
  for (auto k : numerics::local_minima(t)) minima.push_back({{"wavelength_nm", lambda[k]}, {"transmittance", t[k]}});
  doc["local_minima"] = minima;
  const auto json_path = ctx.out_dir / "transmittance.json";
  write_json(json_path, ctx.provenance, doc);
  announce(ctx, json_path);
  return kExitOk;
}

int cmd_montecarlo(const Context& ctx, const MonteCarloArgs& args) {
  const auto& cfg = ctx.config;
  const auto& sim = cfg.simulation;
  PumpSpec pump = cfg.pump;
  pump.average_power_mw = args.power.value_or(pump.average_power_mw);
  EmissionRates rates = sim.source.at_power(pump.average_power_mw);
  if (args.mu) rates.mean_pairs_per_pulse = *args.mu;
  if (args.noiseless) rates.fluorescence_rate_hz = rates.dark_rate_signal_hz = rates.dark_rate_idler_hz = 0.0;
  rates.validate();

  SimulationSettings settings = sim.settings;
  settings.pulses = args.pulses.value_or(settings.pulses);
  settings.seed = args.seed.value_or(settings.seed);

  const auto [signal, idler] = simulate_time_tags(rates, sim.signal_detector, sim.idler_detector, pump, settings);

  // Off-band reference: same power, no pairs, independent substreams.
  std::optional<double> offband;
  if (rates.fluorescence_rate_hz + rates.dark_rate_idler_hz > 0.0) {
    EmissionRates off = rates;
    off.mean_pairs_per_pulse = 0.0;
    SimulationSettings off_settings = settings;
    off_settings.seed = settings.seed ^ 0x6f6666ULL;
    offband = simulate_time_tags(off, sim.signal_detector, sim.idler_detector, pump, off_settings).second.rate_hz();
  }

  const double gate = sim.signal_detector.gate_window_ps;
  const auto hist = correlation_histogram(signal, idler, sim.histogram_bin_ps,
                                          sim.histogram_span_ps.value_or(default_histogram_span_ps(pump)));
  const auto structure = histogram_structure(hist, pump.period_ps(), gate);

  const auto hist_path = ctx.out_dir / "histogram.csv";
  {
    CsvWriter csv(hist_path, ctx.provenance);
    csv.header({"bin_center_ps", "counts"});
    for (std::size_t k = 0; k < hist.counts.size(); ++k) csv.values(hist.bin_center_ps(k), hist.counts[k]);
  }
  announce(ctx, hist_path);

  if (args.tags_out) {
    const std::filesystem::path tags_path = ctx.out_dir / *args.tags_out;
    CsvWriter csv(tags_path, ctx.provenance);
    csv.header({"channel", "time_ps"});
    // Merge by time; on equal times the signal channel comes first.
    std::size_t a = 0, b = 0;
    const auto& s = signal.times_ps;
    const auto& i = idler.times_ps;
    while (a < s.size() || b < i.size()) {
      if (b == i.size() || (a < s.size() && s[a] <= i[b]))
        csv.values(kSignalChannel, static_cast<long long>(s[a++]));
      else
        csv.values(kIdlerChannel, static_cast<long long>(i[b++]));
    }
    announce(ctx, tags_path);
  }

  ordered_json doc;
  doc["seed"] = settings.seed;
  doc["pulses"] = settings.pulses;
  doc["block_pulses"] = settings.block_pulses;
  doc["duration_s"] = signal.duration_s;
  doc["pump"] = pump_json(pump);
  doc["mean_pairs_per_pulse"] = rates.mean_pairs_per_pulse;
  doc["fluorescence_rate_hz"] = rates.fluorescence_rate_hz;
  doc["signal_detector"] = detector_json(sim.signal_detector, rates.dark_rate_signal_hz);
  doc["idler_detector"] = detector_json(sim.idler_detector, rates.dark_rate_idler_hz);
  doc["signal_counts"] = signal.times_ps.size();
  doc["idler_counts"] = idler.times_ps.size();
  doc["signal_rate_hz"] = signal.rate_hz();
  doc["idler_rate_hz"] = idler.rate_hz();
  doc["idler_offband_rate_hz"] = offband ? ordered_json(*offband) : ordered_json(nullptr);
  doc["coincidences_in_gate"] = count_coincidences(signal, idler, 0.5 * gate);
  try {
    const double g2 = g2_zero(signal, idler, pump, gate, offband);
    doc["g2_zero"] = g2;
    doc["car"] = car(g2);
  } catch (const UndefinedStatisticError& e) {
    doc["g2_zero"] = nullptr;
    doc["car"] = nullptr;
    doc["g2_note"] = e.what();
  }
  doc["histogram"] = {{"bin_width_ps", hist.bin_width_ps},
                      {"half_bins", hist.half_bins},
                      {"total", hist.total()},
                      {"background_per_bin", structure.background_per_bin},
                      {"central", window_json(structure.central)},
                      {"previous_pulse", window_json(structure.previous_pulse)},
                      {"next_pulse", window_json(structure.next_pulse)}};
  const auto json_path = ctx.out_dir / "montecarlo.json";
  write_json(json_path, ctx.provenance, doc);
  announce(ctx, json_path);
  return kExitOk;
}

int cmd_power_sweep(const Context& ctx, const SweepArgs& args) {
  const auto& cfg = ctx.config;
  const auto& sim = cfg.simulation;
  const auto powers = args.powers.empty() ? sim.sweep_powers_mw : args.powers;
  SimulationSettings settings = sim.settings;
  settings.pulses = args.pulses.value_or(settings.pulses);
  settings.seed = args.seed.value_or(settings.seed);

  const PowerSweep sweep = power_sweep(sim.source, sim.signal_detector, sim.idler_detector, cfg.pump, powers, settings);

  const auto csv_path = ctx.out_dir / "power_sweep.csv";
  {
    CsvWriter csv(csv_path, ctx.provenance);
    csv.header({"power_mW", "coincidence_rate_hz", "car", "mean_pairs_per_pulse", "signal_rate_hz", "idler_rate_hz",
                "idler_offband_rate_hz", "g2"});
    for (const auto& p : sweep.points)
      csv.values(p.power_mw, p.coincidence_rate_hz, p.car, p.mean_pairs_per_pulse, p.signal_rate_hz, p.idler_rate_hz,
                 p.idler_offband_rate_hz, p.g2);
  }
  announce(ctx, csv_path);

  ordered_json doc;
  doc["seed"] = settings.seed;
  doc["pulses_per_point"] = settings.pulses;
  doc["pair_scale_per_mw2"] = sim.source.pair_scale_per_mw2;
  doc["coincidence_exponent"] = sweep.coincidence_exponent;
  doc["car_exponent"] = sweep.car_exponent;
  ordered_json pts = ordered_json::array();
  for (const auto& p : sweep.points)
    pts.push_back({{"power_mw", p.power_mw}, {"coincidence_rate_hz", p.coincidence_rate_hz}, {"car", p.car}});
  doc["points"] = pts;
  const auto json_path = ctx.out_dir / "power_sweep.json";
  write_json(json_path, ctx.provenance, doc);
  announce(ctx, json_path);
  return kExitOk;
}

int cmd_zdw(const Context& ctx, const ZdwArgs& args) {
  const auto& cfg = ctx.config;
  const double pressure = args.pressure.value_or(cfg.environment.pressure_bar);
  const IndexVariant variant = args.variant ? parse_variant(*args.variant) : IndexVariant::resonant;
  double lo = cfg.zdw.lo_nm, hi = cfg.zdw.hi_nm;
  if (!args.bracket.empty()) {
    if (args.bracket.size() != 2 || !(args.bracket[0] < args.bracket[1]))
      throw ArgumentError("--bracket needs two values lo hi with lo < hi");
    lo = args.bracket[0];
    hi = args.bracket[1];
  }
  const double zdw = find_zdw(cfg.environment.at_pressure(pressure), lo, hi, variant);

  ordered_json doc;
  doc["lambda_zdw_nm"] = zdw;
  doc["pressure_bar"] = pressure;
  doc["bracket_nm"] = {lo, hi};
  doc["variant"] = to_string(variant);
  const auto json_path = ctx.out_dir / "zdw.json";
  write_json(json_path, ctx.provenance, doc);
  *ctx.out << nlohmann::ordered_json{{"lambda_zdw_nm", zdw}}.dump() << '\n';
  announce(ctx, json_path);
  return kExitOk;
}

}  // namespace pcfpair::cli
