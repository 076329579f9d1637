#include "pcfpair/cli/app.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>

#include "commands.hpp"
#include "pcfpair/errors.hpp"

#ifndef PCFPAIR_VERSION
#define PCFPAIR_VERSION "0.0.0"
#endif

namespace pcfpair::cli {

std::string default_config_path() {
#ifdef PCFPAIR_SOURCE_CONFIG
  if (std::filesystem::exists(PCFPAIR_SOURCE_CONFIG)) return PCFPAIR_SOURCE_CONFIG;
#endif
#ifdef PCFPAIR_INSTALLED_CONFIG
  return PCFPAIR_INSTALLED_CONFIG;
#else
  return "xenon_srpcf.yaml";
#endif
}

namespace {

std::string joined(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (k > 1) s += ' ';
    s += args[k];
  }
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gas-filled single-ring PCF photon-pair source: dispersion, phase matching, JSI, counting statistics",
               "pcfpair"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PCFPAIR_VERSION);

  std::string config_path = default_config_path();
  std::string out_dir;
  std::optional<unsigned> threads;
  app.add_option("-c,--config", config_path, "YAML run configuration")->capture_default_str();
  app.add_option("-o,--out", out_dir, "output directory (overrides output.directory)");
  app.add_option("--threads", threads, "worker threads for the Monte Carlo (0: all cores)");
  app.fallthrough();

  std::function<int(const Context&)> action;

  TuningArgs tuning;
  auto* tc = app.add_subcommand("tuning-curve", "signal/idler wavelengths versus gas pressure");
  tc->add_option("--pmin", tuning.pmin, "lowest pressure [bar]");
  tc->add_option("--pmax", tuning.pmax, "highest pressure [bar]");
  tc->add_option("--step", tuning.step, "pressure step [bar]");
  tc->add_option("--variant", tuning.variant, "resonant or baseline")->check(CLI::IsMember({"resonant", "baseline"}));
  tc->callback([&] { action = [&](const Context& c) { return cmd_tuning_curve(c, tuning); }; });

  JsiArgs jsi;
  auto* js = app.add_subcommand("jsi", "joint spectral intensity and its marginals");
  js->add_option("--pressure", jsi.pressure, "gas pressure [bar]");
  js->add_option("--n", jsi.n, "grid points per axis (>= 64)");
  js->add_option("--signal-window", jsi.signal_window, "signal window lo hi [nm]")->expected(2);
  js->add_option("--idler-window", jsi.idler_window, "idler window lo hi [nm]")->expected(2);
  js->callback([&] { action = [&](const Context& c) { return cmd_jsi(c, jsi); }; });

  FilteredArgs filtered;
  auto* fr = app.add_subcommand("filtered-rates", "coincidence and singles integrals versus idler filter bandwidth");
  fr->add_option("--pressure", filtered.pressure, "gas pressure [bar]");
  fr->add_option("--bandwidths", filtered.bandwidths, "idler filter bandwidths [nm]")->expected(1, -1);
  fr->callback([&] { action = [&](const Context& c) { return cmd_filtered_rates(c, filtered); }; });

  TransmittanceArgs trans;
  auto* tr = app.add_subcommand("transmittance", "fiber transmittance with tube-resonance dips");
  tr->add_option("--lmin", trans.lmin, "shortest wavelength [nm]")->capture_default_str();
  tr->add_option("--lmax", trans.lmax, "longest wavelength [nm]")->capture_default_str();
  tr->add_option("--points", trans.points, "number of samples")->capture_default_str();
  tr->add_option("--thickness", trans.thickness, "single tube thickness [nm] instead of the configured range");
  tr->callback([&] { action = [&](const Context& c) { return cmd_transmittance(c, trans); }; });

  MonteCarloArgs mc;
  auto* mcs = app.add_subcommand("montecarlo", "time-tag simulation, coincidence histogram, g2 and CAR");
  mcs->add_option("--pulses", mc.pulses, "number of pump pulses");
  mcs->add_option("--power", mc.power, "average pump power [mW]");
  mcs->add_option("--seed", mc.seed, "master seed");
  mcs->add_option("--mu", mc.mu, "mean pairs per pulse (overrides the power scaling)");
  mcs->add_flag("--noiseless", mc.noiseless, "switch off fluorescence and dark counts");
  mcs->add_option("--tags-out", mc.tags_out, "also write merged time tags to this file (inside --out)");
  mcs->callback([&] { action = [&](const Context& c) { return cmd_montecarlo(c, mc); }; });

  SweepArgs sweep;
  auto* ps = app.add_subcommand("power-sweep", "coincidence rate and CAR versus pump power");
  ps->add_option("--powers", sweep.powers, "average pump powers [mW]")->expected(1, -1);
  ps->add_option("--pulses", sweep.pulses, "pulses per power point");
  ps->add_option("--seed", sweep.seed, "master seed");
  ps->callback([&] { action = [&](const Context& c) { return cmd_power_sweep(c, sweep); }; });

  ZdwArgs zdw;
  auto* zd = app.add_subcommand("zdw", "zero-dispersion wavelength at one pressure");
  zd->add_option("--pressure", zdw.pressure, "gas pressure [bar]");
  zd->add_option("--bracket", zdw.bracket, "search bracket lo hi [nm]")->expected(2);
  zd->add_option("--variant", zdw.variant, "resonant or baseline")->check(CLI::IsMember({"resonant", "baseline"}));
  zd->callback([&] { action = [&](const Context& c) { return cmd_zdw(c, zdw); }; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Context ctx;
    const std::string text = read_file(config_path);
    ctx.config = parse_config(text, config_path);
    if (threads) ctx.config.simulation.settings.threads = *threads;
    ctx.out_dir = out_dir.empty() ? std::filesystem::path(ctx.config.output_directory) : std::filesystem::path(out_dir);
    ctx.provenance = {PCFPAIR_VERSION, config_path, git_blob_sha1(text), joined(args)};
    ctx.out = &out;
    return action(ctx);
  } catch (const NoRootError& e) {
    err << "pcfpair: no solution: " << e.what() << '\n';
    return kExitNoSolution;
  } catch (const NumericError& e) {
    err << "pcfpair: numerical failure: " << e.what() << '\n';
    return kExitNoSolution;
  } catch (const UndefinedStatisticError& e) {
    err << "pcfpair: " << e.what() << '\n';
    return kExitNoSolution;
  } catch (const ArgumentError& e) {
    err << "pcfpair: usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BandError& e) {
    err << "pcfpair: " << e.what() << " [leg " << to_string(e.leg()) << ", order " << e.order() << ", "
        << e.wavelength_nm() << " nm]\n";
    return kExitDomain;
  } catch (const ResonancePoleError& e) {
    err << "pcfpair: " << e.what() << " [order " << e.order() << ", " << e.wavelength_nm() << " nm]\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "pcfpair: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ConfigError& e) {
    err << "pcfpair: config: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "pcfpair: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace pcfpair::cli
