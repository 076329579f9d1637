#include <gtest/gtest.h>

#include <cmath>

#include "pcfpair/config.hpp"
#include "pcfpair/constants.hpp"
#include "pcfpair/errors.hpp"
#include "pcfpair/phasematch.hpp"
#include "property.hpp"

namespace pcfpair {
namespace {

// Frozen from tests/oracles/golden_values.py.
constexpr double kPeakPowerW = 258.289903805874;
constexpr double kGammaOneBar = 0.00164981162006742;  // 1/(W km)

struct Fixture {
  RunConfig cfg = default_config();
  OpticalEnvironment at(double p) const { return cfg.environment.at_pressure(p); }
  PhaseMatchSolution solve(double p, SearchWindow w = {}, IndexVariant v = IndexVariant::resonant,
                           const NonlinearParams* nl = nullptr) const {
    return solve_tuning_point(at(p), cfg.pump, nl ? *nl : cfg.nonlinear, w, v, cfg.solver);
  }
};

double frequency_thz(double nm) { return kSpeedOfLight / (nm * 1e-9) * 1e-12; }

TEST(ConjugateIdler, Examples) {
  EXPECT_DOUBLE_EQ(conjugate_idler(400.0, 400.0), 400.0);
  EXPECT_NEAR(conjugate_idler(400.0, 266.67), 800.0, 0.05);
  EXPECT_NEAR(conjugate_idler(400.0, 250.0), 1000.0, 1e-9);
  EXPECT_THROW(conjugate_idler(400.0, 200.0), ArgumentError);
  EXPECT_THROW(conjugate_idler(400.0, 150.0), ArgumentError);
}

TEST(ConjugateIdler, EnergyConservedForRandomSignals) {
  testing::for_all(
      500, 31, [](testing::Rng& rng) { return testing::uniform(rng, 201.0, 399.0); },
      [](double s) {
        const double i = conjugate_idler(400.0, s);
        EXPECT_LT(std::abs(1.0 / s + 1.0 / i - 2.0 / 400.0), 1e-12);
        EXPECT_GT(i, 400.0);
      });
}

TEST(PeakPower, GoldenAndLinear) {
  PumpSpec pump;
  EXPECT_NEAR(derive_peak_power(pump), kPeakPowerW, 1e-10 * kPeakPowerW);
  const double base = derive_peak_power(pump);
  pump.average_power_mw *= 2.0;
  EXPECT_DOUBLE_EQ(derive_peak_power(pump), 2.0 * base);
  pump.average_power_mw = 0.0;
  EXPECT_EQ(derive_peak_power(pump), 0.0);
}

TEST(NonlinearGamma, GoldenZeroAndLinear) {
  const Fixture f;
  EXPECT_NEAR(nonlinear_gamma(f.cfg.nonlinear, f.at(1.0), 400.0), kGammaOneBar, 1e-10 * kGammaOneBar);
  EXPECT_EQ(nonlinear_gamma(f.cfg.nonlinear, f.at(0.0), 400.0), 0.0);
  const double g1 = nonlinear_gamma(f.cfg.nonlinear, f.at(0.4), 400.0);
  const double g2 = nonlinear_gamma(f.cfg.nonlinear, f.at(1.2), 400.0);
  EXPECT_NEAR(g2 / g1, 3.0, 1e-12);
}

TEST(Mismatch, DegenerateIsZeroWithoutNonlinearPhase) {
  Fixture f;
  f.cfg.nonlinear.include_nonlinear_phase = false;
  EXPECT_EQ(mismatch(f.at(0.79), f.cfg.pump, f.cfg.nonlinear, 400.0), 0.0);
  f.cfg.nonlinear.include_nonlinear_phase = true;
  const double phase = 2.0 * nonlinear_gamma(f.cfg.nonlinear, f.at(0.79), 400.0) * 1e-3 * derive_peak_power(f.cfg.pump);
  EXPECT_NEAR(mismatch(f.at(0.79), f.cfg.pump, f.cfg.nonlinear, 400.0), -phase, 1e-12 * phase);
}

TEST(Mismatch, ChangesSignAroundTheOperatingSignal) {
  const Fixture f;
  const double lo = mismatch(f.at(0.79), f.cfg.pump, f.cfg.nonlinear, 255.0);
  const double hi = mismatch(f.at(0.79), f.cfg.pump, f.cfg.nonlinear, 280.0);
  EXPECT_LT(lo * hi, 0.0);
}

TEST(Mismatch, NamesTheLegInsideABand) {
  const Fixture f;
  const auto env = f.at(0.79);
  const double edge = resonance_wavelengths(env, 1).front().wavelength_nm;
  // Signal whose conjugate idler lands on the first-order line.
  const double signal = 1.0 / (2.0 / 400.0 - 1.0 / edge);
  try {
    mismatch(env, f.cfg.pump, f.cfg.nonlinear, signal);
    FAIL() << "expected a band error";
  } catch (const BandError& e) {
    EXPECT_EQ(e.leg(), Leg::idler);
    EXPECT_EQ(e.order(), 1);
  }
}

TEST(FourWaveMismatch, SymmetricDispersionHasDegenerateRoot) {
  const double wp = 2.0 * kPi * kSpeedOfLight / 400e-9;
  // beta(omega) = a + b (omega - omega_p) + c (omega - omega_p)^2
  const double a = 1.5e7, b = 3.4e-9, c = 2.0e-26;
  const auto beta = [&](double nm) {
    const double d = 2.0 * kPi * kSpeedOfLight / (nm * 1e-9) - wp;
    return a + b * d + c * d * d;
  };
  EXPECT_NEAR(four_wave_mismatch(beta, 400.0, 400.0, 0.0), 0.0, 1e-7);
  for (double s : {300.0, 350.0, 390.0}) {
    const double d = 2.0 * kPi * kSpeedOfLight / (s * 1e-9) - wp;
    EXPECT_NEAR(four_wave_mismatch(beta, 400.0, s, 0.0), -2.0 * c * d * d, 1e-7 + 1e-9 * c * d * d) << s;
  }
}

TEST(SolveTuningPoint, AnchorPressures) {
  const Fixture f;
  const auto low = f.solve(0.79).primary();
  EXPECT_NEAR(frequency_thz(low.signal_nm) / frequency_thz(266.0), 1.0, 0.02);
  EXPECT_NEAR(frequency_thz(low.idler_nm) / frequency_thz(800.0), 1.0, 0.05);
  const auto high = f.solve(1.32).primary();
  EXPECT_NEAR(frequency_thz(high.signal_nm) / frequency_thz(235.0), 1.0, 0.02);
  EXPECT_NEAR(frequency_thz(high.idler_nm) / frequency_thz(1342.0), 1.0, 0.05);
  EXPECT_GT(high.idler_nm / high.signal_nm, 4.0);
}

TEST(SolveTuningPoint, SolutionsConserveEnergyAndAreOrdered) {
  const Fixture f;
  testing::for_all(
      25, 32, [](testing::Rng& rng) { return testing::uniform(rng, 0.79, 1.32); },
      [&](double p) {
        for (const auto& r : f.solve(p).roots) {
          EXPECT_LT(r.energy_residual(400.0), 1e-12);
          EXPECT_LT(r.signal_nm, 400.0);
          EXPECT_GT(r.idler_nm, 400.0);
          EXPECT_DOUBLE_EQ(r.pressure_bar, p);
        }
      });
}

TEST(SolveTuningPoint, IndependentOfBracketAroundSingleRoot) {
  const Fixture f;
  const auto a = f.solve(0.79, {255.0, 280.0});
  const auto b = f.solve(0.79, {262.0, 275.5});
  ASSERT_EQ(a.roots.size(), 1u);
  ASSERT_EQ(b.roots.size(), 1u);
  EXPECT_NEAR(a.primary().signal_nm, b.primary().signal_nm, 1e-5);
}

TEST(SolveTuningPoint, NoSignChangeIsNoRoot) {
  const Fixture f;
  EXPECT_THROW(f.solve(0.79, {290.0, 330.0}), NoRootError);
}

TEST(SolveTuningPoint, NonlinearPhaseShiftIsSmall) {
  const Fixture f;
  NonlinearParams off = f.cfg.nonlinear;
  off.include_nonlinear_phase = false;
  for (double p : {0.79, 1.05, 1.32}) {
    const double with = f.solve(p).primary().idler_nm;
    const double without = f.solve(p, {}, IndexVariant::resonant, &off).primary().idler_nm;
    EXPECT_LT(std::abs(with - without), 40.0) << p;
  }
}

TEST(TuningCurve, MonotoneOverOperatingRange) {
  const Fixture f;
  const auto curve = tuning_curve(f.cfg.environment, f.cfg.pump, f.cfg.nonlinear, 0.79, 1.32, 0.05,
                                  f.cfg.signal_search, IndexVariant::resonant, f.cfg.solver);
  const auto pts = curve.points();
  ASSERT_EQ(pts.size(), 12u);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    EXPECT_LT(pts[k].signal_nm, pts[k - 1].signal_nm);
    EXPECT_GT(pts[k].idler_nm, pts[k - 1].idler_nm);
  }
  EXPECT_DOUBLE_EQ(pts.back().pressure_bar, 1.32);
}

TEST(TuningCurve, EmptyRangeIsEmpty) {
  const Fixture f;
  const auto curve = tuning_curve(f.cfg.environment, f.cfg.pump, f.cfg.nonlinear, 1.0, 0.9, 0.01, f.cfg.signal_search);
  EXPECT_TRUE(curve.entries.empty());
  EXPECT_TRUE(pressure_grid(1.0, 0.9, 0.01).empty());
  EXPECT_EQ(pressure_grid(1.0, 1.0, 0.01).size(), 1u);
}

TEST(TuningCurve, BaselineDiffersFromResonant) {
  const Fixture f;
  const auto r = f.solve(1.0).primary();
  const auto b = f.solve(1.0, {}, IndexVariant::baseline).primary();
  EXPECT_GT(std::abs(r.idler_nm - b.idler_nm), 1.0);
}

TEST(TuningRate, ConstantCurveHasZeroSlope) {
  TuningCurve curve;
  PhaseMatchPoint p;
  p.signal_nm = 266.0;
  p.idler_nm = conjugate_idler(400.0, 266.0);
  PhaseMatchSolution s;
  s.roots = {p};
  for (int k = 0; k < 4; ++k) {
    s.roots[0].pressure_bar = 0.9;
    curve.entries.push_back({0.9, s});
  }
  const auto rate = tuning_rate(curve);
  EXPECT_EQ(rate.detuning_slope_thz_per_bar, 0.0);
  EXPECT_EQ(rate.detuning_span_thz, 0.0);
  EXPECT_THROW(tuning_rate(TuningCurve{}), ArgumentError);
}

TEST(TuningRate, StraightLineSlope) {
  TuningCurve curve;
  for (int k = 0; k < 5; ++k) {
    const double p = 1.0 + 0.1 * k;
    const double fs = frequency_thz(400.0) + 100.0 + 30.0 * k;  // 300 THz/bar
    PhaseMatchPoint pt;
    pt.pressure_bar = p;
    pt.signal_nm = kSpeedOfLight / (fs * 1e12) * 1e9;
    pt.idler_nm = conjugate_idler(400.0, pt.signal_nm);
    curve.entries.push_back({p, PhaseMatchSolution{{pt}}});
  }
  const auto rate = tuning_rate(curve);
  EXPECT_NEAR(rate.detuning_slope_thz_per_bar, 300.0, 1e-6);
  EXPECT_NEAR(rate.separation_slope_thz_per_bar, 600.0, 1e-6);
  EXPECT_NEAR(rate.detuning_span_thz, 120.0, 1e-6);
  EXPECT_EQ(rate.points, 5u);
}

}  // namespace
}  // namespace pcfpair
