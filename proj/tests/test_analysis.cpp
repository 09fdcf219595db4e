#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "odmr/analysis.hpp"
#include "odmr/errors.hpp"
#include "odmr/random.hpp"

namespace odmr {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

TEST(OdeOracle, ZeroDrive) {
  CenterParams c;
  c.drive = 0.0;
  c.zeeman = 0.7;
  const auto p = ode_steady_state_oracle(c, 2869.0);
  EXPECT_EQ(p.n_bright, 0.0);
  EXPECT_EQ(p.n_dark, 0.0);
}

TEST(OdeOracle, ResonantUncoupled) {
  const CenterParams c{2870, 0, 0, 0, 0.3, 0.3, 2.0};
  const auto p = ode_steady_state_oracle(c, 2870.0);
  EXPECT_LT(rel(p.n_bright, 4.0 / 0.09), 1e-6);
  EXPECT_EQ(p.n_dark, 0.0);
}

TEST(OdeOracle, CoupledResonantCase) {
  const CenterParams c{2870, 0, 0, 1.0, 0.3, 0.3, 2.0};
  const auto p = ode_steady_state_oracle(c, 2870.0);
  EXPECT_LT(rel(p.n_bright, 0.36 / (1.09 * 1.09)), 1e-6);
  EXPECT_LT(rel(p.n_dark, 4.0 / (1.09 * 1.09)), 1e-6);
  EXPECT_NEAR(p.n_bright, 0.30301, 1e-5);
  EXPECT_NEAR(p.n_dark, 3.36672, 1e-5);
}

TEST(OdeOracle, AgreesWithClosedFormOnRandomCenters) {
  CounterStream u(424242, 0, DrawTag::drive);
  for (int k = 0; k < 200; ++k) {
    CenterParams c;
    c.d_zfs = 2870 + 4 * (u.next() - 0.5);
    c.e1 = 3 * (u.next() - 0.5);
    c.e2 = 3 * (u.next() - 0.5);
    c.zeeman = 6 * (u.next() - 0.5);
    c.gamma_b = 0.1 + 0.9 * u.next();
    c.gamma_d = 0.1 + 0.9 * u.next();
    c.drive = 0.5 + 2.5 * u.next();
    const double w = 2870 + 10 * (u.next() - 0.5);
    const auto ode = ode_steady_state_oracle(c, w);
    const auto exact = steady_state_populations(c, w);
    EXPECT_LT(rel(ode.n_bright, exact.n_bright), 1e-6) << k;
    EXPECT_LT(rel(ode.n_dark, exact.n_dark), 1e-6) << k;
  }
}

TEST(OdeOracle, RejectsUnstableStepOrShortHorizon) {
  const CenterParams c{2870, 0.5, 0.1, 1.0, 0.3, 0.3, 2.0};
  EXPECT_THROW(ode_steady_state_oracle(c, 2870.0, {std::nullopt, 5.0}), ConfigError);
  EXPECT_THROW(ode_steady_state_oracle(c, 2870.0, {1.0, std::nullopt}), ConfigError);
  EXPECT_NO_THROW(ode_steady_state_oracle(c, 2870.0, {40.0, 0.05}));
}

std::vector<double> axis(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  return x;
}

TEST(PeakReport, LorentzianWidthIsTwiceGamma) {
  for (double gamma : {0.15, 0.3, 0.8}) {
    const CenterParams c{2870, 0, 0, 0, gamma, gamma, 2.0};
    const auto x = axis(2820, 2920, 10001);
    std::vector<double> y;
    for (double w : x) y.push_back(excitation_probability(c, w));
    const auto r = peak_report(x, y);
    ASSERT_EQ(r.peaks.size(), 1u);
    EXPECT_NEAR(r.peaks[0].fwhm, 2 * gamma, 0.01);
    EXPECT_NEAR(r.peaks[0].frequency, 2870.0, 1e-6);
    EXPECT_NEAR(r.peaks[0].height, 4.0 / (gamma * gamma), 1e-9);
    EXPECT_FALSE(r.dip.has_value());
  }
}

TEST(PeakReport, FlatInputIsEmpty) {
  const auto x = axis(0, 1, 50);
  const std::vector<double> y(50, 0.7);
  const auto r = peak_report(x, y);
  EXPECT_TRUE(r.peaks.empty());
  EXPECT_FALSE(r.dip.has_value());
}

TEST(PeakReport, NeedsTenPoints) {
  const auto x = axis(0, 1, 9);
  const std::vector<double> y(9, 0.0);
  EXPECT_THROW(peak_report(x, y), DataError);
}

TEST(PeakReport, TwoLinesAndDip) {
  const CenterParams a{2865, 0, 0, 0, 0.3, 0.3, 1.0};
  const CenterParams b{2875, 0, 0, 0, 0.3, 0.3, 1.0};
  const auto x = axis(2855, 2885, 3001);
  std::vector<double> y;
  for (double w : x) y.push_back(excitation_probability(a, w) + 2 * excitation_probability(b, w));
  const auto r = peak_report(x, y);
  ASSERT_EQ(r.peaks.size(), 2u);
  EXPECT_NEAR(r.peaks[0].frequency, 2865.0, 0.01);
  EXPECT_NEAR(r.peaks[1].frequency, 2875.0, 0.01);
  EXPECT_NEAR(r.peaks[1].area / r.peaks[0].area, 2.0, 0.1);
  ASSERT_TRUE(r.dip.has_value());
  EXPECT_GT(r.dip->frequency, 2865.0);
  EXPECT_LT(r.dip->frequency, 2875.0);
  EXPECT_GT(r.dip->depth, 0.0);
}

TEST(PeakReport, SignalSpectraAreInverted) {
  const CenterParams c{2870, 0, 0, 0, 0.3, 0.3, 2.0};
  Spectrum s{FrequencyGrid{2860, 2880, 401}, {}, SpectrumKind::excitation, {}};
  for (double w : s.grid.values()) s.values.push_back(excitation_probability(c, w));
  const auto sig = to_signal(s, 1.0, 0.01);
  const auto r = peak_report(sig);
  ASSERT_EQ(r.peaks.size(), 1u);
  EXPECT_NEAR(r.peaks[0].frequency, 2870.0, 1e-6);
  EXPECT_NEAR(r.peaks[0].fwhm, peak_report(s).peaks[0].fwhm, 1e-9);
}

TEST(PeakReport, ZeroFieldEnsembleSpectrum) {
  SimulationSetup setup;
  setup.ensemble_size = 50000;
  const auto r = peak_report(simulate(setup, 0.0, FrequencyGrid{2850, 2890, 801}));
  ASSERT_EQ(r.peaks.size(), 2u);
  ASSERT_TRUE(r.dip.has_value());
  EXPECT_NEAR(r.dip->frequency, 2870.0, 0.5);
  for (const auto& p : r.peaks) EXPECT_GT(p.fwhm, 0.0);
}

TEST(SweepParameterNames, RoundTrip) {
  for (auto p : {SweepParameter::gamma, SweepParameter::delta_b, SweepParameter::delta_e}) {
    EXPECT_EQ(parse_sweep_parameter(to_string(p)), p);
  }
  EXPECT_THROW(parse_sweep_parameter("zfs"), ConfigError);
  const auto d = with_parameter(DisorderSpec{}, SweepParameter::delta_e, 1.5);
  EXPECT_EQ(d.e1_dist.hwhm, 1.5);
  EXPECT_EQ(d.e2_dist.hwhm, 1.5);
  const auto g = with_parameter(DisorderSpec{}, SweepParameter::gamma, 0.7);
  EXPECT_EQ(g.gamma_b, 0.7);
  EXPECT_EQ(g.gamma_d, 0.7);
  EXPECT_EQ(with_parameter(DisorderSpec{}, SweepParameter::delta_b, 4).field_dist.hwhm, 4);
}

SweepConfig sweep_config(double field, FrequencyGrid grid) {
  SweepConfig c;
  c.setup.ensemble_size = 30000;
  c.setup.seed = 5;
  c.applied_field_mt = field;
  c.grid = grid;
  return c;
}

TEST(Sweep, GammaFillsDip) {
  const auto g = sweep(sweep_config(0.0, {2850, 2890, 801}), SweepParameter::gamma, {0.1, 0.3, 1.0});
  ASSERT_EQ(g.metrics.size(), 3u);
  ASSERT_EQ(g.spectra.size(), 3u);
  EXPECT_GT(g.metrics[0].dip_depth, g.metrics[1].dip_depth);
  EXPECT_GT(g.metrics[1].dip_depth, g.metrics[2].dip_depth);
}

TEST(Sweep, AlignedWidthIgnoresStrainAtTwoMillitesla) {
  const auto g = sweep(sweep_config(2.0, {2790, 2950, 1601}), SweepParameter::delta_e,
                       {0.37, 0.73, 1.46});
  const double ref = *g.metrics[1].aligned_fwhm;
  for (const auto& m : g.metrics) EXPECT_LT(std::abs(*m.aligned_fwhm - ref) / ref, 0.05);
}

TEST(Sweep, AlignedWidthGrowsWithFieldDisorder) {
  const auto g = sweep(sweep_config(2.0, {2790, 2950, 1601}), SweepParameter::delta_b, {1, 2, 4});
  EXPECT_LT(*g.metrics[0].aligned_fwhm, *g.metrics[1].aligned_fwhm);
  EXPECT_LT(*g.metrics[1].aligned_fwhm, *g.metrics[2].aligned_fwhm);
}

TEST(Sweep, RejectsShortOrUnsortedValues) {
  const auto c = sweep_config(0.0, {2850, 2890, 21});
  EXPECT_THROW(sweep(c, SweepParameter::gamma, {0.1, 0.3}), ConfigError);
  EXPECT_THROW(sweep(c, SweepParameter::gamma, {0.3, 0.1, 1.0}), ConfigError);
}

TEST(Sweep, DeterministicForFixedSeed) {
  const auto c = sweep_config(0.0, {2860, 2880, 101});
  const auto a = sweep(c, SweepParameter::gamma, {0.2, 0.3, 0.4});
  const auto b = sweep(c, SweepParameter::gamma, {0.2, 0.3, 0.4});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.spectra[i].values, b.spectra[i].values);
}

TEST(Degeneracy, Limits) {
  const auto e = draw_ensemble(DisorderSpec{}, AxisPopulation::along_111(0.0), 20000, 3);
  const std::vector<double> eps{0.0, 1e9};
  const auto f = degeneracy_fraction(e, eps);
  EXPECT_EQ(f[0], 0.0);
  EXPECT_EQ(f[1], 1.0);
  const auto g = degeneracy_fraction(DisorderSpec{}, 20000, 3, eps);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 1.0);
}

TEST(Degeneracy, StreamingMatchesStoredEnsemble) {
  const std::vector<double> eps{0.3, 0.6, 1.2};
  const auto e = draw_ensemble(DisorderSpec{}, AxisPopulation::along_111(0.0), 100000, 17);
  EXPECT_EQ(degeneracy_fraction(e, eps), degeneracy_fraction(DisorderSpec{}, 100000, 17, eps));
}

TEST(Degeneracy, VolumeScaling) {
  const std::vector<double> eps{0.1, 0.2};
  const auto f = degeneracy_fraction(DisorderSpec{}, 30'000'000, 99, eps);
  ASSERT_GT(f[0], 0.0);
  EXPECT_NEAR(f[1] / f[0], 8.0, 2.0);
}

}  // namespace
}  // namespace odmr
