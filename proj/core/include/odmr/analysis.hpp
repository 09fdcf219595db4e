#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odmr/disorder.hpp"
#include "odmr/model.hpp"
#include "odmr/spectrum.hpp"

namespace odmr {

// ---------------------------------------------------------------------------
// Time-domain oracle
// ---------------------------------------------------------------------------

struct OdeOptions {
  // Integration time; default 40 / min(gamma_b, gamma_d).
  std::optional<double> horizon;
  // RK4 step; default 1 / (Gershgorin bound of the generator).
  std::optional<double> step;
};

// Integrates the rotating-frame amplitude equations
//   b' = -i(wb - w - i Gb) b - i(J + i J') d - i lambda
//   d' = -i(wd - w - i Gd) d - i(J - i J') b
// from b = d = 0 with classical RK4 and returns (|b|^2, |d|^2) at the horizon.
// Throws ConfigError when step * (spectral bound) > 2.5 or when the horizon is
// shorter than 5 / min(gamma).
PopulationPair ode_steady_state_oracle(const CenterParams& c, double probe_mhz,
                                       const OdeOptions& options = {});

// ---------------------------------------------------------------------------
// Peak metrology
// ---------------------------------------------------------------------------

struct Peak {
  double frequency = 0.0;  // parabolic refinement of the grid maximum
  double height = 0.0;
  double prominence = 0.0;
  double fwhm = 0.0;  // full width at half prominence, linear interpolation
  double area = 0.0;  // trapezoid integral between the neighbouring valleys
};

struct Dip {
  double frequency = 0.0;
  double depth = 0.0;  // min(flanking peak heights) - value at the dip
};

struct PeakReport {
  std::vector<Peak> peaks;  // sorted by frequency
  std::optional<Dip> dip;
};

// Local maxima whose prominence is at least `prominence_fraction` of the
// value range. The dip is the deepest point between the two tallest peaks.
// Needs at least 10 points; a flat input yields an empty report.
PeakReport peak_report(std::span<const double> frequencies, std::span<const double> values,
                       double prominence_fraction = 0.05);

// Excitation spectra are analysed as-is; signal spectra as 1 - signal so that
// resonances are maxima.
PeakReport peak_report(const Spectrum& s, double prominence_fraction = 0.05);

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

enum class SweepParameter { gamma, delta_b, delta_e };

std::string_view to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(std::string_view name);

// Returns `spec` with one width replaced: gamma sets gamma_b and gamma_d,
// delta_b the hyperfine-line HWHM, delta_e both strain HWHMs.
DisorderSpec with_parameter(DisorderSpec spec, SweepParameter p, double value);

struct SweepConfig {
  SimulationSetup setup;
  double applied_field_mt = 0.0;
  FrequencyGrid grid;
  double prominence_fraction = 0.05;
};

struct SweepMetrics {
  double parameter_value = 0.0;
  std::size_t peak_count = 0;
  double dip_depth = 0.0;  // 0 when no dip is resolved
  std::optional<double> dip_frequency;
  // FWHM of the peak nearest D - Zeeman(B, projection 1).
  std::optional<double> aligned_fwhm;
};

struct SweepGrid {
  SweepParameter parameter = SweepParameter::gamma;
  std::vector<double> values;
  std::vector<Spectrum> spectra;
  std::vector<SweepMetrics> metrics;
};

SweepMetrics spectrum_metrics(const Spectrum& s, double parameter_value,
                              double aligned_target_mhz, double prominence_fraction);

// One spectrum per value, all with the same seed. Values must be sorted and
// number at least 3.
SweepGrid sweep(const SweepConfig& config, SweepParameter parameter,
                std::vector<double> values);

// ---------------------------------------------------------------------------
// Degeneracy density
// ---------------------------------------------------------------------------

// Fraction of m = 0 centers with sqrt(J^2 + E1^2 + E2^2) < eps, per eps.
std::vector<double> degeneracy_fraction(const EnsembleSample& ensemble,
                                        std::span<const double> epsilons);

// Same statistic streamed over `n` zero-field draws without storing them.
std::vector<double> degeneracy_fraction(const DisorderSpec& spec, std::size_t n,
                                        std::uint64_t seed, std::span<const double> epsilons);

}  // namespace odmr
