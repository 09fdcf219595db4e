#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odmr/spectrum.hpp"

namespace odmr {

// A normalized ODMR trace: signal = (I0 - a P_e) / I0 at each frequency.
struct MeasuredSpectrum {
  std::vector<double> frequency_mhz;
  std::vector<double> signal;
  std::vector<double> weights;  // empty = uniform
  double applied_field_mt = 0.0;
  std::string label;

  // Throws DataError: >= 10 points, strictly increasing finite frequencies,
  // finite signal, matching weights.
  void validate() const;

  // Points with frequency in [lo, hi].
  MeasuredSpectrum window(double lo_mhz, double hi_mhz) const;
};

enum class FitField : std::size_t { gamma, delta_b, delta_e, a_over_i0, d_zfs, drive };
inline constexpr std::size_t kFitFieldCount = 6;
inline constexpr std::array<FitField, kFitFieldCount> kAllFitFields{
    FitField::gamma,     FitField::delta_b, FitField::delta_e,
    FitField::a_over_i0, FitField::d_zfs,   FitField::drive};

std::string_view to_string(FitField f);
std::optional<FitField> parse_fit_field(std::string_view name);

struct FitParams {
  double gamma = 0.3;       // homogeneous half-width (gamma_b = gamma_d)
  double delta_b = 1.96;    // hyperfine-line HWHM of the random field
  double delta_e = 0.73;    // strain HWHM, shared by E1 and E2
  double a_over_i0 = 0.01;  // signal contrast per unit excitation
  double d_zfs = 2870.0;
  double drive = 2.0;
  std::array<bool, kFitFieldCount> fixed{};

  double& operator[](FitField f);
  double operator[](FitField f) const;
  bool is_fixed(FitField f) const { return fixed[static_cast<std::size_t>(f)]; }
  void set_fixed(FitField f, bool v = true) { fixed[static_cast<std::size_t>(f)] = v; }

  void validate() const;
};

// Order of the three estimation stages.
enum class Stage { field, dip, strain };
std::string_view to_string(Stage s);

struct EstimateConfig {
  // Shape parameters that are never fitted (D HWHM, hyperfine splitting and
  // weights, truncation), plus ensemble size and the common seed. Its fitted
  // widths are overwritten from FitParams on every evaluation.
  SimulationSetup simulation{DisorderSpec{}, ZeemanConstants{}, 30000};
  int max_iterations = 500;
  double tolerance = 1e-3;
  double dip_half_width_mhz = 3.0;
  // Refit a_over_i0 alongside delta_e in the strain stage.
  bool refit_scale = true;
  // Extra rounds of the whole stage order; later field stages see the
  // estimated delta_e instead of the nominal one.
  int refinement_passes = 0;
  // Finish with a joint fit of every free field on both traces, started from
  // the staged estimate.
  bool joint_polish = true;
  std::vector<Stage> stage_order{Stage::field, Stage::dip, Stage::strain};
};

struct StageRecord {
  std::string name;
  std::string dataset;
  std::vector<std::string> fitted;
  FitParams params;
  double residual = 0.0;  // on this stage's data
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  FitParams params;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<StageRecord> stages;
};

// Disorder spec realized by `p` on top of the fixed shape parameters.
DisorderSpec disorder_for(const FitParams& p, const DisorderSpec& base);

// Model signal at the dataset's frequencies and applied field.
std::vector<double> model_signal(const FitParams& p, const MeasuredSpectrum& data,
                                 const EstimateConfig& config);

double residual_sse(const FitParams& p, std::span<const MeasuredSpectrum> data,
                    const EstimateConfig& config);

// Simplex over the non-fixed fields of `initial` on all datasets jointly.
FitResult fit(std::span<const MeasuredSpectrum> data, const FitParams& initial,
              const EstimateConfig& config);

// Field stage on `with_field` (delta_b, a_over_i0, drive, d_zfs; delta_e held
// at initial.delta_e), dip stage on the zero-field window d_zfs +/- dip
// half-width (gamma), strain stage on the full zero-field trace (delta_e),
// then the optional joint polish. Fields fixed in `initial` stay fixed.
FitResult staged_estimate(const MeasuredSpectrum& zero_field, const MeasuredSpectrum& with_field,
                          const FitParams& initial, const EstimateConfig& config);

}  // namespace odmr
