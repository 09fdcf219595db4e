#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "odmr/disorder.hpp"
#include "odmr/geometry.hpp"

namespace odmr {

// Uniform probe-frequency axis, MHz. A single point sits at `start`.
struct FrequencyGrid {
  double start = 2850.0;
  double stop = 2890.0;
  std::size_t points = 801;

  static FrequencyGrid with_spacing(double start, double stop, double spacing);

  void validate() const;
  double at(std::size_t i) const;
  double spacing() const;
  std::vector<double> values() const;
};

enum class SpectrumKind { excitation, signal };

struct SpectrumMetadata {
  std::uint64_t seed = 0;
  std::size_t ensemble_size = 0;
  double drive_rms = 0.0;  // sqrt of the mean squared drive amplitude
  double applied_field_mt = 0.0;
  // Only meaningful for kind == signal.
  double i0 = 1.0;
  double a = 0.0;
};

struct Spectrum {
  FrequencyGrid grid;
  std::vector<double> values;
  SpectrumKind kind = SpectrumKind::excitation;
  SpectrumMetadata metadata;
};

// Mean excitation probability over the ensemble at one probe frequency,
// summed sequentially in index order.
double ensemble_excitation(const EnsembleSample& ensemble, double probe_mhz);

// Ensemble mean at each frequency; frequency points are split across
// `workers` threads (0 = worker_count()). Output does not depend on workers.
std::vector<double> ensemble_excitation(const EnsembleSample& ensemble,
                                        std::span<const double> probes_mhz,
                                        unsigned workers = 0);

Spectrum compute_spectrum(const EnsembleSample& ensemble, const FrequencyGrid& grid,
                          unsigned workers = 0);

// (i0 - a P_e) / i0 applied pointwise.
Spectrum to_signal(const Spectrum& excitation, double i0, double a);

// Mean of the squared per-center drive amplitudes.
double drive_moment(const EnsembleSample& ensemble);

// Everything needed to regenerate an ensemble except the applied field.
struct SimulationSetup {
  DisorderSpec disorder;
  ZeemanConstants zeeman;
  std::size_t ensemble_size = 200000;
  std::uint64_t seed = 20150601;

  EnsembleSample draw(double applied_field_mt) const;
};

Spectrum simulate(const SimulationSetup& setup, double applied_field_mt,
                  const FrequencyGrid& grid, unsigned workers = 0);

}  // namespace odmr
