#include "odmr/spectrum.hpp"

#include <cmath>

#include "odmr/errors.hpp"
#include "odmr/model.hpp"
#include "odmr/parallel.hpp"

namespace odmr {

FrequencyGrid FrequencyGrid::with_spacing(double start, double stop, double spacing) {
  if (!(spacing > 0.0) || !(stop > start)) throw ConfigError("invalid grid spacing or range");
  const auto points = static_cast<std::size_t>(std::llround((stop - start) / spacing)) + 1;
  FrequencyGrid g{start, stop, points};
  g.validate();
  return g;
}

void FrequencyGrid::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop)) throw ConfigError("grid bounds must be finite");
  if (points == 0) throw ConfigError("grid needs at least one point");
  if (points > 1 && !(start < stop)) throw ConfigError("grid start must be below stop");
}

double FrequencyGrid::at(std::size_t i) const {
  if (points == 1) return start;
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
}

double FrequencyGrid::spacing() const {
  return points > 1 ? (stop - start) / static_cast<double>(points - 1) : 0.0;
}

std::vector<double> FrequencyGrid::values() const {
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) v[i] = at(i);
  return v;
}

double ensemble_excitation(const EnsembleSample& ensemble, double probe_mhz) {
  const auto& centers = ensemble.centers();
  if (centers.empty()) throw ConfigError("ensemble is empty");
  double sum = 0.0;
  for (const auto& c : centers) sum += detail::excitation_unchecked(c, probe_mhz);
  const double mean = sum / static_cast<double>(centers.size());
  if (!std::isfinite(mean)) {
    throw NumericalError("non-finite excitation probability at " + std::to_string(probe_mhz) +
                         " MHz");
  }
  return mean;
}

std::vector<double> ensemble_excitation(const EnsembleSample& ensemble,
                                        std::span<const double> probes_mhz, unsigned workers) {
  std::vector<double> out(probes_mhz.size());
  parallel_for(probes_mhz.size(), workers == 0 ? worker_count() : workers,
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   out[i] = ensemble_excitation(ensemble, probes_mhz[i]);
                 }
               });
  return out;
}

double drive_moment(const EnsembleSample& ensemble) {
  const auto& centers = ensemble.centers();
  if (centers.empty()) throw ConfigError("ensemble is empty");
  double sum = 0.0;
  for (const auto& c : centers) sum += c.drive * c.drive;
  return sum / static_cast<double>(centers.size());
}

Spectrum compute_spectrum(const EnsembleSample& ensemble, const FrequencyGrid& grid,
                          unsigned workers) {
  grid.validate();
  const auto probes = grid.values();
  Spectrum s;
  s.grid = grid;
  s.kind = SpectrumKind::excitation;
  s.values = ensemble_excitation(ensemble, probes, workers);
  s.metadata.seed = ensemble.seed();
  s.metadata.ensemble_size = ensemble.size();
  s.metadata.drive_rms = std::sqrt(drive_moment(ensemble));
  if (ensemble.geometry()) s.metadata.applied_field_mt = ensemble.geometry()->applied_field_mt;
  return s;
}

Spectrum to_signal(const Spectrum& excitation, double i0, double a) {
  if (!(i0 > 0.0)) throw ConfigError("baseline intensity i0 must be positive");
  if (excitation.kind != SpectrumKind::excitation) {
    throw ConfigError("to_signal expects an excitation spectrum");
  }
  Spectrum s = excitation;
  s.kind = SpectrumKind::signal;
  s.metadata.i0 = i0;
  s.metadata.a = a;
  for (double& v : s.values) v = (i0 - a * v) / i0;
  return s;
}

EnsembleSample SimulationSetup::draw(double applied_field_mt) const {
  return draw_ensemble(disorder, AxisPopulation::along_111(applied_field_mt, zeeman),
                       ensemble_size, seed);
}

Spectrum simulate(const SimulationSetup& setup, double applied_field_mt,
                  const FrequencyGrid& grid, unsigned workers) {
  return compute_spectrum(setup.draw(applied_field_mt), grid, workers);
}

}  // namespace odmr
