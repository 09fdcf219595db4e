#pragma once

#include <vector>

namespace odmr {

// One crystallographic NV orientation class: population weight and the
// magnitude of the cosine between the NV axis and the applied field.
struct AxisClass {
  double weight = 0.0;
  double projection = 0.0;
};

struct ZeemanConstants {
  double g_factor = 2.0028;
  double bohr_mhz_per_mt = 13.996245;  // mu_B / h
};

struct AxisPopulation {
  std::vector<AxisClass> classes;
  double applied_field_mt = 0.0;  // magnitude, along [111]
  ZeemanConstants constants;

  // Four <111> orientations under a field along [111].
  static AxisPopulation along_111(double field_mt, ZeemanConstants constants = {});

  // Throws ConfigError: weights must sum to 1, projections lie in [0, 1].
  void validate() const;
};

// [(1/4, 1), (3/4, 1/3)]: the aligned axis, then the three equivalent
// misaligned axes merged into one class.
std::vector<AxisClass> axis_projections_111();

double zeeman_frequency(double field_mt, double projection, const ZeemanConstants& k = {});

}  // namespace odmr
