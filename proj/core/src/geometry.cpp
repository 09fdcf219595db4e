#include "odmr/geometry.hpp"

#include <cmath>

#include "odmr/errors.hpp"

namespace odmr {

std::vector<AxisClass> axis_projections_111() {
  // [111].[111]/3 = 1; |[111].[1,-1,-1]|/3 = 1/3 for the other three axes.
  return {{0.25, 1.0}, {0.75, 1.0 / 3.0}};
}

AxisPopulation AxisPopulation::along_111(double field_mt, ZeemanConstants constants) {
  AxisPopulation p{axis_projections_111(), field_mt, constants};
  p.validate();
  return p;
}

void AxisPopulation::validate() const {
  if (classes.empty()) throw ConfigError("axis population has no classes");
  if (!std::isfinite(applied_field_mt) || applied_field_mt < 0.0) {
    throw ConfigError("applied field must be finite and non-negative");
  }
  if (!(constants.g_factor > 0.0) || !(constants.bohr_mhz_per_mt > 0.0)) {
    throw ConfigError("Zeeman constants must be positive");
  }
  double sum = 0.0;
  for (const auto& c : classes) {
    if (!(c.weight >= 0.0)) throw ConfigError("axis class weight must be non-negative");
    if (!(c.projection >= 0.0 && c.projection <= 1.0)) {
      throw ConfigError("axis projection must lie in [0, 1]");
    }
    sum += c.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("axis class weights must sum to 1");
}

double zeeman_frequency(double field_mt, double projection, const ZeemanConstants& k) {
  if (!(projection >= 0.0 && projection <= 1.0)) {
    throw ConfigError("axis projection must lie in [0, 1]");
  }
  return k.g_factor * k.bohr_mhz_per_mt * field_mt * projection;
}

}  // namespace odmr
