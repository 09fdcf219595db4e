#include "odmr/model.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "odmr/errors.hpp"

namespace odmr {

void validate(const CenterParams& c) {
  for (double v : {c.d_zfs, c.e1, c.e2, c.zeeman, c.gamma_b, c.gamma_d, c.drive}) {
    if (!std::isfinite(v)) throw ConfigError("center parameters must be finite");
  }
  if (c.gamma_b <= 0.0 || c.gamma_d <= 0.0) {
    throw ConfigError("damping rates gamma_b and gamma_d must be positive (got " +
                      std::to_string(c.gamma_b) + ", " + std::to_string(c.gamma_d) + ")");
  }
  if (c.d_zfs <= 0.0) throw ConfigError("zero-field splitting must be positive");
  if (c.drive < 0.0) throw ConfigError("drive amplitude must be non-negative");
}

FrequencyPair bright_dark_frequencies(const CenterParams& c) {
  return {c.d_zfs - c.e1, c.d_zfs + c.e1};
}

PopulationPair steady_state_populations(const CenterParams& c, double probe_mhz) {
  validate(c);
  using cplx = std::complex<double>;
  const auto [wb, wd] = bright_dark_frequencies(c);
  const cplx bright_factor(probe_mhz - wd, c.gamma_d);
  const cplx q = cplx(probe_mhz - wb, c.gamma_b) * bright_factor -
                 (c.zeeman * c.zeeman + c.e2 * c.e2);
  const double q2 = std::norm(q);
  const cplx dark_factor(c.zeeman, -c.e2);
  const double lam2 = c.drive * c.drive;
  return {lam2 * std::norm(bright_factor) / q2, lam2 * std::norm(dark_factor) / q2};
}

double excitation_probability(const CenterParams& c, double probe_mhz) {
  return steady_state_populations(c, probe_mhz).total();
}

double peak_splitting(const CenterParams& c) {
  return 2.0 * std::sqrt(c.zeeman * c.zeeman + c.e1 * c.e1 + c.e2 * c.e2);
}

FrequencyPair transition_frequencies(const CenterParams& c) {
  const double half = 0.5 * peak_splitting(c);
  return {c.d_zfs - half, c.d_zfs + half};
}

}  // namespace odmr
