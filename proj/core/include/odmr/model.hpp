#pragma once

// Steady-state response of a single NV center in the reduced bright/dark
// two-mode picture. All frequencies are ordinary frequencies in MHz.

namespace odmr {

struct CenterParams {
  double d_zfs = 2870.0;  // zero-field splitting D
  double e1 = 0.0;        // strain splitting the bright/dark modes
  double e2 = 0.0;        // strain coupling the bright/dark modes
  double zeeman = 0.0;    // longitudinal Zeeman frequency, couples the modes
  double gamma_b = 0.3;   // homogeneous half-width of the bright mode
  double gamma_d = 0.3;   // homogeneous half-width of the dark mode
  double drive = 2.0;     // microwave amplitude

  friend bool operator==(const CenterParams&, const CenterParams&) = default;
};

struct PopulationPair {
  double n_bright = 0.0;
  double n_dark = 0.0;

  double total() const { return n_bright + n_dark; }
};

struct FrequencyPair {
  double lower = 0.0;
  double upper = 0.0;
};

// Throws ConfigError unless gamma_b, gamma_d, d_zfs > 0, drive >= 0 and every
// field is finite.
void validate(const CenterParams& c);

// (D - E1, D + E1). Bright mode first, so `lower` is not necessarily smaller.
FrequencyPair bright_dark_frequencies(const CenterParams& c);

PopulationPair steady_state_populations(const CenterParams& c, double probe_mhz);

double excitation_probability(const CenterParams& c, double probe_mhz);

// 2 sqrt(J^2 + E1^2 + E2^2): eigenvalue gap of the coupled bright/dark block.
double peak_splitting(const CenterParams& c);

// Eigenfrequencies D -/+ splitting/2 of the coupled block.
FrequencyPair transition_frequencies(const CenterParams& c);

namespace detail {

// Hot-path kernel without validation; callers guarantee positive damping.
inline double excitation_unchecked(const CenterParams& c, double probe) noexcept {
  const double xb = probe - (c.d_zfs - c.e1);
  const double xd = probe - (c.d_zfs + c.e1);
  const double coupling = c.zeeman * c.zeeman + c.e2 * c.e2;
  const double re = xb * xd - c.gamma_b * c.gamma_d - coupling;
  const double im = xb * c.gamma_d + xd * c.gamma_b;
  const double num = xd * xd + c.gamma_d * c.gamma_d + coupling;
  return c.drive * c.drive * num / (re * re + im * im);
}

}  // namespace detail

}  // namespace odmr
