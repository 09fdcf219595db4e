#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "odmr/analysis.hpp"
#include "odmr/estimate.hpp"
#include "odmr/spectrum.hpp"

namespace odmr {

// 17 significant digits, "%.17g".
std::string format_double(double v);

// Header `frequency_mhz,excitation` or `frequency_mhz,signal`, LF endings.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);

// Long format `parameter_value,frequency_mhz,value`.
void write_sweep_csv(std::ostream& out, const SweepGrid& grid);

// A two-column numeric table as read from disk.
struct Series {
  std::string value_column;  // header name of the second column, "" if absent
  std::vector<double> frequency_mhz;
  std::vector<double> value;
};

// Parses `frequency_mhz,<name>` CSV. A non-numeric first line is taken as the
// header. Blank lines and `#` comments are skipped. Throws DataError naming
// the offending line for malformed rows, non-finite values or frequencies
// that are not strictly increasing.
Series read_series_csv(std::istream& in, std::string_view source = "input");

// Series plus the measured-spectrum preconditions (>= 10 points).
MeasuredSpectrum read_measured_csv(std::istream& in, double applied_field_mt, std::string label);

}  // namespace odmr
