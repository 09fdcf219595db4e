#include "odmr/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "odmr/errors.hpp"

namespace odmr {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  out << "frequency_mhz," << (s.kind == SpectrumKind::signal ? "signal" : "excitation") << '\n';
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    out << format_double(s.grid.at(i)) << ',' << format_double(s.values[i]) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepGrid& grid) {
  out << "parameter_value,frequency_mhz,value\n";
  for (std::size_t k = 0; k < grid.spectra.size(); ++k) {
    const Spectrum& s = grid.spectra[k];
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      out << format_double(grid.values[k]) << ',' << format_double(s.grid.at(i)) << ','
          << format_double(s.values[i]) << '\n';
    }
  }
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(t, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == t.size();
}

}  // namespace

Series read_series_csv(std::istream& in, std::string_view source) {
  Series s;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  auto fail = [&](const std::string& what) {
    throw DataError(std::string(source) + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail("expected two comma-separated columns");
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    if (b.find(',') != std::string::npos) fail("expected two comma-separated columns");
    double f = 0.0, v = 0.0;
    const bool fa = parse_number(a, f);
    const bool fb = parse_number(b, v);
    if (first_content && !fa) {
      if (trim(a) != "frequency_mhz") fail("first column must be frequency_mhz");
      s.value_column = trim(b);
      first_content = false;
      continue;
    }
    first_content = false;
    if (!fa || !fb) fail("malformed number");
    if (!std::isfinite(f) || !std::isfinite(v)) fail("non-finite value");
    if (!s.frequency_mhz.empty() && !(f > s.frequency_mhz.back())) {
      fail("frequency " + trim(a) + " is not strictly increasing");
    }
    s.frequency_mhz.push_back(f);
    s.value.push_back(v);
  }
  return s;
}

MeasuredSpectrum read_measured_csv(std::istream& in, double applied_field_mt, std::string label) {
  Series s = read_series_csv(in, label);
  if (!s.value_column.empty() && s.value_column != "signal") {
    throw DataError(label + ": expected a `signal` column, found `" + s.value_column + "`");
  }
  MeasuredSpectrum m;
  m.frequency_mhz = std::move(s.frequency_mhz);
  m.signal = std::move(s.value);
  m.applied_field_mt = applied_field_mt;
  m.label = std::move(label);
  m.validate();
  return m;
}

}  // namespace odmr
