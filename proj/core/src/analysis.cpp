#include "odmr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "odmr/errors.hpp"
#include "odmr/parallel.hpp"

namespace odmr {

// ---------------------------------------------------------------------------
// ODE oracle

namespace {

using cplx = std::complex<double>;

struct Amplitudes {
  cplx b;
  cplx d;
};

struct Generator {
  cplx bb, bd, db, dd, drive;

  Amplitudes operator()(const Amplitudes& x) const {
    return {bb * x.b + bd * x.d + drive, db * x.b + dd * x.d};
  }
};

Amplitudes axpy(const Amplitudes& x, double h, const Amplitudes& k) {
  return {x.b + h * k.b, x.d + h * k.d};
}

}  // namespace

PopulationPair ode_steady_state_oracle(const CenterParams& c, double probe_mhz,
                                       const OdeOptions& options) {
  validate(c);
  const cplx i(0.0, 1.0);
  const auto [wb, wd] = bright_dark_frequencies(c);
  const cplx det_b(wb - probe_mhz, -c.gamma_b);
  const cplx det_d(wd - probe_mhz, -c.gamma_d);
  const cplx to_bright(c.zeeman, c.e2);  // J + iJ'
  const cplx to_dark(c.zeeman, -c.e2);   // J - iJ'
  const Generator f{-i * det_b, -i * to_bright, -i * to_dark, -i * det_d, -i * c.drive};

  const double bound = std::max(std::abs(det_b) + std::abs(to_bright),
                                std::abs(det_d) + std::abs(to_dark));
  const double min_gamma = std::min(c.gamma_b, c.gamma_d);
  const double horizon = options.horizon.value_or(40.0 / min_gamma);
  const double step = options.step.value_or(1.0 / bound);
  if (!(step > 0.0) || step * bound > 2.5) {
    throw ConfigError("RK4 step outside the stability region for this center");
  }
  if (!(horizon * min_gamma >= 5.0)) {
    throw ConfigError("integration horizon must be at least 5 / min(gamma)");
  }

  const auto steps = static_cast<std::size_t>(std::ceil(horizon / step));
  const double h = horizon / static_cast<double>(steps);
  Amplitudes x{};
  for (std::size_t n = 0; n < steps; ++n) {
    const Amplitudes k1 = f(x);
    const Amplitudes k2 = f(axpy(x, 0.5 * h, k1));
    const Amplitudes k3 = f(axpy(x, 0.5 * h, k2));
    const Amplitudes k4 = f(axpy(x, h, k3));
    x.b += h / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b);
    x.d += h / 6.0 * (k1.d + 2.0 * k2.d + 2.0 * k3.d + k4.d);
  }
  return {std::norm(x.b), std::norm(x.d)};
}

// ---------------------------------------------------------------------------
// Peaks

namespace {

// Vertex of the parabola through three equally spaced samples, as an offset
// in units of the spacing, clamped to [-0.5, 0.5].
double parabolic_offset(double left, double mid, double right) {
  const double denom = left - 2.0 * mid + right;
  if (denom == 0.0) return 0.0;
  return std::clamp(0.5 * (left - right) / denom, -0.5, 0.5);
}

double interp_x(double x0, double y0, double x1, double y1, double level) {
  if (y1 == y0) return x0;
  return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

}  // namespace

PeakReport peak_report(std::span<const double> x, std::span<const double> y,
                       double prominence_fraction) {
  if (x.size() != y.size()) throw ConfigError("frequency and value arrays differ in length");
  if (x.size() < 10) throw DataError("peak analysis needs at least 10 points");
  const std::size_t n = y.size();
  const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  const double range = *hi_it - *lo_it;
  PeakReport report;
  if (!(range > 0.0)) return report;
  const double threshold = prominence_fraction * range;

  struct Candidate {
    std::size_t index;
    double prominence;
  };
  std::vector<Candidate> kept;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    // Plateau: walk to its end; it is a peak only if it then descends.
    std::size_t j = i;
    while (j + 1 < n && y[j + 1] == y[i]) ++j;
    if (j + 1 >= n || !(y[j + 1] < y[i])) continue;

    double left_min = y[i];
    for (std::size_t k = i; k-- > 0;) {
      if (y[k] > y[i]) break;
      left_min = std::min(left_min, y[k]);
    }
    double right_min = y[i];
    for (std::size_t k = j + 1; k < n; ++k) {
      if (y[k] > y[i]) break;
      right_min = std::min(right_min, y[k]);
    }
    const double prominence = y[i] - std::max(left_min, right_min);
    if (prominence > 0.0 && prominence >= threshold) kept.push_back({i, prominence});
  }
  if (kept.empty()) return report;

  // Valleys between consecutive peaks partition the axis for the areas.
  std::vector<std::size_t> bounds{0};
  for (std::size_t p = 0; p + 1 < kept.size(); ++p) {
    const auto first = y.begin() + static_cast<std::ptrdiff_t>(kept[p].index);
    const auto last = y.begin() + static_cast<std::ptrdiff_t>(kept[p + 1].index) + 1;
    bounds.push_back(static_cast<std::size_t>(std::min_element(first, last) - y.begin()));
  }
  bounds.push_back(n - 1);

  for (std::size_t p = 0; p < kept.size(); ++p) {
    const std::size_t i = kept[p].index;
    Peak peak;
    peak.height = y[i];
    peak.prominence = kept[p].prominence;
    const double offset = parabolic_offset(y[i - 1], y[i], y[i + 1]);
    const double dx = offset >= 0.0 ? x[i + 1] - x[i] : x[i] - x[i - 1];
    peak.frequency = x[i] + offset * dx;

    const double level = y[i] - 0.5 * peak.prominence;
    std::size_t l = i;
    while (l > 0 && y[l] >= level) --l;
    std::size_t r = i;
    while (r + 1 < n && y[r] >= level) ++r;
    const double left = y[l] < level ? interp_x(x[l], y[l], x[l + 1], y[l + 1], level) : x[l];
    const double right = y[r] < level ? interp_x(x[r - 1], y[r - 1], x[r], y[r], level) : x[r];
    peak.fwhm = right - left;

    for (std::size_t k = bounds[p]; k < bounds[p + 1]; ++k) {
      peak.area += 0.5 * (y[k] + y[k + 1]) * (x[k + 1] - x[k]);
    }
    report.peaks.push_back(peak);
  }

  if (kept.size() >= 2) {
    std::vector<std::size_t> order(kept.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return y[kept[a].index] > y[kept[b].index];
    });
    std::size_t a = kept[order[0]].index;
    std::size_t b = kept[order[1]].index;
    if (a > b) std::swap(a, b);
    const auto first = y.begin() + static_cast<std::ptrdiff_t>(a) + 1;
    const auto last = y.begin() + static_cast<std::ptrdiff_t>(b);
    if (first < last) {
      const auto m = static_cast<std::size_t>(std::min_element(first, last) - y.begin());
      const double offset = parabolic_offset(y[m - 1], y[m], y[m + 1]);
      const double dx = offset >= 0.0 ? x[m + 1] - x[m] : x[m] - x[m - 1];
      report.dip = Dip{x[m] + offset * dx, std::min(y[a], y[b]) - y[m]};
    }
  }
  return report;
}

PeakReport peak_report(const Spectrum& s, double prominence_fraction) {
  const auto freqs = s.grid.values();
  if (s.kind == SpectrumKind::excitation) return peak_report(freqs, s.values, prominence_fraction);
  std::vector<double> contrast(s.values.size());
  std::transform(s.values.begin(), s.values.end(), contrast.begin(),
                 [](double v) { return 1.0 - v; });
  return peak_report(freqs, contrast, prominence_fraction);
}

// ---------------------------------------------------------------------------
// Sweeps

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::gamma: return "gamma";
    case SweepParameter::delta_b: return "delta_b";
    case SweepParameter::delta_e: return "delta_e";
  }
  return "unknown";
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "gamma") return SweepParameter::gamma;
  if (name == "delta_b") return SweepParameter::delta_b;
  if (name == "delta_e") return SweepParameter::delta_e;
  throw ConfigError("unknown sweep parameter '" + std::string(name) +
                    "' (expected gamma, delta_b or delta_e)");
}

DisorderSpec with_parameter(DisorderSpec spec, SweepParameter p, double value) {
  switch (p) {
    case SweepParameter::gamma:
      spec.gamma_b = value;
      spec.gamma_d = value;
      break;
    case SweepParameter::delta_b:
      spec.field_dist.hwhm = value;
      break;
    case SweepParameter::delta_e:
      spec.e1_dist.hwhm = value;
      spec.e2_dist.hwhm = value;
      break;
  }
  return spec;
}

SweepMetrics spectrum_metrics(const Spectrum& s, double parameter_value,
                              double aligned_target_mhz, double prominence_fraction) {
  const PeakReport report = peak_report(s, prominence_fraction);
  SweepMetrics m;
  m.parameter_value = parameter_value;
  m.peak_count = report.peaks.size();
  if (report.dip) {
    m.dip_depth = report.dip->depth;
    m.dip_frequency = report.dip->frequency;
  }
  if (!report.peaks.empty()) {
    const auto nearest = std::min_element(
        report.peaks.begin(), report.peaks.end(), [&](const Peak& a, const Peak& b) {
          return std::abs(a.frequency - aligned_target_mhz) <
                 std::abs(b.frequency - aligned_target_mhz);
        });
    m.aligned_fwhm = nearest->fwhm;
  }
  return m;
}

SweepGrid sweep(const SweepConfig& config, SweepParameter parameter, std::vector<double> values) {
  if (values.size() < 3) throw ConfigError("a sweep needs at least 3 values");
  if (!std::is_sorted(values.begin(), values.end())) {
    throw ConfigError("sweep values must be sorted");
  }
  const double aligned_target =
      config.setup.disorder.d_dist.center -
      zeeman_frequency(config.applied_field_mt, 1.0, config.setup.zeeman);
  SweepGrid out;
  out.parameter = parameter;
  out.values = values;
  for (double v : values) {
    SimulationSetup setup = config.setup;
    setup.disorder = with_parameter(setup.disorder, parameter, v);
    Spectrum s = simulate(setup, config.applied_field_mt, config.grid);
    out.metrics.push_back(spectrum_metrics(s, v, aligned_target, config.prominence_fraction));
    out.spectra.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Degeneracy

namespace {

void check_epsilons(std::span<const double> eps) {
  for (double e : eps) {
    if (!(e >= 0.0)) throw ConfigError("epsilons must be non-negative");
  }
}

}  // namespace

std::vector<double> degeneracy_fraction(const EnsembleSample& ensemble,
                                        std::span<const double> epsilons) {
  check_epsilons(epsilons);
  std::vector<std::size_t> counts(epsilons.size(), 0);
  std::size_t total = 0;
  const auto& centers = ensemble.centers();
  const auto& labels = ensemble.labels();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    if (labels[k].hyperfine_m != 0) continue;
    ++total;
    const auto& c = centers[k];
    const double r = std::sqrt(c.zeeman * c.zeeman + c.e1 * c.e1 + c.e2 * c.e2);
    for (std::size_t e = 0; e < epsilons.size(); ++e) counts[e] += r < epsilons[e];
  }
  std::vector<double> out(epsilons.size(), 0.0);
  if (total == 0) return out;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    out[e] = static_cast<double>(counts[e]) / static_cast<double>(total);
  }
  return out;
}

std::vector<double> degeneracy_fraction(const DisorderSpec& spec, std::size_t n,
                                        std::uint64_t seed, std::span<const double> epsilons) {
  spec.validate();
  check_epsilons(epsilons);
  const unsigned workers = worker_count();
  const std::size_t chunks = std::min<std::size_t>(workers, std::max<std::size_t>(n, 1));
  std::vector<std::vector<std::size_t>> counts(chunks,
                                               std::vector<std::size_t>(epsilons.size() + 1, 0));
  // Mirrors draw_center at zero applied field, skipping draws that the
  // statistic never reads.
  parallel_for(chunks, chunks, [&](std::size_t cb, std::size_t ce) {
    for (std::size_t chunk = cb; chunk < ce; ++chunk) {
      auto& local = counts[chunk];
      const std::size_t begin = n * chunk / chunks;
      const std::size_t end = n * (chunk + 1) / chunks;
      for (std::size_t i = begin; i < end; ++i) {
        CounterStream component(seed, i, DrawTag::field_component);
        if (hyperfine_component(spec.field_dist, component.next()) != 0) continue;
        ++local.back();
        CounterStream value(seed, i, DrawTag::field_value);
        CounterStream e1(seed, i, DrawTag::strain_e1);
        CounterStream e2(seed, i, DrawTag::strain_e2);
        const double j = sample_lorentzian(
            LorentzianSpec{0.0, spec.field_dist.hwhm, spec.field_dist.truncation}, value);
        const double s1 = sample_lorentzian(spec.e1_dist, e1);
        const double s2 = sample_lorentzian(spec.e2_dist, e2);
        const double r = std::sqrt(j * j + s1 * s1 + s2 * s2);
        for (std::size_t e = 0; e < epsilons.size(); ++e) local[e] += r < epsilons[e];
      }
    }
  });
  std::vector<std::size_t> total(epsilons.size() + 1, 0);
  for (const auto& local : counts) {
    for (std::size_t e = 0; e < total.size(); ++e) total[e] += local[e];
  }
  std::vector<double> out(epsilons.size(), 0.0);
  if (total.back() == 0) return out;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    out[e] = static_cast<double>(total[e]) / static_cast<double>(total.back());
  }
  return out;
}

}  // namespace odmr
