#include "odmr/disorder.hpp"

#include <cmath>
#include <numbers>

#include "odmr/errors.hpp"
#include "odmr/parallel.hpp"

namespace odmr {

void LorentzianSpec::validate() const {
  if (!std::isfinite(center)) throw ConfigError("Lorentzian center must be finite");
  if (!(hwhm >= 0.0) || !std::isfinite(hwhm)) throw ConfigError("Lorentzian hwhm must be >= 0");
  if (!(truncation > 1.0)) throw ConfigError("Lorentzian truncation must exceed 1 hwhm");
}

void HyperfineMixtureSpec::validate() const {
  if (!(hwhm >= 0.0) || !std::isfinite(hwhm)) throw ConfigError("hyperfine hwhm must be >= 0");
  if (!(splitting >= 0.0) || !std::isfinite(splitting)) {
    throw ConfigError("hyperfine splitting must be >= 0");
  }
  if (!(truncation > 1.0)) throw ConfigError("hyperfine truncation must exceed 1 hwhm");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("hyperfine weights must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("hyperfine weights must sum to 1");
}

void DriveDistribution::validate() const {
  switch (kind) {
    case Kind::constant:
      if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
        throw ConfigError("drive amplitude must be >= 0");
      }
      break;
    case Kind::uniform:
      if (!(low >= 0.0) || !(high >= low) || !std::isfinite(high)) {
        throw ConfigError("uniform drive needs 0 <= low <= high");
      }
      break;
  }
}

void DisorderSpec::validate() const {
  d_dist.validate();
  e1_dist.validate();
  e2_dist.validate();
  field_dist.validate();
  drive_dist.validate();
  if (!(gamma_b > 0.0) || !(gamma_d > 0.0)) throw ConfigError("gamma_b and gamma_d must be > 0");
  if (!(d_dist.center > 0.0)) throw ConfigError("zero-field splitting center must be > 0");
}

double lorentzian_quantile(const LorentzianSpec& spec, double u) {
  if (!(u > 0.0 && u < 1.0)) throw ConfigError("uniform variate must lie in (0, 1)");
  if (spec.hwhm == 0.0) return spec.center;
  return spec.center + spec.hwhm * std::tan(std::numbers::pi * (u - 0.5));
}

std::optional<double> sample_lorentzian(const LorentzianSpec& spec, double u) {
  const double x = lorentzian_quantile(spec, u);
  if (std::abs(x - spec.center) > spec.truncation * spec.hwhm) return std::nullopt;
  return x;
}

double sample_lorentzian(const LorentzianSpec& spec, CounterStream& stream) {
  if (spec.hwhm == 0.0) return spec.center;
  for (;;) {
    if (auto x = sample_lorentzian(spec, stream.next())) return *x;
  }
}

int hyperfine_component(const HyperfineMixtureSpec& spec, double u_component) {
  if (!(u_component > 0.0 && u_component < 1.0)) {
    throw ConfigError("uniform variate must lie in (0, 1)");
  }
  double cumulative = 0.0;
  for (int i = 0; i < 2; ++i) {
    cumulative += spec.weights[i];
    if (u_component < cumulative) return i - 1;
  }
  return 1;
}

namespace {

LorentzianSpec component_line(const HyperfineMixtureSpec& spec, int m) {
  return {m * spec.splitting, spec.hwhm, spec.truncation};
}

}  // namespace

std::optional<double> sample_hyperfine_field(const HyperfineMixtureSpec& spec,
                                             double u_component, double u_value) {
  const int m = hyperfine_component(spec, u_component);
  return sample_lorentzian(component_line(spec, m), u_value);
}

DrawnCenter draw_center(const DisorderSpec& spec, const AxisPopulation& geometry,
                        std::uint64_t seed, std::uint64_t index) {
  DrawnCenter out;
  CenterParams& c = out.params;

  CounterStream d_stream(seed, index, DrawTag::zero_field);
  CounterStream e1_stream(seed, index, DrawTag::strain_e1);
  CounterStream e2_stream(seed, index, DrawTag::strain_e2);
  c.d_zfs = sample_lorentzian(spec.d_dist, d_stream);
  c.e1 = sample_lorentzian(spec.e1_dist, e1_stream);
  c.e2 = sample_lorentzian(spec.e2_dist, e2_stream);

  // Axis class by cumulative weight.
  CounterStream axis_stream(seed, index, DrawTag::axis_class);
  const double u_axis = axis_stream.next();
  std::size_t cls = geometry.classes.size() - 1;
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < geometry.classes.size(); ++i) {
    cumulative += geometry.classes[i].weight;
    if (u_axis < cumulative) {
      cls = i;
      break;
    }
  }
  out.label.axis_class = static_cast<std::uint8_t>(cls);

  CounterStream component_stream(seed, index, DrawTag::field_component);
  CounterStream value_stream(seed, index, DrawTag::field_value);
  const int m = hyperfine_component(spec.field_dist, component_stream.next());
  out.label.hyperfine_m = static_cast<std::int8_t>(m);
  const double random_field = sample_lorentzian(component_line(spec.field_dist, m), value_stream);
  c.zeeman = zeeman_frequency(geometry.applied_field_mt, geometry.classes[cls].projection,
                              geometry.constants) +
             random_field;

  c.gamma_b = spec.gamma_b;
  c.gamma_d = spec.gamma_d;
  switch (spec.drive_dist.kind) {
    case DriveDistribution::Kind::constant:
      c.drive = spec.drive_dist.amplitude;
      break;
    case DriveDistribution::Kind::uniform: {
      CounterStream drive_stream(seed, index, DrawTag::drive);
      const double u = drive_stream.next();
      c.drive = spec.drive_dist.low + (spec.drive_dist.high - spec.drive_dist.low) * u;
      break;
    }
  }
  return out;
}

EnsembleSample EnsembleSample::from_centers(std::vector<CenterParams> centers) {
  if (centers.empty()) throw ConfigError("ensemble must contain at least one center");
  for (const auto& c : centers) validate(c);
  auto data = std::make_shared<Data>();
  data->labels.resize(centers.size());
  data->centers = std::move(centers);
  return EnsembleSample(std::move(data));
}

EnsembleSample draw_ensemble(const DisorderSpec& spec, const AxisPopulation& geometry,
                             std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("ensemble size must be at least 1");
  spec.validate();
  geometry.validate();
  auto data = std::make_shared<EnsembleSample::Data>();
  data->centers.resize(n);
  data->labels.resize(n);
  data->seed = seed;
  data->spec = spec;
  data->geometry = geometry;
  parallel_for(n, worker_count(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const DrawnCenter dc = draw_center(spec, geometry, seed, i);
      data->centers[i] = dc.params;
      data->labels[i] = dc.label;
    }
  });
  return EnsembleSample(std::move(data));
}

}  // namespace odmr
