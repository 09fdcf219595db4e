#include "odmr/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odmr/errors.hpp"
#include "odmr/optimize.hpp"

namespace odmr {

void MeasuredSpectrum::validate() const {
  const std::string name = label.empty() ? std::string("spectrum") : label;
  if (frequency_mhz.size() != signal.size()) {
    throw DataError(name + ": frequency and signal columns differ in length");
  }
  if (frequency_mhz.size() < 10) {
    throw DataError(name + ": at least 10 points required (got " +
                    std::to_string(frequency_mhz.size()) + ")");
  }
  if (!weights.empty() && weights.size() != signal.size()) {
    throw DataError(name + ": weights must match the number of points");
  }
  for (std::size_t i = 0; i < frequency_mhz.size(); ++i) {
    if (!std::isfinite(frequency_mhz[i]) || !std::isfinite(signal[i])) {
      throw DataError(name + ": point " + std::to_string(i + 1) + " is not finite");
    }
    if (i > 0 && !(frequency_mhz[i] > frequency_mhz[i - 1])) {
      throw DataError(name + ": frequencies must be strictly increasing (point " +
                      std::to_string(i + 1) + ")");
    }
    if (!weights.empty() && !(weights[i] >= 0.0)) {
      throw DataError(name + ": weights must be non-negative");
    }
  }
  if (!(applied_field_mt >= 0.0)) throw DataError(name + ": applied field must be >= 0");
}

MeasuredSpectrum MeasuredSpectrum::window(double lo_mhz, double hi_mhz) const {
  MeasuredSpectrum out;
  out.applied_field_mt = applied_field_mt;
  out.label = label + "[window]";
  for (std::size_t i = 0; i < frequency_mhz.size(); ++i) {
    if (frequency_mhz[i] < lo_mhz || frequency_mhz[i] > hi_mhz) continue;
    out.frequency_mhz.push_back(frequency_mhz[i]);
    out.signal.push_back(signal[i]);
    if (!weights.empty()) out.weights.push_back(weights[i]);
  }
  return out;
}

std::string_view to_string(FitField f) {
  switch (f) {
    case FitField::gamma: return "gamma";
    case FitField::delta_b: return "delta_b";
    case FitField::delta_e: return "delta_e";
    case FitField::a_over_i0: return "a_over_i0";
    case FitField::d_zfs: return "d_zfs";
    case FitField::drive: return "drive";
  }
  return "unknown";
}

std::optional<FitField> parse_fit_field(std::string_view name) {
  for (FitField f : kAllFitFields) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

double& FitParams::operator[](FitField f) {
  switch (f) {
    case FitField::gamma: return gamma;
    case FitField::delta_b: return delta_b;
    case FitField::delta_e: return delta_e;
    case FitField::a_over_i0: return a_over_i0;
    case FitField::d_zfs: return d_zfs;
    case FitField::drive: return drive;
  }
  return gamma;
}

double FitParams::operator[](FitField f) const { return const_cast<FitParams&>(*this)[f]; }

void FitParams::validate() const {
  for (FitField f : kAllFitFields) {
    if (!std::isfinite((*this)[f])) throw ConfigError(std::string(to_string(f)) + " is not finite");
  }
  if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(delta_b >= 0.0) || !(delta_e >= 0.0)) throw ConfigError("widths must be non-negative");
  if (!(a_over_i0 >= 0.0)) throw ConfigError("a_over_i0 must be non-negative");
  if (!(d_zfs > 0.0)) throw ConfigError("d_zfs must be positive");
  if (!(drive >= 0.0)) throw ConfigError("drive must be non-negative");
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::field: return "field";
    case Stage::dip: return "dip";
    case Stage::strain: return "strain";
  }
  return "unknown";
}

DisorderSpec disorder_for(const FitParams& p, const DisorderSpec& base) {
  DisorderSpec d = base;
  d.gamma_b = p.gamma;
  d.gamma_d = p.gamma;
  d.field_dist.hwhm = p.delta_b;
  d.e1_dist.hwhm = p.delta_e;
  d.e2_dist.hwhm = p.delta_e;
  d.d_dist.center = p.d_zfs;
  d.drive_dist = DriveDistribution::constant(p.drive);
  return d;
}

std::vector<double> model_signal(const FitParams& p, const MeasuredSpectrum& data,
                                 const EstimateConfig& config) {
  SimulationSetup setup = config.simulation;
  setup.disorder = disorder_for(p, config.simulation.disorder);
  const EnsembleSample ensemble = setup.draw(data.applied_field_mt);
  std::vector<double> out = ensemble_excitation(ensemble, data.frequency_mhz);
  for (double& v : out) v = 1.0 - p.a_over_i0 * v;
  return out;
}

double residual_sse(const FitParams& p, std::span<const MeasuredSpectrum> data,
                    const EstimateConfig& config) {
  p.validate();
  double sse = 0.0;
  for (const auto& d : data) {
    d.validate();
    const auto model = model_signal(p, d, config);
    for (std::size_t i = 0; i < model.size(); ++i) {
      if (!std::isfinite(model[i])) {
        throw NumericalError(d.label + ": non-finite model signal at " +
                             std::to_string(d.frequency_mhz[i]) + " MHz");
      }
      const double r = model[i] - d.signal[i];
      sse += (d.weights.empty() ? 1.0 : d.weights[i]) * r * r;
    }
  }
  return sse;
}

namespace {

// Widths, scale and drive are optimized in log space (positivity, relative
// tolerance); d_zfs linearly in MHz.
bool log_scaled(FitField f) { return f != FitField::d_zfs; }

double to_coord(FitField f, double v) { return log_scaled(f) ? std::log(v) : v; }
double from_coord(FitField f, double c) { return log_scaled(f) ? std::exp(c) : c; }
double initial_step(FitField f) { return log_scaled(f) ? 0.2 : 0.5; }

struct FitOutcome {
  FitParams params;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

FitOutcome fit_fields(std::span<const MeasuredSpectrum> data, const FitParams& start,
                      const std::vector<FitField>& fields, const EstimateConfig& config) {
  for (FitField f : fields) {
    if (log_scaled(f) && !(start[f] > 0.0)) {
      throw ConfigError("initial " + std::string(to_string(f)) + " must be positive to be fitted");
    }
  }
  std::vector<double> x0, steps;
  for (FitField f : fields) {
    x0.push_back(to_coord(f, start[f]));
    steps.push_back(initial_step(f));
  }
  auto unpack = [&](std::span<const double> x) {
    FitParams p = start;
    for (std::size_t i = 0; i < fields.size(); ++i) p[fields[i]] = from_coord(fields[i], x[i]);
    return p;
  };
  const SimplexResult r = nelder_mead(
      [&](std::span<const double> x) { return residual_sse(unpack(x), data, config); }, x0, steps,
      {config.max_iterations, config.tolerance});
  return {unpack(r.x), r.value, r.iterations, r.converged};
}

std::vector<FitField> free_fields(const FitParams& p, std::initializer_list<FitField> wanted) {
  std::vector<FitField> out;
  for (FitField f : wanted) {
    if (!p.is_fixed(f)) out.push_back(f);
  }
  return out;
}

std::vector<std::string> names(const std::vector<FitField>& fields) {
  std::vector<std::string> out;
  for (FitField f : fields) out.emplace_back(to_string(f));
  return out;
}

}  // namespace

FitResult fit(std::span<const MeasuredSpectrum> data, const FitParams& initial,
              const EstimateConfig& config) {
  if (data.empty()) throw DataError("no datasets to fit");
  initial.validate();
  std::vector<FitField> fields;
  for (FitField f : kAllFitFields) {
    if (!initial.is_fixed(f)) fields.push_back(f);
  }
  const FitOutcome o = fit_fields(data, initial, fields, config);
  FitResult result{o.params, o.residual, o.iterations, o.converged, {}};
  std::string dataset;
  for (const auto& d : data) dataset += (dataset.empty() ? "" : "+") + d.label;
  result.stages.push_back({"joint", dataset, names(fields), o.params, o.residual, o.iterations,
                           o.converged});
  return result;
}

FitResult staged_estimate(const MeasuredSpectrum& zero_field, const MeasuredSpectrum& with_field,
                          const FitParams& initial, const EstimateConfig& config) {
  initial.validate();
  zero_field.validate();
  with_field.validate();
  if (with_field.applied_field_mt < 1.0) {
    throw DataError("with-field spectrum needs an applied field of at least 1 mT (got " +
                    std::to_string(with_field.applied_field_mt) + ")");
  }
  if (zero_field.applied_field_mt != 0.0) {
    throw DataError("zero-field spectrum must have zero applied field");
  }
  const double half = config.dip_half_width_mhz;
  auto dip_window = [&](double center) {
    const double lo = center - half;
    const double hi = center + half;
    if (zero_field.frequency_mhz.front() > lo || zero_field.frequency_mhz.back() < hi) {
      throw DataError("zero-field spectrum does not cover the dip window [" + std::to_string(lo) +
                      ", " + std::to_string(hi) + "] MHz");
    }
    MeasuredSpectrum w = zero_field.window(lo, hi);
    w.validate();
    return w;
  };
  dip_window(initial.d_zfs);

  std::vector<Stage> order;
  for (int pass = 0; pass <= config.refinement_passes; ++pass) {
    order.insert(order.end(), config.stage_order.begin(), config.stage_order.end());
  }

  FitResult result;
  result.params = initial;
  result.converged = true;
  for (Stage stage : order) {
    std::vector<FitField> fields;
    std::vector<MeasuredSpectrum> data;
    switch (stage) {
      case Stage::field:
        fields = free_fields(initial, {FitField::delta_b, FitField::a_over_i0, FitField::drive,
                                       FitField::d_zfs});
        data.push_back(with_field);
        break;
      case Stage::dip:
        fields = free_fields(initial, {FitField::gamma});
        data.push_back(dip_window(result.params.d_zfs));
        break;
      case Stage::strain:
        fields = free_fields(initial, {FitField::delta_e});
        if (config.refit_scale && !initial.is_fixed(FitField::a_over_i0)) {
          fields.push_back(FitField::a_over_i0);
        }
        data.push_back(zero_field);
        break;
    }
    const FitOutcome o = fit_fields(data, result.params, fields, config);
    result.params = o.params;
    result.iterations += o.iterations;
    result.converged = result.converged && o.converged;
    result.stages.push_back({std::string(to_string(stage)), data.front().label, names(fields),
                             o.params, o.residual, o.iterations, o.converged});
  }
  const std::array<MeasuredSpectrum, 2> both{zero_field, with_field};
  if (config.joint_polish) {
    std::vector<FitField> fields;
    for (FitField f : kAllFitFields) {
      if (!initial.is_fixed(f)) fields.push_back(f);
    }
    const FitOutcome o = fit_fields(both, result.params, fields, config);
    result.params = o.params;
    result.iterations += o.iterations;
    result.converged = result.converged && o.converged;
    result.stages.push_back({"joint", zero_field.label + "+" + with_field.label, names(fields),
                             o.params, o.residual, o.iterations, o.converged});
  }
  result.residual = residual_sse(result.params, both, config);
  return result;
}

}  // namespace odmr
