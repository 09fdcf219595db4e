#include "cli/serialize.hpp"

namespace odmr::cli {

using nlohmann::json;

json to_json(const Spectrum& s) {
  const bool signal = s.kind == SpectrumKind::signal;
  json meta = {{"seed", s.metadata.seed},
               {"ensemble_size", s.metadata.ensemble_size},
               {"drive_rms_mhz", s.metadata.drive_rms},
               {"applied_field_mt", s.metadata.applied_field_mt}};
  if (signal) {
    meta["i0"] = s.metadata.i0;
    meta["a"] = s.metadata.a;
  }
  return {{"version", kSchemaVersion},
          {"kind", signal ? "signal" : "excitation"},
          {"grid", {{"start_mhz", s.grid.start}, {"stop_mhz", s.grid.stop}, {"points", s.grid.points}}},
          {"values", s.values},
          {"metadata", meta}};
}

json to_json(const FitParams& p) {
  json out = json::object();
  for (FitField f : kAllFitFields) out[std::string(to_string(f))] = p[f];
  return out;
}

json to_json(const FitResult& r) {
  json fixed = json::array();
  for (FitField f : kAllFitFields) {
    if (r.params.is_fixed(f)) fixed.push_back(std::string(to_string(f)));
  }
  json stages = json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"name", s.name},
                      {"dataset", s.dataset},
                      {"fitted", s.fitted},
                      {"params", to_json(s.params)},
                      {"residual", s.residual},
                      {"iterations", s.iterations},
                      {"converged", s.converged}});
  }
  return {{"version", kSchemaVersion},
          {"params", to_json(r.params)},
          {"fixed", fixed},
          {"residual", r.residual},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"stages", stages}};
}

json to_json(const PeakReport& r) {
  json peaks = json::array();
  for (const auto& p : r.peaks) {
    peaks.push_back({{"frequency_mhz", p.frequency},
                     {"height", p.height},
                     {"prominence", p.prominence},
                     {"fwhm_mhz", p.fwhm},
                     {"area", p.area}});
  }
  json out = {{"version", kSchemaVersion}, {"peaks", peaks}, {"dip", nullptr}};
  if (r.dip) out["dip"] = {{"frequency_mhz", r.dip->frequency}, {"depth", r.dip->depth}};
  return out;
}

json to_json(const SweepMetrics& m) {
  json out = {{"parameter_value", m.parameter_value},
              {"peak_count", m.peak_count},
              {"dip_depth", m.dip_depth},
              {"dip_frequency_mhz", nullptr},
              {"aligned_fwhm_mhz", nullptr}};
  if (m.dip_frequency) out["dip_frequency_mhz"] = *m.dip_frequency;
  if (m.aligned_fwhm) out["aligned_fwhm_mhz"] = *m.aligned_fwhm;
  return out;
}

}  // namespace odmr::cli
