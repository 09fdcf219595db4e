#include "cli/config.hpp"

#include <fstream>
#include <set>

#include "odmr/errors.hpp"

namespace odmr::cli {

namespace {

using nlohmann::json;

// Reads the keys of one JSON object, remembering which ones were consumed so
// that leftovers can be reported as unknown.
class Table {
 public:
  Table(const json& parent, const std::string& key, std::string path)
      : path_(std::move(path)) {
    if (parent.contains(key)) {
      node_ = &parent.at(key);
      if (!node_->is_object()) throw ConfigError(path_ + " must be a table");
    }
  }
  explicit Table(const json& root) : node_(&root), path_("") {
    if (!root.is_object()) throw ConfigError("configuration must be a JSON object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return;
    const json& v = node_->at(key);
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<long long>() < 0)) {
          throw ConfigError("");
        }
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      }
      out = v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(qualified(key) + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return node_ && node_->contains(key) ? &node_->at(key) : nullptr;
  }

  void finish() const {
    if (!node_) return;
    for (const auto& [k, _] : node_->items()) {
      if (!seen_.count(k)) throw ConfigError("unknown configuration key '" + qualified(k) + "'");
    }
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json* node_ = nullptr;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

RunConfig::RunConfig() { fit.initial.set_fixed(FitField::drive); }

void RunConfig::validate() const {
  simulation.disorder.validate();
  AxisPopulation::along_111(applied_field_mt, simulation.zeeman);
  grid.validate();
  if (simulation.ensemble_size == 0) throw ConfigError("ensemble.size must be at least 1");
  if (!(signal.i0 > 0.0)) throw ConfigError("signal.i0 must be positive");
  if (!(prominence_fraction >= 0.0 && prominence_fraction < 1.0)) {
    throw ConfigError("analysis.prominence_fraction must lie in [0, 1)");
  }
  if (output.prefix.empty()) throw ConfigError("output.prefix must not be empty");
  fit.initial.validate();
  if (fit.ensemble_size == 0) throw ConfigError("fit.ensemble_size must be at least 1");
  if (fit.max_iterations < 0) throw ConfigError("fit.max_iterations must be >= 0");
  if (!(fit.tolerance > 0.0)) throw ConfigError("fit.tolerance must be positive");
  if (!(fit.dip_half_width_mhz > 0.0)) throw ConfigError("fit.dip_half_width_mhz must be positive");
  if (fit.refinement_passes < 0) throw ConfigError("fit.refinement_passes must be >= 0");
}

EstimateConfig RunConfig::estimate_config() const {
  EstimateConfig c;
  c.simulation = simulation;
  c.simulation.ensemble_size = fit.ensemble_size;
  c.max_iterations = fit.max_iterations;
  c.tolerance = fit.tolerance;
  c.dip_half_width_mhz = fit.dip_half_width_mhz;
  c.refit_scale = fit.refit_scale;
  c.refinement_passes = fit.refinement_passes;
  c.joint_polish = fit.joint_polish;
  return c;
}

RunConfig parse_config(const json& doc) {
  RunConfig c;
  DisorderSpec& d = c.simulation.disorder;
  Table root(doc);

  int version = 1;
  root.read("version", version);
  if (version != 1) throw ConfigError("unsupported configuration version " + std::to_string(version));

  Table model(doc, "model", "model");
  root.child("model");
  model.read("gamma_b_mhz", d.gamma_b);
  model.read("gamma_d_mhz", d.gamma_d);
  model.finish();

  Table dis(doc, "disorder", "disorder");
  root.child("disorder");
  dis.read("d_center_mhz", d.d_dist.center);
  dis.read("d_hwhm_mhz", d.d_dist.hwhm);
  dis.read("e1_center_mhz", d.e1_dist.center);
  dis.read("e1_hwhm_mhz", d.e1_dist.hwhm);
  dis.read("e2_center_mhz", d.e2_dist.center);
  dis.read("e2_hwhm_mhz", d.e2_dist.hwhm);
  dis.read("field_hwhm_mhz", d.field_dist.hwhm);
  dis.read("hyperfine_splitting_mhz", d.field_dist.splitting);
  if (const json* w = dis.child("hyperfine_weights")) {
    if (!w->is_array() || w->size() != 3) {
      throw ConfigError("disorder.hyperfine_weights must be an array of 3 numbers");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!(*w)[i].is_number()) throw ConfigError("disorder.hyperfine_weights must be numbers");
      d.field_dist.weights[i] = (*w)[i].get<double>();
    }
  }
  double truncation = d.d_dist.truncation;
  dis.read("truncation_hwhm", truncation);
  d.d_dist.truncation = d.e1_dist.truncation = d.e2_dist.truncation = d.field_dist.truncation =
      truncation;
  dis.finish();

  Table drive(doc, "drive", "drive");
  root.child("drive");
  std::string kind = "constant";
  drive.read("kind", kind);
  drive.read("amplitude_mhz", d.drive_dist.amplitude);
  drive.read("low_mhz", d.drive_dist.low);
  drive.read("high_mhz", d.drive_dist.high);
  if (kind == "constant") {
    d.drive_dist.kind = DriveDistribution::Kind::constant;
  } else if (kind == "uniform") {
    d.drive_dist.kind = DriveDistribution::Kind::uniform;
  } else {
    throw ConfigError("drive.kind must be 'constant' or 'uniform'");
  }
  drive.finish();

  Table geo(doc, "geometry", "geometry");
  root.child("geometry");
  geo.read("applied_field_mt", c.applied_field_mt);
  geo.read("g_factor", c.simulation.zeeman.g_factor);
  geo.read("bohr_mhz_per_mt", c.simulation.zeeman.bohr_mhz_per_mt);
  geo.finish();

  Table grid(doc, "grid", "grid");
  root.child("grid");
  grid.read("start_mhz", c.grid.start);
  grid.read("stop_mhz", c.grid.stop);
  grid.read("points", c.grid.points);
  grid.finish();

  Table ens(doc, "ensemble", "ensemble");
  root.child("ensemble");
  ens.read("size", c.simulation.ensemble_size);
  ens.read("seed", c.simulation.seed);
  ens.finish();

  Table sig(doc, "signal", "signal");
  root.child("signal");
  sig.read("i0", c.signal.i0);
  sig.read("a", c.signal.a);
  sig.finish();

  Table out(doc, "output", "output");
  root.child("output");
  out.read("directory", c.output.directory);
  out.read("prefix", c.output.prefix);
  out.finish();

  Table ana(doc, "analysis", "analysis");
  root.child("analysis");
  ana.read("prominence_fraction", c.prominence_fraction);
  ana.finish();

  Table fit(doc, "fit", "fit");
  root.child("fit");
  fit.read("ensemble_size", c.fit.ensemble_size);
  fit.read("max_iterations", c.fit.max_iterations);
  fit.read("tolerance", c.fit.tolerance);
  fit.read("dip_half_width_mhz", c.fit.dip_half_width_mhz);
  fit.read("refit_scale", c.fit.refit_scale);
  fit.read("refinement_passes", c.fit.refinement_passes);
  fit.read("joint_polish", c.fit.joint_polish);
  if (fit.child("initial")) {
    Table t(doc.at("fit"), "initial", "fit.initial");
    for (FitField f : kAllFitFields) {
      const std::string key(to_string(f));
      t.read(key.c_str(), c.fit.initial[f]);
    }
    t.finish();
  }
  if (const json* fixed = fit.child("fixed")) {
    if (!fixed->is_array()) throw ConfigError("fit.fixed must be an array of parameter names");
    c.fit.initial.fixed = {};
    for (const auto& name : *fixed) {
      if (!name.is_string()) throw ConfigError("fit.fixed entries must be strings");
      const auto f = parse_fit_field(name.get<std::string>());
      if (!f) throw ConfigError("fit.fixed: unknown parameter '" + name.get<std::string>() + "'");
      c.fit.initial.set_fixed(*f);
    }
  }
  fit.finish();

  root.finish();
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  const DisorderSpec& d = c.simulation.disorder;
  json fixed = json::array();
  json initial = json::object();
  for (FitField f : kAllFitFields) {
    initial[std::string(to_string(f))] = c.fit.initial[f];
    if (c.fit.initial.is_fixed(f)) fixed.push_back(std::string(to_string(f)));
  }
  json drive = {{"kind", d.drive_dist.kind == DriveDistribution::Kind::constant ? "constant"
                                                                                : "uniform"},
                {"amplitude_mhz", d.drive_dist.amplitude},
                {"low_mhz", d.drive_dist.low},
                {"high_mhz", d.drive_dist.high}};
  return {
      {"version", 1},
      {"model", {{"gamma_b_mhz", d.gamma_b}, {"gamma_d_mhz", d.gamma_d}}},
      {"disorder",
       {{"d_center_mhz", d.d_dist.center},
        {"d_hwhm_mhz", d.d_dist.hwhm},
        {"e1_center_mhz", d.e1_dist.center},
        {"e1_hwhm_mhz", d.e1_dist.hwhm},
        {"e2_center_mhz", d.e2_dist.center},
        {"e2_hwhm_mhz", d.e2_dist.hwhm},
        {"field_hwhm_mhz", d.field_dist.hwhm},
        {"hyperfine_splitting_mhz", d.field_dist.splitting},
        {"hyperfine_weights", d.field_dist.weights},
        {"truncation_hwhm", d.d_dist.truncation}}},
      {"drive", drive},
      {"geometry",
       {{"applied_field_mt", c.applied_field_mt},
        {"g_factor", c.simulation.zeeman.g_factor},
        {"bohr_mhz_per_mt", c.simulation.zeeman.bohr_mhz_per_mt}}},
      {"grid", {{"start_mhz", c.grid.start}, {"stop_mhz", c.grid.stop}, {"points", c.grid.points}}},
      {"ensemble", {{"size", c.simulation.ensemble_size}, {"seed", c.simulation.seed}}},
      {"signal", {{"i0", c.signal.i0}, {"a", c.signal.a}}},
      {"output", {{"directory", c.output.directory}, {"prefix", c.output.prefix}}},
      {"analysis", {{"prominence_fraction", c.prominence_fraction}}},
      {"fit",
       {{"ensemble_size", c.fit.ensemble_size},
        {"max_iterations", c.fit.max_iterations},
        {"tolerance", c.fit.tolerance},
        {"dip_half_width_mhz", c.fit.dip_half_width_mhz},
        {"refit_scale", c.fit.refit_scale},
        {"refinement_passes", c.fit.refinement_passes},
        {"joint_polish", c.fit.joint_polish},
        {"initial", initial},
        {"fixed", fixed}}},
  };
}

}  // namespace odmr::cli
