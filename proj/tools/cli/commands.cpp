#include "cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cli/config.hpp"
#include "cli/serialize.hpp"
#include "odmr/analysis.hpp"
#include "odmr/errors.hpp"
#include "odmr/estimate.hpp"
#include "odmr/io.hpp"
#include "odmr/parallel.hpp"

namespace odmr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

RunConfig resolve_config(const CommonOptions& o) {
  RunConfig c = o.config_path.empty() ? parse_config(json::object()) : load_config(o.config_path);
  if (o.seed) c.simulation.seed = *o.seed;
  return c;
}

json provenance(const std::string& command, const RunConfig& c) {
  return {{"tool", "odmr"},
          {"tool_version", ODMR_VERSION},
          {"command", command},
          {"seed", c.simulation.seed},
          {"ensemble_size", c.simulation.ensemble_size},
          {"config", to_json(c)}};
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write output file " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out.flush()) throw ConfigError("failed writing " + path.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << dump(j);
  } else {
    write_text(out_path, dump(j));
  }
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  CommonOptions common;
  std::string out_dir;
  std::optional<double> field_mt;
  unsigned threads = 0;
};

void cmd_simulate(const SimulateArgs& a, std::ostream& err) {
  RunConfig c = resolve_config(a.common);
  if (a.field_mt) c.applied_field_mt = *a.field_mt;
  if (!a.out_dir.empty()) c.output.directory = a.out_dir;
  c.validate();

  const Spectrum excitation = simulate(c.simulation, c.applied_field_mt, c.grid, a.threads);
  const Spectrum signal = to_signal(excitation, c.signal.i0, c.signal.a);
  const json prov = provenance("simulate", c);

  const fs::path dir(c.output.directory);
  const std::string stem = c.output.prefix;
  for (const Spectrum* s : {&excitation, &signal}) {
    const std::string kind = s->kind == SpectrumKind::signal ? "signal" : "excitation";
    std::ostringstream csv;
    write_spectrum_csv(csv, *s);
    write_text(dir / (stem + "_" + kind + ".csv"), csv.str());
    json doc = to_json(*s);
    doc["provenance"] = prov;
    write_text(dir / (stem + "_" + kind + ".json"), dump(doc));
  }
  write_text(dir / (stem + "_provenance.json"), dump(prov));
  err << "simulate: wrote " << (dir / (stem + "_{excitation,signal}.{csv,json}")).string()
      << "\n";
}

// --- fit -------------------------------------------------------------------

struct FitArgs {
  CommonOptions common;
  std::string zero_field;
  std::string with_field;
  std::optional<double> field_mt;
  std::vector<std::string> fixes;
  bool joint = false;
  std::string out;
};

MeasuredSpectrum load_measured(const std::string& path, double field, const std::string& label) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read data file " + path);
  return read_measured_csv(in, field, label.empty() ? path : label);
}

void apply_fix(FitParams& p, const std::string& spec) {
  const auto eq = spec.find('=');
  const std::string name = spec.substr(0, eq);
  const auto field = parse_fit_field(name);
  if (!field) throw ConfigError("--fix: unknown parameter '" + name + "'");
  if (eq != std::string::npos) {
    const std::string value = spec.substr(eq + 1);
    try {
      std::size_t used = 0;
      p[*field] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ConfigError("--fix: bad value '" + value + "' for " + name);
    }
  }
  p.set_fixed(*field);
}

void cmd_fit(const FitArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig c = resolve_config(a.common);
  FitParams initial = c.fit.initial;
  for (const auto& f : a.fixes) apply_fix(initial, f);
  initial.validate();
  const double field = a.field_mt.value_or(c.applied_field_mt);
  EstimateConfig ec = c.estimate_config();

  if (a.joint && a.zero_field.empty() && a.with_field.empty()) {
    throw ConfigError("fit --joint needs at least one data file");
  }
  if (!a.joint && (a.zero_field.empty() || a.with_field.empty())) {
    throw ConfigError("staged fit needs both --zero-field and --with-field (or use --joint)");
  }

  std::vector<MeasuredSpectrum> data;
  if (!a.zero_field.empty()) data.push_back(load_measured(a.zero_field, 0.0, a.zero_field));
  if (!a.with_field.empty()) data.push_back(load_measured(a.with_field, field, a.with_field));

  FitResult result;
  std::string mode;
  if (a.joint) {
    mode = "joint";
    result = fit(data, initial, ec);
  } else {
    mode = "staged";
    result = staged_estimate(data[0], data[1], initial, ec);
  }
  json doc = to_json(result);
  doc["mode"] = mode;
  json prov = provenance("fit", c);
  prov["ensemble_size"] = c.fit.ensemble_size;
  prov["data"] = {{"zero_field", a.zero_field}, {"with_field", a.with_field},
                  {"with_field_mt", field}};
  doc["provenance"] = prov;
  emit(doc, a.out, out);
  err << "fit: " << mode << " estimate " << (result.converged ? "converged" : "did NOT converge")
      << ", residual " << format_double(result.residual) << "\n";
}

// --- sweep -----------------------------------------------------------------

struct SweepArgs {
  CommonOptions common;
  std::string param;
  std::string values;
  std::string out;
};

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--values: bad number '" + item + "'");
    }
  }
  return values;
}

void cmd_sweep(const SweepArgs& a, std::ostream& err) {
  const SweepParameter param = parse_sweep_parameter(a.param);
  RunConfig c = resolve_config(a.common);
  SweepConfig sc{c.simulation, c.applied_field_mt, c.grid, c.prominence_fraction};
  const SweepGrid grid = sweep(sc, param, parse_values(a.values));

  fs::path csv_path = a.out.empty()
                          ? fs::path(c.output.directory) /
                                (c.output.prefix + "_sweep_" + std::string(to_string(param)) + ".csv")
                          : fs::path(a.out);
  std::ostringstream csv;
  write_sweep_csv(csv, grid);
  write_text(csv_path, csv.str());

  json metrics = json::array();
  for (const auto& m : grid.metrics) metrics.push_back(to_json(m));
  json doc = {{"version", kSchemaVersion},
              {"parameter", std::string(to_string(param))},
              {"metrics", metrics},
              {"provenance", provenance("sweep", c)}};
  fs::path sidecar = csv_path;
  sidecar.replace_filename(csv_path.stem().string() + "_metrics.json");
  write_text(sidecar, dump(doc));
  err << "sweep: wrote " << csv_path.string() << " and " << sidecar.string() << "\n";
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::string spectrum;
  double prominence = 0.05;
  std::string out;
};

void cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  std::ifstream in(a.spectrum);
  if (!in) throw DataError("cannot read spectrum file " + a.spectrum);
  Series s = read_series_csv(in, a.spectrum);
  if (s.value_column == "signal") {
    for (double& v : s.value) v = 1.0 - v;
  } else if (!s.value_column.empty() && s.value_column != "excitation") {
    throw DataError(a.spectrum + ": expected an excitation or signal column");
  }
  const PeakReport report = peak_report(s.frequency_mhz, s.value, a.prominence);
  json doc = to_json(report);
  doc["source"] = a.spectrum;
  doc["kind"] = s.value_column.empty() ? "excitation" : s.value_column;
  emit(doc, a.out, out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Disorder-averaged ODMR spectra of NV ensembles: simulate, fit, sweep, analyze"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ODMR_VERSION));

  auto add_common = [](CLI::App* sub, CommonOptions& o) {
    sub->add_option("-c,--config", o.config_path, "JSON run configuration (default profile if omitted)");
    sub->add_option("--seed", o.seed, "Override ensemble.seed");
  };

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Write excitation and signal spectra");
  add_common(simulate_cmd, sim.common);
  simulate_cmd->add_option("--out-dir", sim.out_dir, "Override output.directory");
  simulate_cmd->add_option("--field-mt", sim.field_mt, "Override geometry.applied_field_mt");
  simulate_cmd->add_option("--threads", sim.threads, "Worker threads (default: ODMR_THREADS or all cores)");

  FitArgs fa;
  auto* fit_cmd = app.add_subcommand("fit", "Estimate gamma, delta_b and delta_e from measured spectra");
  add_common(fit_cmd, fa.common);
  fit_cmd->add_option("--zero-field", fa.zero_field, "CSV frequency_mhz,signal at B = 0");
  fit_cmd->add_option("--with-field", fa.with_field, "CSV frequency_mhz,signal with field applied");
  fit_cmd->add_option("--field-mt", fa.field_mt, "Applied field of --with-field (default: geometry.applied_field_mt)");
  fit_cmd->add_option("--fix", fa.fixes, "Hold a parameter fixed: name or name=value");
  fit_cmd->add_flag("--joint", fa.joint, "Fit all free parameters jointly instead of staged");
  fit_cmd->add_option("-o,--out", fa.out, "Report path (default stdout)");

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Spectra over a range of one width parameter");
  add_common(sweep_cmd, sw.common);
  sweep_cmd->add_option("--param", sw.param, "gamma | delta_b | delta_e")->required();
  sweep_cmd->add_option("--values", sw.values, "Comma-separated, sorted, at least 3")->required();
  sweep_cmd->add_option("-o,--out", sw.out, "Long-format CSV path");

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Peak/dip report of a spectrum CSV");
  analyze_cmd->add_option("spectrum", an.spectrum, "Spectrum CSV")->required();
  analyze_cmd->add_option("--prominence", an.prominence, "Minimum prominence as a fraction of the value range");
  analyze_cmd->add_option("-o,--out", an.out, "Report path (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << ODMR_VERSION << "\n";
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "odmr: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (*simulate_cmd) cmd_simulate(sim, err);
    if (*fit_cmd) cmd_fit(fa, out, err);
    if (*sweep_cmd) cmd_sweep(sw, err);
    if (*analyze_cmd) cmd_analyze(an, out);
  } catch (const ConfigError& e) {
    err << "odmr: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    err << "odmr: data error: " << e.what() << "\n";
    return kDataError;
  } catch (const NumericalError& e) {
    err << "odmr: numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "odmr: " << e.what() << "\n";
    return kFailure;
  }
  return kSuccess;
}

}  // namespace odmr::cli
