#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "odmr/estimate.hpp"
#include "odmr/spectrum.hpp"

namespace odmr::cli {

struct SignalSection {
  double i0 = 1.0;
  double a = 0.01;
};

struct OutputSection {
  std::string directory = ".";
  std::string prefix = "odmr";
};

struct FitSection {
  FitParams initial;
  std::size_t ensemble_size = 30000;
  int max_iterations = 500;
  double tolerance = 1e-3;
  double dip_half_width_mhz = 3.0;
  bool refit_scale = true;
  int refinement_passes = 0;
  bool joint_polish = true;
};

struct RunConfig {
  SimulationSetup simulation;
  double applied_field_mt = 0.0;
  FrequencyGrid grid{2800.0, 2940.0, 2801};
  SignalSection signal;
  OutputSection output;
  double prominence_fraction = 0.05;
  FitSection fit;

  RunConfig();
  void validate() const;
  EstimateConfig estimate_config() const;
};

// Every key is optional and falls back to the default profile; unknown keys
// anywhere raise ConfigError, as do type mismatches and invalid values.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

// Effective configuration, complete and round-trippable through parse_config.
nlohmann::json to_json(const RunConfig& config);

}  // namespace odmr::cli
