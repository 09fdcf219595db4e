#pragma once

#include <nlohmann/json.hpp>

#include "odmr/analysis.hpp"
#include "odmr/estimate.hpp"
#include "odmr/spectrum.hpp"

namespace odmr::cli {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Spectrum& s);
nlohmann::json to_json(const FitParams& p);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const PeakReport& r);
nlohmann::json to_json(const SweepMetrics& m);

}  // namespace odmr::cli
