#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "odmr/errors.hpp"

namespace odmr::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("odmr_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    config_ = dir_ / "small.json";
    json cfg = {{"grid", {{"start_mhz", 2850.0}, {"stop_mhz", 2890.0}, {"points", 81}}},
                {"ensemble", {{"size", 3000}, {"seed", 7}}},
                {"output", {{"directory", (dir_ / "out").string()}, {"prefix", "run"}}},
                {"fit", {{"ensemble_size", 500}, {"max_iterations", 8}, {"refinement_passes", 0}}}};
    std::ofstream(config_) << cfg.dump(2);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "odmr");
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  fs::path dir_;
  fs::path config_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST(Config, DefaultProfileMatchesBuiltInDefaults) {
  const RunConfig shipped = load_config(ODMR_DEFAULT_PROFILE);
  RunConfig builtin;
  builtin.output.directory = "out";
  EXPECT_EQ(to_json(shipped), to_json(builtin));
  EXPECT_EQ(shipped.simulation.ensemble_size, 200000u);
  EXPECT_EQ(shipped.simulation.disorder.field_dist.hwhm, 1.96);
  EXPECT_TRUE(shipped.fit.initial.is_fixed(FitField::drive));
}

TEST(Config, RoundTripsThroughJson) {
  RunConfig c;
  c.applied_field_mt = 1.5;
  c.simulation.disorder.drive_dist = DriveDistribution::uniform(1.0, 3.0);
  c.fit.initial.set_fixed(FitField::gamma);
  EXPECT_EQ(to_json(parse_config(to_json(c))), to_json(c));
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(parse_config(json{{"modle", json::object()}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"disorder", {{"strain_hwhm", 1.0}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"fit", {{"initial", {{"lambda", 2.0}}}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"ensemble", {{"size", "big"}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"ensemble", {{"size", -4}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"fit", {{"fixed", {"zfs"}}}}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"version", 2}}), ConfigError);
  EXPECT_THROW(parse_config(json::array()), ConfigError);
  try {
    parse_config(json{{"grid", {{"step", 0.1}}}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("grid.step"), std::string::npos);
  }
}

TEST_F(CliTest, SimulateWritesSpectraAndProvenance) {
  ASSERT_EQ(run({"simulate", "--config", config_.string()}), 0) << err_.str();
  const fs::path out = dir_ / "out";
  for (const char* name : {"run_excitation.csv", "run_signal.csv", "run_excitation.json",
                           "run_signal.json", "run_provenance.json"}) {
    EXPECT_TRUE(fs::exists(out / name)) << name;
  }
  const std::string csv = slurp(out / "run_signal.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "frequency_mhz,signal");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  const json doc = json::parse(slurp(out / "run_signal.json"));
  EXPECT_EQ(doc["version"], 1);
  EXPECT_EQ(doc["values"].size(), 81u);
  EXPECT_EQ(doc["provenance"]["seed"], 7);
  EXPECT_EQ(doc["provenance"]["config"]["ensemble"]["size"], 3000);
  EXPECT_TRUE(doc["provenance"].contains("tool_version"));
}

TEST_F(CliTest, SimulateIsByteReproducibleAcrossWorkerCounts) {
  const fs::path out = dir_ / "out";
  std::vector<std::vector<std::string>> runs;
  for (const char* threads : {"1", "1", "3", "0"}) {
    ASSERT_EQ(run({"simulate", "-c", config_.string(), "--threads", threads}), 0);
    std::vector<std::string> files;
    for (const char* name : {"run_excitation.csv", "run_signal.csv", "run_excitation.json",
                             "run_signal.json", "run_provenance.json"}) {
      files.push_back(slurp(out / name));
    }
    runs.push_back(files);
    fs::remove_all(out);
  }
  ::setenv("ODMR_THREADS", "5", 1);
  ASSERT_EQ(run({"simulate", "-c", config_.string()}), 0);
  ::unsetenv("ODMR_THREADS");
  EXPECT_EQ(slurp(out / "run_signal.csv"), runs[0][1]);
  for (std::size_t r = 1; r < runs.size(); ++r) EXPECT_EQ(runs[r], runs[0]) << "run " << r;
}

TEST_F(CliTest, SeedOverrideChangesOutput) {
  ASSERT_EQ(run({"simulate", "-c", config_.string(), "--out-dir", (dir_ / "a").string()}), 0);
  ASSERT_EQ(run({"simulate", "-c", config_.string(), "--seed", "8", "--out-dir",
                 (dir_ / "b").string()}), 0);
  EXPECT_NE(slurp(dir_ / "a" / "run_excitation.csv"), slurp(dir_ / "b" / "run_excitation.csv"));
  const json prov = json::parse(slurp(dir_ / "b" / "run_provenance.json"));
  EXPECT_EQ(prov["seed"], 8);
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  std::ofstream(dir_ / "bad.json") << R"({"grid": {"points": 81, "spacing": 1}})";
  EXPECT_EQ(run({"simulate", "-c", (dir_ / "bad.json").string()}), 2);
  EXPECT_NE(err_.str().find("grid.spacing"), std::string::npos);
  EXPECT_EQ(run({"simulate", "-c", (dir_ / "missing.json").string()}), 2);
  EXPECT_EQ(run({"simulate", "--bogus"}), 2);
  EXPECT_EQ(run({}), 2);
}

TEST_F(CliTest, UnwritableOutputFails) {
  std::ofstream(dir_ / "blocker") << "x";
  EXPECT_EQ(run({"simulate", "-c", config_.string(), "--out-dir", (dir_ / "blocker").string()}), 2);
}

void write_csv(const fs::path& p, const std::string& body) { std::ofstream(p) << body; }

TEST_F(CliTest, FitRejectsShortCsvWithDataError) {
  std::string body = "frequency_mhz,signal\n";
  for (int i = 0; i < 5; ++i) body += std::to_string(2868 + i) + ",0.99\n";
  write_csv(dir_ / "short.csv", body);
  EXPECT_EQ(run({"fit", "-c", config_.string(), "--zero-field", (dir_ / "short.csv").string(),
                 "--joint"}), 3);
  EXPECT_NE(err_.str().find("at least 10 points"), std::string::npos) << err_.str();
}

TEST_F(CliTest, FitReportsNonMonotoneRow) {
  write_csv(dir_ / "bad.csv", "frequency_mhz,signal\n1,1\n2,1\n2,1\n");
  EXPECT_EQ(run({"fit", "-c", config_.string(), "--zero-field", (dir_ / "bad.csv").string(),
                 "--joint"}), 3);
  EXPECT_NE(err_.str().find(":4:"), std::string::npos) << err_.str();
}

TEST_F(CliTest, FitEchoesFixedParameter) {
  ASSERT_EQ(run({"simulate", "-c", config_.string()}), 0);
  const fs::path data = dir_ / "out" / "run_signal.csv";
  ASSERT_EQ(run({"fit", "-c", config_.string(), "--zero-field", data.string(), "--joint", "--fix",
                 "gamma=0.3", "--fix", "d_zfs", "-o", (dir_ / "fit.json").string()}), 0)
      << err_.str();
  const json r = json::parse(slurp(dir_ / "fit.json"));
  EXPECT_EQ(r["version"], 1);
  EXPECT_EQ(r["mode"], "joint");
  EXPECT_EQ(r["params"]["gamma"], 0.3);
  EXPECT_EQ(r["params"]["d_zfs"], 2870.0);
  const auto fixed = r["fixed"].get<std::vector<std::string>>();
  for (const char* name : {"gamma", "d_zfs", "drive"}) {
    EXPECT_NE(std::find(fixed.begin(), fixed.end(), name), fixed.end()) << name;
  }
  for (const auto& f : r["stages"][0]["fitted"]) EXPECT_NE(f, "gamma");
}

TEST_F(CliTest, FitUsageErrors) {
  EXPECT_EQ(run({"fit", "-c", config_.string(), "--fix", "zfs=1", "--joint"}), 2);
  EXPECT_EQ(run({"fit", "-c", config_.string(), "--joint"}), 2);
  EXPECT_EQ(run({"fit", "-c", config_.string(), "--zero-field", "x.csv"}), 2);
}

TEST_F(CliTest, SweepWritesLongCsvAndMetrics) {
  const fs::path csv = dir_ / "g.csv";
  ASSERT_EQ(run({"sweep", "-c", config_.string(), "--param", "gamma", "--values", "0.1,0.3,1.0",
                 "-o", csv.string()}), 0) << err_.str();
  const std::string text = slurp(csv);
  EXPECT_EQ(text.substr(0, text.find('\n')), "parameter_value,frequency_mhz,value");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * 81);
  const json m = json::parse(slurp(dir_ / "g_metrics.json"));
  EXPECT_EQ(m["parameter"], "gamma");
  ASSERT_EQ(m["metrics"].size(), 3u);
  EXPECT_GT(m["metrics"][0]["dip_depth"].get<double>(), m["metrics"][2]["dip_depth"].get<double>());
}

TEST_F(CliTest, SweepRejectsUnknownParameter) {
  EXPECT_EQ(run({"sweep", "-c", config_.string(), "--param", "zfs", "--values", "1,2,3"}), 2);
  EXPECT_NE(err_.str().find("zfs"), std::string::npos);
  EXPECT_EQ(run({"sweep", "-c", config_.string(), "--param", "gamma", "--values", "1,x,3"}), 2);
}

TEST_F(CliTest, AnalyzeReportsPeaksAndDip) {
  ASSERT_EQ(run({"simulate", "-c", config_.string()}), 0);
  ASSERT_EQ(run({"analyze", (dir_ / "out" / "run_signal.csv").string()}), 0) << err_.str();
  const json r = json::parse(out_.str());
  EXPECT_EQ(r["kind"], "signal");
  EXPECT_EQ(r["peaks"].size(), 2u);
  ASSERT_FALSE(r["dip"].is_null());
  EXPECT_NEAR(r["dip"]["frequency_mhz"].get<double>(), 2870.0, 0.5);
  EXPECT_EQ(run({"analyze", (dir_ / "nothing.csv").string()}), 3);
}

}  // namespace
}  // namespace odmr::cli
