// Copyright 2026 The Proxkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// End-to-end tests that drive the installed binary through popen. The
// binary path arrives via the PROXKIT_CLI_PATH environment variable set
// by the build.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "proxkit/proxkit.hpp"

namespace proxkit {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // merged stdout + stderr
};

std::string CliPath() {
  const char* path = std::getenv("PROXKIT_CLI_PATH");
  return path ? path : "";
}

RunResult RunCli(const std::string& args) {
  const std::string cmd = "'" + CliPath() + "' " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  RunResult result;
  if (pipe == nullptr) return result;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) result.output += buf;
  const int status = pclose(pipe);
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  return result;
}

fs::path FreshDir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("proxkit_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Q(const fs::path& p) { return "'" + p.string() + "'"; }

nlohmann::json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  EXPECT_TRUE(in) << path;
  return nlohmann::json::parse(in);
}

/// Writes a small labeled dataset: `per_group` scenarios at each of two
/// separations, with truth sidecars, ready for train/evaluate runs.
void WriteLabeledDataset(const fs::path& dir, int per_group, int steps,
                         std::uint64_t seed) {
  const ObservationModel model = known_pair_model(TransformMode::kLogNegRssi);
  std::vector<ManifestEntry> entries;
  for (int g = 0; g < 2; ++g) {
    for (int i = 0; i < per_group; ++i) {
      const std::string id = (g == 0 ? "near_" : "far_") + std::to_string(i);
      WalkConfig walk;
      walk.steps = steps;
      walk.q_sim = 0.04;
      walk.init_distance_m = g == 0 ? 1.0 : 4.0;
      walk.geometry = WalkGeometry::kFoldedLine;
      walk.seed = derive_seed(seed, id + "/walk");
      const std::vector<double> truth = random_walk(walk);

      ObsConfig obs_config;
      obs_config.dropout = 0.2;
      obs_config.seed = derive_seed(seed, id + "/obs");
      const std::vector<Observation> observations =
          sample_observations(truth, model, obs_config);

      {
        std::ofstream out(dir / (id + "_rssi.csv"));
        write_scenario_csv(out, observations, model.mode, 1.0);
      }
      {
        std::ofstream out(dir / (id + "_truth.csv"));
        write_truth_csv(out, truth);
      }
      ManifestEntry entry;
      entry.id = id;
      entry.rssi_csv = id + "_rssi.csv";
      entry.truth_csv = id + "_truth.csv";
      entry.label = g == 0 ? "positive" : "negative";
      entry.proximity = g == 0 ? "near" : "far";
      entries.push_back(std::move(entry));
    }
  }
  write_manifest(dir / "manifest.json", TransformMode::kLogNegRssi, 1.0,
                 entries);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    if (CliPath().empty()) {
      GTEST_SKIP() << "PROXKIT_CLI_PATH not set";
    }
  }
};

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(RunCli("--help").exit_code, 0);
  EXPECT_EQ(RunCli("smooth --help").exit_code, 0);
}

TEST_F(CliTest, MissingSubcommandOrBadFlagExitsTwo) {
  EXPECT_EQ(RunCli("").exit_code, 2);
  EXPECT_EQ(RunCli("smooth --no-such-flag --out x").exit_code, 2);
  EXPECT_EQ(RunCli("smooth --mode purple --rssi a.csv --out x").exit_code, 2);
}

TEST_F(CliTest, SimulateWritesScenariosAndManifest) {
  const fs::path dir = FreshDir("simulate");
  const RunResult r = RunCli(
      "simulate --count 2 --steps 40 --seed 3 --geometry circle --radius 2 "
      "--dropout 0.4 --out " + Q(dir));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir / "scenario_0_rssi.csv"));
  EXPECT_TRUE(fs::exists(dir / "scenario_1_truth.csv"));
  const Dataset dataset = load_manifest(dir / "manifest.json");
  ASSERT_EQ(dataset.entries.size(), 2u);
  for (const DatasetEntry& entry : dataset.entries) {
    EXPECT_EQ(entry.scenario.steps, 40);
    EXPECT_EQ(entry.scenario.truth.size(), 40u);
  }
}

TEST_F(CliTest, SimulateIsDeterministicUnderSeed) {
  const fs::path a = FreshDir("sim_seed_a");
  const fs::path b = FreshDir("sim_seed_b");
  ASSERT_EQ(RunCli("simulate --count 1 --steps 30 --seed 9 --out " + Q(a))
                .exit_code, 0);
  ASSERT_EQ(RunCli("simulate --count 1 --steps 30 --seed 9 --out " + Q(b))
                .exit_code, 0);
  std::ifstream fa(a / "scenario_0_rssi.csv"), fb(b / "scenario_0_rssi.csv");
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_FALSE(sa.str().empty());
}

TEST_F(CliTest, SmoothManifestWritesSeriesAndSummary) {
  const fs::path sim = FreshDir("smooth_in");
  ASSERT_EQ(RunCli("simulate --count 2 --steps 50 --seed 5 --out " + Q(sim))
                .exit_code, 0);
  const fs::path out = FreshDir("smooth_out");
  const RunResult r = RunCli("smooth --manifest " +
                             Q(sim / "manifest.json") + " --out " + Q(out));
  ASSERT_EQ(r.exit_code, 0) << r.output;

  std::ifstream smooth_csv(out / "scenario_0_smooth.csv");
  std::string header;
  std::getline(smooth_csv, header);
  EXPECT_EQ(header, kSmoothCsvHeader);
  EXPECT_TRUE(fs::exists(out / "scenario_0_risk.csv"));
  EXPECT_TRUE(fs::exists(out / "scenario_1_smooth.csv"));

  const nlohmann::json summary = ReadJson(out / "summary.json");
  EXPECT_EQ(summary.at("format"), "proxkit-smooth-summary-v1");
  ASSERT_EQ(summary.at("scenarios").size(), 2u);
  for (const nlohmann::json& row : summary.at("scenarios")) {
    EXPECT_GT(row.at("total_risk").get<double>(), 0.0);
    // Simulated scenarios carry truth, so relative risk is reported.
    EXPECT_TRUE(row.contains("relative_risk"));
  }
}

TEST_F(CliTest, SmoothSingleFileWithTruthSidecar) {
  const fs::path sim = FreshDir("smooth_single_in");
  ASSERT_EQ(RunCli("simulate --count 1 --steps 25 --seed 7 --out " + Q(sim))
                .exit_code, 0);
  const fs::path out = FreshDir("smooth_single_out");
  const RunResult r = RunCli(
      "smooth --rssi " + Q(sim / "scenario_0_rssi.csv") + " --truth " +
      Q(sim / "scenario_0_truth.csv") + " --out " + Q(out));
  ASSERT_EQ(r.exit_code, 0) << r.output;
  std::ifstream smooth_csv(out / "scenario_0_rssi_smooth.csv");
  int lines = 0;
  for (std::string line; std::getline(smooth_csv, line);) ++lines;
  EXPECT_EQ(lines, 1 + 25);  // header + one row per truth step
}

TEST_F(CliTest, ConfigFileSuppliesDefaultsAndFlagsOverride) {
  const fs::path dir = FreshDir("config");
  {
    std::ofstream out(dir / "config.json");
    out << R"({"mode": "gaussian", "steps": 30, "count": 1})";
  }
  const fs::path out_a = FreshDir("config_a");
  ASSERT_EQ(RunCli("simulate --config " + Q(dir / "config.json") +
                   " --seed 2 --out " + Q(out_a)).exit_code, 0);
  const Dataset a = load_manifest(out_a / "manifest.json");
  EXPECT_EQ(a.mode, TransformMode::kRawRssi);
  EXPECT_EQ(a.entries[0].scenario.steps, 30);

  const fs::path out_b = FreshDir("config_b");
  ASSERT_EQ(RunCli("simulate --config " + Q(dir / "config.json") +
                   " --steps 10 --seed 2 --out " + Q(out_b)).exit_code, 0);
  const Dataset b = load_manifest(out_b / "manifest.json");
  EXPECT_EQ(b.entries[0].scenario.steps, 10);

  {
    std::ofstream out(dir / "bad.json");
    out << "not json";
  }
  EXPECT_EQ(RunCli("simulate --config " + Q(dir / "bad.json") + " --out " +
                   Q(out_b)).exit_code, 2);
}

TEST_F(CliTest, TrainWritesModelAndReport) {
  const fs::path data = FreshDir("train_data");
  WriteLabeledDataset(data, /*per_group=*/3, /*steps=*/30, /*seed=*/21);
  const fs::path out = FreshDir("train_out");
  const RunResult r = RunCli(
      "train --manifest " + Q(data / "manifest.json") +
      " --folds 2 --init-points 3 --rounds 2 --seed 13 --out " + Q(out));
  ASSERT_EQ(r.exit_code, 0) << r.output;

  const ObservationModel model = load_model(out / "model.json",
                                            TransformMode::kLogNegRssi);
  EXPECT_EQ(model.form, MeanForm::kLogLinear);
  EXPECT_GT(model.theta_r, 0.0);
  EXPECT_GT(model.q, 0.0);

  const nlohmann::json report = ReadJson(out / "train_report.json");
  EXPECT_EQ(report.at("format"), kTrainFormat);
  ASSERT_EQ(report.at("folds").size(), 2u);
  // init_points + rounds evaluations per fold.
  EXPECT_EQ(report.at("folds")[0].at("trace").size(), 5u);
  EXPECT_EQ(report.at("fold_assignment").size(), 6u);
}

TEST_F(CliTest, EvaluateComputesAucAndWritesCsv) {
  const fs::path data = FreshDir("eval_data");
  WriteLabeledDataset(data, /*per_group=*/2, /*steps=*/40, /*seed=*/31);
  const fs::path out = FreshDir("eval_out");
  const RunResult r = RunCli("evaluate --manifest " +
                             Q(data / "manifest.json") + " --out " + Q(out));
  ASSERT_EQ(r.exit_code, 0) << r.output;

  const nlohmann::json evaluation = ReadJson(out / "evaluation.json");
  EXPECT_EQ(evaluation.at("format"), kEvalFormat);
  const double auc = evaluation.at("auc").get<double>();
  EXPECT_GE(auc, 0.0);
  EXPECT_LE(auc, 1.0);
  ASSERT_EQ(evaluation.at("scenarios").size(), 4u);

  std::ifstream csv(out / "evaluation.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "id,label,total_risk,relative_risk");
}

TEST_F(CliTest, ReportEmitsBandTimeseriesAndScatter) {
  const fs::path work = FreshDir("report_in");
  ASSERT_EQ(RunCli("simulate --count 1 --steps 30 --seed 17 --out " + Q(work))
                .exit_code, 0);
  ASSERT_EQ(RunCli("smooth --manifest " + Q(work / "manifest.json") +
                   " --out " + Q(work)).exit_code, 0);
  WriteLabeledDataset(work, /*per_group=*/2, /*steps=*/30, /*seed=*/18);
  ASSERT_EQ(RunCli("evaluate --manifest " + Q(work / "manifest.json") +
                   " --out " + Q(work)).exit_code, 0);

  const fs::path out = FreshDir("report_out");
  const RunResult r = RunCli(
      "report --model preset:known-pair --smooth-csv " +
      Q(work / "scenario_0_smooth.csv") + " --evaluation " +
      Q(work / "evaluation.json") + " --out " + Q(out));
  ASSERT_EQ(r.exit_code, 0) << r.output;

  std::ifstream band(out / "gp_band.csv");
  std::string header;
  std::getline(band, header);
  EXPECT_EQ(header, "d,mean,lo,hi");
  int rows = 0;
  for (std::string line; std::getline(band, line);) ++rows;
  EXPECT_EQ(rows, 33);

  EXPECT_TRUE(fs::exists(out / "timeseries.csv"));
  std::ifstream scatter(out / "risk_scatter.csv");
  std::getline(scatter, header);
  EXPECT_EQ(header, "id,label,total_risk,relative_risk");
}

TEST_F(CliTest, ReportWithoutInputsExitsTwo) {
  const fs::path out = FreshDir("report_empty");
  EXPECT_EQ(RunCli("report --out " + Q(out)).exit_code, 2);
}

TEST_F(CliTest, MissingInputsExitTwo) {
  const fs::path out = FreshDir("missing");
  EXPECT_EQ(RunCli("smooth --manifest /nonexistent/manifest.json --out " +
                   Q(out)).exit_code, 2);
  EXPECT_EQ(RunCli("smooth --model /nonexistent/model.json --rssi x.csv "
                   "--out " + Q(out)).exit_code, 2);
}

TEST_F(CliTest, MalformedDataExitsThree) {
  const fs::path dir = FreshDir("bad_data");
  {
    std::ofstream out(dir / "garbage.csv");
    out << "time_s,rssi_dbm\n1.0,abc\n";
  }
  const fs::path out_dir = FreshDir("bad_data_out");
  EXPECT_EQ(RunCli("smooth --rssi " + Q(dir / "garbage.csv") + " --out " +
                   Q(out_dir)).exit_code, 3);
  {
    std::ofstream out(dir / "positive.csv");
    out << "time_s,rssi_dbm\n0.5,3.0\n";
  }
  // A positive RSSI is rejected by the log transform.
  EXPECT_EQ(RunCli("smooth --rssi " + Q(dir / "positive.csv") + " --out " +
                   Q(out_dir)).exit_code, 3);
}

TEST_F(CliTest, RawModeAcceptsPositiveRssi) {
  const fs::path dir = FreshDir("raw_ok");
  {
    std::ofstream out(dir / "positive.csv");
    out << "time_s,rssi_dbm\n0.5,3.0\n1.5,-40.0\n";
  }
  const fs::path out_dir = FreshDir("raw_ok_out");
  const RunResult r = RunCli("smooth --mode gaussian --rssi " +
                             Q(dir / "positive.csv") + " --out " + Q(out_dir));
  EXPECT_EQ(r.exit_code, 0) << r.output;
}

}  // namespace
}  // namespace proxkit
