// Copyright 2026 The keygraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end checks of the CLI binary plus unit coverage of the config
// parser and CSV writer.

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include "keygraph/io.hpp"

namespace keygraph {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(KEYGRAPH_CLI_BIN) + " " + args + " 2>&1";
  RunResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe)) {
    result.output.append(buf, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("keygraph_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& name, const std::string& body) {
    const std::string path = (dir_ / name).string();
    write_file(path, body);
    return path;
  }

  fs::path dir_;
};

const char kFigure1Config[] = R"({
  "r": 2,
  "mu": [0.5, 0.5],
  "K": [20, 25],
  "P": 10000,
  "alpha": [0.3, 0.2, 0.2, 0.3],
  "n": 500,
  "trials": 400,
  "seed": 0
})";

TEST_F(CliTest, EdgeProbPrintsMinClass) {
  const auto path = write_config("fig1.json", kFigure1Config);
  const RunResult r = run_cli("edge-prob --config " + path);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("m=1"), std::string::npos);
  EXPECT_NE(r.output.find("p[1][2]=0.048875"), std::string::npos);
  EXPECT_NE(r.output.find("alpha_min=0.200000"), std::string::npos);
}

TEST_F(CliTest, EdgeProbSingleClass) {
  const auto path = write_config("r1.json", R"({
    "r": 1, "mu": [1.0], "K": [2], "P": 5, "alpha": [0.5],
    "n": 10, "trials": 1, "seed": 0
  })");
  const RunResult r = run_cli("edge-prob --config " + path);
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("p[1][1]=0.700000"), std::string::npos);
  EXPECT_NE(r.output.find("m=1"), std::string::npos);
}

TEST_F(CliTest, MalformedMuExitsWithValidationCode) {
  const auto path = write_config("bad.json", R"({
    "r": 2, "mu": [0.5, 0.4], "K": [2, 3], "P": 10, "alpha": [0.5, 0.5, 0.5, 0.5],
    "n": 10, "trials": 1
  })");
  const RunResult r = run_cli("edge-prob --config " + path);
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.output.find("mu"), std::string::npos);
}

TEST_F(CliTest, ThresholdMatchesFrozenScan) {
  const auto path = write_config("fig1.json", kFigure1Config);
  const RunResult r = run_cli("threshold --config " + path + " --offsets 0,5");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("K1*=22"), std::string::npos);
}

TEST_F(CliTest, ThresholdNoSolutionExitCode) {
  const auto path = write_config("off.json", R"({
    "r": 2, "mu": [0.5, 0.5], "K": [2, 7], "P": 50,
    "alpha": [0.0, 0.0, 0.0, 0.0], "n": 100, "trials": 1
  })");
  const RunResult r = run_cli("threshold --config " + path);
  EXPECT_EQ(r.exit_code, 3);
}

const char kSweepConfig[] = R"({
  "r": 2,
  "mu": [0.5, 0.5],
  "K1": 2,
  "offsets": [0, 2],
  "P": 60,
  "alpha": [0.6, 0.4, 0.4, 0.6],
  "n": 40,
  "trials": 10,
  "seed": 5,
  "sweep": { "axis": "K1", "values": [2, 4, 6] }
})";

TEST_F(CliTest, SweepWritesCsvAndManifestDeterministically) {
  const auto config = write_config("sweep.json", kSweepConfig);
  const std::string out1 = (dir_ / "a.csv").string();
  const std::string out2 = (dir_ / "b.csv").string();

  const RunResult r1 = run_cli("sweep --config " + config + " --out " + out1);
  ASSERT_EQ(r1.exit_code, 0) << r1.output;
  const RunResult r2 = run_cli("sweep --config " + config + " --out " + out2);
  ASSERT_EQ(r2.exit_code, 0) << r2.output;

  const std::string csv1 = read_file(out1);
  EXPECT_EQ(csv1, read_file(out2));  // identical config + seed => identical bytes

  // Schema: exact header, one row per value.
  std::istringstream lines(csv1);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, std::string(kSweepCsvHeader));
  int rows = 0;
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty()) ++rows;
  }
  EXPECT_EQ(rows, 3);

  // Manifest side file exists and echoes the seed.
  const std::string manifest = read_file(out1 + ".manifest.json");
  EXPECT_NE(manifest.find("\"master_seed\": 5"), std::string::npos);
  EXPECT_NE(manifest.find("config_hash"), std::string::npos);
  EXPECT_NE(manifest.find("fnv1a64:"), std::string::npos);
}

TEST_F(CliTest, SweepRowsKeepContainment) {
  const auto config = write_config("sweep.json", kSweepConfig);
  const std::string out = (dir_ / "c.csv").string();
  ASSERT_EQ(run_cli("sweep --config " + config + " --out " + out).exit_code, 0);

  std::istringstream lines(read_file(out));
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    double sweep_value, p_conn, p_free;
    unsigned long long n, trials, conn, free_count;
    int at_threshold;
    double lambda_m, c_n;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%llu,%llu,%llu,%llu,%lf,%lf,%lf,%lf,%d",
                          &sweep_value, &n, &trials, &conn, &free_count, &p_conn, &p_free,
                          &lambda_m, &c_n, &at_threshold),
              10)
        << line;
    EXPECT_LE(p_conn, p_free);
    EXPECT_LE(conn, free_count);
  }
}

TEST_F(CliTest, SweepIoErrorExitCode) {
  const auto config = write_config("sweep.json", kSweepConfig);
  const RunResult r =
      run_cli("sweep --config " + config + " --out /nonexistent_dir_931/x.csv");
  EXPECT_EQ(r.exit_code, 4);
}

TEST_F(CliTest, FigurePresetSmoke) {
  // Two trials per point keeps the preset fast while checking shape.
  const RunResult r = run_cli("figure --id 1 --trials 2 --out-dir " + dir_.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  for (const char* name : {"figure1_alpha12_0.2.csv", "figure1_alpha12_0.4.csv",
                           "figure1_alpha12_0.6.csv"}) {
    const fs::path csv = dir_ / name;
    ASSERT_TRUE(fs::exists(csv)) << name;
    ASSERT_TRUE(fs::exists(dir_ / (std::string(name) + ".manifest.json")));
    std::istringstream lines(read_file(csv.string()));
    int count = -1;  // header
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty()) ++count;
    }
    EXPECT_EQ(count, 21) << name;
  }
}

TEST_F(CliTest, FigureRejectsUnknownId) {
  EXPECT_EQ(run_cli("figure --id 9 --out-dir " + dir_.string()).exit_code, 2);
}

TEST_F(CliTest, Figure4ZeroCrossChannelRowNeverConnects) {
  const RunResult r = run_cli("figure --id 4 --trials 2 --out-dir " + dir_.string());
  ASSERT_EQ(r.exit_code, 0) << r.output;
  for (const char* name :
       {"figure4_k1_20.csv", "figure4_k1_25.csv", "figure4_k1_30.csv", "figure4_k1_35.csv"}) {
    const fs::path csv = dir_ / name;
    ASSERT_TRUE(fs::exists(csv)) << name;
    std::istringstream lines(read_file(csv.string()));
    std::string header, first_row;
    std::getline(lines, header);
    std::getline(lines, first_row);
    // alpha_12 = 0: the two classes cannot attach to each other.
    EXPECT_EQ(first_row.rfind("0.000000,500,2,0,", 0), 0u) << first_row;
  }
}

TEST_F(CliTest, RemainingFigurePresetsProduceExpectedCurves) {
  ASSERT_EQ(run_cli("figure --id 2 --trials 1 --out-dir " + dir_.string()).exit_code, 0);
  ASSERT_EQ(run_cli("figure --id 3 --trials 1 --out-dir " + dir_.string()).exit_code, 0);
  const std::map<std::string, int> expected_rows = {
      {"figure2_alpha11_0.2.csv", 16}, {"figure2_alpha11_0.4.csv", 16},
      {"figure2_alpha11_0.6.csv", 16}, {"figure3_k1_20.csv", 21},
      {"figure3_k1_25.csv", 21},       {"figure3_k1_30.csv", 21},
      {"figure3_k1_35.csv", 21}};
  for (const auto& [name, rows] : expected_rows) {
    ASSERT_TRUE(fs::exists(dir_ / name)) << name;
    std::istringstream lines(read_file((dir_ / name).string()));
    int count = -1;
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty()) ++count;
    }
    EXPECT_EQ(count, rows) << name;
  }
}

TEST_F(CliTest, SweepSeedOverrideLandsInManifest) {
  const auto config = write_config("sweep.json", kSweepConfig);
  const std::string out = (dir_ / "seeded.csv").string();
  ASSERT_EQ(run_cli("sweep --config " + config + " --seed 9 --out " + out).exit_code, 0);
  EXPECT_NE(read_file(out + ".manifest.json").find("\"master_seed\": 9"), std::string::npos);
}

TEST_F(CliTest, CheckScalingPolylogPreset) {
  const std::string out = (dir_ / "scaling.csv").string();
  const RunResult r = run_cli("check-scaling --grid 1000,10000 --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("trend c_n"), std::string::npos);

  std::istringstream lines(read_file(out));
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, std::string(kScalingCsvHeader));
  std::string row;
  while (std::getline(lines, row)) {
    if (row.empty()) continue;
    unsigned long long n;
    double c_n;
    ASSERT_EQ(std::sscanf(row.c_str(), "%llu,%lf", &n, &c_n), 2);
    EXPECT_GT(c_n, 1.0);
  }
}

TEST_F(CliTest, CheckScalingConstantFamily) {
  const auto config = write_config("fig1.json", kFigure1Config);
  const std::string out = (dir_ / "const.csv").string();
  const RunResult r = run_cli("check-scaling --family constant --config " + config +
                              " --grid 100,1000,10000 --out " + out);
  ASSERT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("trend"), std::string::npos);
  // Diagnostics only: no verdict wording in the report output.
  EXPECT_EQ(r.output.find("satisfied"), std::string::npos);
  EXPECT_EQ(r.output.find("PASS"), std::string::npos);
}

TEST_F(CliTest, CheckScalingRejectsTinyGrid) {
  const std::string out = (dir_ / "bad.csv").string();
  EXPECT_EQ(run_cli("check-scaling --grid 1,1000 --out " + out).exit_code, 2);
}

TEST_F(CliTest, HiddenOracleKeyProb) {
  const RunResult r = run_cli("oracle key-prob 2 2 5");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("exhaustive=0.700000000000"), std::string::npos);
  EXPECT_NE(r.output.find("formula=0.700000000000"), std::string::npos);
  // Hidden: not mentioned in help.
  const RunResult help = run_cli("--help");
  EXPECT_EQ(help.output.find("oracle"), std::string::npos);
}

TEST(ConfigParser, AcceptsRangeSweeps) {
  const RunConfig config = parse_config(R"({
    "r": 1, "mu": [1.0], "K": [2], "P": 30, "alpha": [0.5],
    "n": 10, "trials": 2,
    "sweep": { "axis": "channel_scalar", "from": 0.1, "to": 0.5, "step": 0.1 }
  })");
  ASSERT_TRUE(config.sweep_axis.has_value());
  ASSERT_EQ(config.sweep_values.size(), 5u);
  EXPECT_DOUBLE_EQ(config.sweep_values.front(), 0.1);
  EXPECT_DOUBLE_EQ(config.sweep_values.back(), 0.5);
}

TEST(ConfigParser, FieldPathErrors) {
  EXPECT_THROW(parse_config("not json"), ValidationError);
  EXPECT_THROW(parse_config("{}"), ValidationError);
  try {
    parse_config(R"({"r": 2, "mu": [0.5, 0.5], "K": [2, 3, 4], "P": 10,
                     "alpha": [0.5,0.5,0.5,0.5], "n": 5, "trials": 1})");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("K"), std::string::npos);
  }
}

TEST(ConfigParser, AlphaEntryIndicesAreOneBased) {
  const RunConfig config = parse_config(R"({
    "r": 2, "mu": [0.5, 0.5], "K": [2, 3], "P": 30,
    "alpha": [0.5, 0.2, 0.2, 0.5], "n": 10, "trials": 2,
    "sweep": { "axis": "alpha_entry", "i": 1, "j": 2, "values": [0.1, 0.2] }
  })");
  EXPECT_EQ(config.sweep_entry_i, 0u);
  EXPECT_EQ(config.sweep_entry_j, 1u);
  EXPECT_THROW(parse_config(R"({
    "r": 2, "mu": [0.5, 0.5], "K": [2, 3], "P": 30,
    "alpha": [0.5, 0.2, 0.2, 0.5], "n": 10, "trials": 2,
    "sweep": { "axis": "alpha_entry", "i": 0, "j": 2, "values": [0.1] }
  })"),
               ValidationError);
}

TEST(SweepCsv, FormatsKnownTally) {
  SweepResult result;
  SweepRow row;
  row.value = 7;
  row.tally = {10, 4, 6};
  row.lambda_m = 0.0123456;
  row.c_n = 1.5;
  row.at_threshold = true;
  result.push_back(row);
  const std::string csv = format_sweep_csv(result, 50, SweepAxis::K1);
  EXPECT_EQ(csv, std::string(kSweepCsvHeader) +
                     "\n7,50,10,4,6,0.400000,0.600000,0.012346,1.500000,1\n");
}

}  // namespace
}  // namespace keygraph
