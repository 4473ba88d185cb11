/*
 * Copyright 2026 The ABC Bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun Cli(const std::string& args) {
  const std::string command = std::string(ABC_BENCH_CLI) + " " + args + " 2>&1";
  CliRun run;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return run;
  std::array<char, 4096> buffer;
  size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) run.out.append(buffer.data(), got);
  const int status = pclose(pipe);
  run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path Scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("abc_bench_cli_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

const std::string kPair = "--model linear:0:1,1 --x 0,0 --xref 1,2";

TEST(Cli, CurveReportsAbc) {
  const CliRun run = Cli("curve " + kPair + " --order 2,1 --mode insertion");
  ASSERT_EQ(run.code, 0) << run.out;
  EXPECT_NE(run.out.find("insertion"), std::string::npos);
  // f along (2,1): 0, 2, 3; AUC 5, AUL 4.5.
  EXPECT_NE(run.out.find(",5,4.5,0.5,"), std::string::npos) << run.out;
}

TEST(Cli, MissingReferenceIsUsageError) {
  const CliRun run = Cli("curve --model linear:0:1,1 --x 0,0");
  EXPECT_EQ(run.code, 2) << run.out;
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(Cli("frobnicate").code, 2);
  EXPECT_EQ(Cli("").code, 2);
}

TEST(Cli, HelpExitsZero) {
  for (const char* sub : {"", "decompose", "curve", "attribute", "experiment", "roar",
                          "selfcheck"}) {
    const CliRun run = Cli(std::string(sub) + " --help");
    EXPECT_EQ(run.code, 0) << sub;
    EXPECT_NE(run.out.find("Usage"), std::string::npos) << sub;
  }
}

TEST(Cli, RandomOrdersAreSeeded) {
  const std::string args = "curve " + kPair + " --methods shapley --random-orders 20 --mode insertion";
  const CliRun a = Cli("--seed 7 " + args);
  const CliRun b = Cli(args + " --seed 7");
  const CliRun c = Cli("--seed 8 " + args);
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  const std::string summary = a.out.substr(0, a.out.find("\n\n"));
  int random_rows = 0;
  std::istringstream lines(summary);
  for (std::string line; std::getline(lines, line);) {
    if (line.find(",random") != std::string::npos) ++random_rows;
  }
  EXPECT_EQ(random_rows, 20) << summary;
}

TEST(Cli, DecomposeAndAttribute) {
  const CliRun dec = Cli("decompose --model multilinear:2:1=1,2=1,1+2=2 --x 0,0 --xref 1,1");
  ASSERT_EQ(dec.code, 0) << dec.out;
  EXPECT_NE(dec.out.find("1+2"), std::string::npos) << dec.out;
  const CliRun sh = Cli("decompose --shapley --model multilinear:2:1=1,2=1,1+2=2 --x 0,0 --xref 1,1");
  EXPECT_NE(sh.out.find(",2"), std::string::npos) << sh.out;
  const CliRun att = Cli("attribute " + kPair + " --methods shapley,ig:cast --format json");
  ASSERT_EQ(att.code, 0) << att.out;
  const auto value = nlohmann::json::parse(att.out);
  EXPECT_EQ(value.size(), 2u);
}

TEST(Cli, BadMethodIsUsageError) {
  const CliRun run = Cli("attribute " + kPair + " --methods nonsense");
  EXPECT_EQ(run.code, 2) << run.out;
}

TEST(Cli, SelfCheckPasses) {
  const CliRun run = Cli("selfcheck --models 5");
  EXPECT_EQ(run.code, 0) << run.out;
  EXPECT_EQ(run.out.find("FAIL"), std::string::npos) << run.out;
}

std::filesystem::path WriteConfig(const std::string& name, const std::string& body) {
  const auto dir = Scratch(name);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "job.toml") << body;
  return dir;
}

const char* kSmallExperiment = R"(
seed = 5
max_pairs = 8
methods = ["shapley", "random"]
model = "multilinear:4:1=1,2=-1,3=0.5,4=2,1+3=1"
[policy]
name = "counterfactual"
min_diff_features = 4
[dataset.synthetic]
rows = 80
continuous = 4
seed = 3
)";

TEST(Cli, ExperimentInvalidPolicyListsChoices) {
  const auto dir = WriteConfig("policy", kSmallExperiment);
  const CliRun run = Cli("experiment --config " + (dir / "job.toml").string() +
                      " --policy nearest --output " + (dir / "out").string());
  EXPECT_EQ(run.code, 2) << run.out;
  EXPECT_NE(run.out.find("counterfactual"), std::string::npos) << run.out;
  EXPECT_NE(run.out.find("one_to_one"), std::string::npos) << run.out;
  EXPECT_NE(run.out.find("average"), std::string::npos) << run.out;
}

TEST(Cli, ExperimentUnknownKeyIsUsageError) {
  const auto dir = WriteConfig("unknown", std::string(kSmallExperiment) + "\n[extra]\nx = 1\n");
  const CliRun run = Cli("experiment --config " + (dir / "job.toml").string());
  EXPECT_EQ(run.code, 2) << run.out;
}

TEST(Cli, ExperimentOutputsAreReproducible) {
  const auto dir = WriteConfig("repro", kSmallExperiment);
  const std::string base = "experiment --config " + (dir / "job.toml").string();
  const CliRun a = Cli("--threads 1 " + base + " --output " + (dir / "a").string());
  const CliRun b = Cli("--threads 3 " + base + " --output " + (dir / "b").string());
  ASSERT_EQ(a.code, 0) << a.out;
  ASSERT_EQ(b.code, 0) << b.out;
  for (const char* file : {"summary.json", "pairs.csv", "pair_set.csv"}) {
    EXPECT_EQ(Slurp(dir / "a" / file), Slurp(dir / "b" / file)) << file;
  }
}

TEST(Cli, ExactKernelShapCountsEvaluations) {
  const auto dir = Scratch("ks16");
  const CliRun run = Cli("experiment --config " + std::string(ABC_SOURCE_DIR) +
                      "/configs/synthetic_experiment.toml --methods ks:exact --max-pairs 2"
                      " --output " + dir.string());
  ASSERT_EQ(run.code, 0) << run.out;
  std::ifstream in(dir / "summary.json");
  const auto summary = nlohmann::json::parse(in);
  ASSERT_FALSE(summary["table"].empty());
  EXPECT_EQ(summary["table"][0]["mean_evaluations"], 65536.0);
}

TEST(Cli, RoarWritesOutputs) {
  const auto dir = Scratch("roar");
  const CliRun run = Cli("roar --config " + std::string(ABC_SOURCE_DIR) +
                      "/configs/roar_linear.toml --replicates 1 --output " + dir.string());
  ASSERT_EQ(run.code, 0) << run.out;
  EXPECT_TRUE(std::filesystem::exists(dir / "roar.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "roar_summary.json"));
}

}  // namespace
