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

#include "abc_bench/config.h"

#include <filesystem>
#include <fstream>

#include "abc_bench/job_config.h"
#include "gtest/gtest.h"

namespace abc_bench {
namespace {

using nlohmann::json;

TEST(ParseToml, ConvertsTables) {
  auto value = ParseToml(R"(
seed = 7
methods = ["shapley", "ks:exact"]
[dataset.synthetic]
rows = 10
noise = 0.5
)",
                         "inline");
  ASSERT_TRUE(value.ok()) << value.status();
  EXPECT_EQ((*value)["seed"], 7);
  EXPECT_EQ((*value)["methods"][1], "ks:exact");
  EXPECT_EQ((*value)["dataset"]["synthetic"]["noise"], 0.5);
}

TEST(ParseToml, ReportsSyntaxErrors) {
  auto value = ParseToml("seed = = 3\n", "broken.toml");
  ASSERT_FALSE(value.ok());
  EXPECT_NE(std::string(value.status().message()).find("broken.toml"), std::string::npos);
}

TEST(Readers, TypeErrorsNameKeyPaths) {
  const json object = json::parse(R"({"a": "x", "b": 1.5, "c": -1, "d": "p,q"})");
  auto a = ReadInt(object, "a", "job", 0);
  ASSERT_FALSE(a.ok());
  EXPECT_NE(std::string(a.status().message()).find("job.a"), std::string::npos);
  EXPECT_FALSE(ReadInt(object, "b", "", 0).ok());
  EXPECT_EQ(*ReadInt(object, "missing", "", 4), 4);
  EXPECT_FALSE(ReadSeed(object, "c", "", 0).ok());
  EXPECT_EQ(*ReadDouble(object, "b", "", 0), 1.5);
  EXPECT_EQ(*ReadStringList(object, "d", "", {}), (std::vector<std::string>{"p", "q"}));
}

TEST(RejectUnknownKeys, ListsAllowed) {
  auto s = RejectUnknownKeys(json::parse(R"({"sed": 1})"), "job", {"seed"});
  ASSERT_FALSE(s.ok());
  EXPECT_NE(std::string(s.message()).find("job.sed"), std::string::npos);
  EXPECT_NE(std::string(s.message()).find("seed"), std::string::npos);
}

TEST(Paths, ResolveAgainstConfigDirectory) {
  EXPECT_EQ(ResolvePath("configs", "data.csv"), "configs/data.csv");
  EXPECT_EQ(ResolvePath("configs", "/abs/data.csv"), "/abs/data.csv");
  EXPECT_EQ(ResolvePath("", "data.csv"), "data.csv");
  EXPECT_EQ(DirectoryOf("configs/job.toml"), "configs");
  EXPECT_EQ(DirectoryOf("job.toml"), "");
}

json MinimalExperiment() {
  return json::parse(R"({
    "seed": 1,
    "methods": ["shapley", "random"],
    "model": "linear:0:1,2",
    "policy": {"name": "counterfactual", "min_diff_features": 2, "knn": 5},
    "dataset": {"synthetic": {"rows": 40, "continuous": 2}}
  })");
}

TEST(ExperimentConfig, Defaults) {
  auto config = ExperimentConfigFromJson(MinimalExperiment(), "");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->methods.size(), 2u);
  EXPECT_EQ(config->modes.size(), 2u);
  ASSERT_EQ(config->differences.size(), 1u);
  EXPECT_EQ(config->differences[0].first, "shapley");
  EXPECT_EQ(config->policy.min_diff_features, 2);
  EXPECT_EQ(config->max_pairs, 100);
}

TEST(ExperimentConfig, ValidationErrors) {
  json bad = MinimalExperiment();
  bad["polcy"] = "average";
  EXPECT_FALSE(ExperimentConfigFromJson(bad, "").ok());

  bad = MinimalExperiment();
  bad["policy"] = "nearest";
  auto policy = ExperimentConfigFromJson(bad, "");
  ASSERT_FALSE(policy.ok());
  EXPECT_NE(std::string(policy.status().message()).find("counterfactual"), std::string::npos);

  bad = MinimalExperiment();
  bad["methods"] = json::array({"shapley", "shapley"});
  EXPECT_FALSE(ExperimentConfigFromJson(bad, "").ok());

  bad = MinimalExperiment();
  bad["differences"] = json::array({json::array({"shapley", "lime"})});
  EXPECT_FALSE(ExperimentConfigFromJson(bad, "").ok());

  bad = MinimalExperiment();
  bad["dataset"]["synthetic"]["rowz"] = 3;
  auto nested = ExperimentConfigFromJson(bad, "");
  ASSERT_FALSE(nested.ok());
  EXPECT_NE(std::string(nested.status().message()).find("dataset.synthetic.rowz"),
            std::string::npos);

  bad = MinimalExperiment();
  bad["modes"] = "insertion,sideways";
  EXPECT_FALSE(ExperimentConfigFromJson(bad, "").ok());

  bad = MinimalExperiment();
  bad.erase("model");
  EXPECT_FALSE(ExperimentConfigFromJson(bad, "").ok());
}

TEST(DatasetConfig, PathRequiresSchemaAndExcludesSynthetic) {
  EXPECT_FALSE(DatasetConfigFromJson(json::parse(R"({"path": "a.csv"})"), "dataset", "").ok());
  EXPECT_FALSE(DatasetConfigFromJson(
                   json::parse(R"({"path": "a.csv", "schema": {"columns": {}},
                                   "synthetic": {"rows": 3}})"),
                   "dataset", "")
                   .ok());
  EXPECT_FALSE(DatasetConfigFromJson(json::parse(R"({"train_fraction": 1.5,
                                                     "synthetic": {}})"),
                                     "dataset", "")
                   .ok());
}

TEST(DatasetConfig, LoadsCsvRelativeToBase) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "abc_bench_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "d.csv") << "a,b,y\n1,0,2\n2,1,3\n3,0,4\n4,1,5\n";
  std::ofstream(dir / "d.schema.toml")
      << "normalize = true\n[columns]\na = \"continuous\"\nb = \"binary\"\ny = \"target\"\n";
  auto config = DatasetConfigFromJson(
      json::parse(R"({"path": "d.csv", "schema": "d.schema.toml", "train_fraction": 0.5})"),
      "dataset", dir.string());
  ASSERT_TRUE(config.ok()) << config.status();
  auto ds = LoadDataset(*config, 3);
  ASSERT_TRUE(ds.ok()) << ds.status();
  EXPECT_EQ(ds->num_rows(), 4);
  EXPECT_EQ(ds->train().size(), 2u);
  EXPECT_TRUE(ds->normalization().has_value());
}

TEST(BuildModel, AcceptsStringObjectAndFile) {
  const FeatureSpace space = FeatureSpace::Continuous(2);
  EXPECT_TRUE(BuildModel(json("linear:0:1,2"), space, "").ok());
  EXPECT_TRUE(BuildModel(json::parse(R"({"kind": "linear", "coefficients": [1, 2]})"), space, "")
                  .ok());
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "abc_bench_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "m.json") << R"({"kind": "linear", "coefficients": [3, 4]})";
  auto model = BuildModel(json::parse(R"({"file": "m.json"})"), space, dir.string());
  ASSERT_TRUE(model.ok()) << model.status();
  EXPECT_DOUBLE_EQ(*(*model)->PredictOne({1, 1}), 7);
  EXPECT_FALSE(BuildModel(json("linear:0:1,2,3"), space, "").ok());
}

TEST(RoarJobConfig, ParsesAndValidates) {
  auto config = RoarJobConfigFromJson(json::parse(R"({
    "methods": "shapley,random", "quantiles": [0.5, 1.0], "rankings": ["absolute"],
    "replicates": 2, "dataset": {"synthetic": {"rows": 50, "target_model": "linear:0:5,0"}}
  })"),
                                      "");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->roar.quantiles, (std::vector<double>{0.5, 1.0}));
  EXPECT_EQ(config->roar.replicates, 2);
  EXPECT_FALSE(RoarJobConfigFromJson(json::parse(R"({"methods": "shapley",
      "quantiles": [0.0], "dataset": {"synthetic": {}}})"),
                                     "")
                   .ok());
}

}  // namespace
}  // namespace abc_bench
