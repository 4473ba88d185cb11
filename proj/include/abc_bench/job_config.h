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

// Validated experiment and ROAR job descriptions. Input paths inside a
// config file are resolved against the file's directory; output_dir is
// taken relative to the working directory.

#ifndef ABC_BENCH_JOB_CONFIG_H_
#define ABC_BENCH_JOB_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abc_bench/attribution.h"
#include "abc_bench/curve_metrics.h"
#include "abc_bench/dataset.h"
#include "abc_bench/model.h"
#include "abc_bench/policy.h"
#include "abc_bench/roar.h"
#include "abc_bench/synthetic.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace abc_bench {

// Either a CSV file with a schema or an in-memory synthetic table.
//
//   [dataset]                     [dataset.synthetic]
//   path = "data.csv"             rows = 2000, continuous = 2, binary = 0
//   schema = "data.schema.json"   noise = 0.1, seed = 3
//   normalize = true              target_model = "linear:0:5,0"
//   train_fraction = 0.8
//   split_seed = 1
struct DatasetConfig {
  std::string path;
  std::optional<Schema> schema;
  // Overrides the schema's flag when set.
  std::optional<bool> normalize;
  double train_fraction = 0.8;
  std::optional<std::uint64_t> split_seed;
  std::optional<SyntheticDataSpec> synthetic;
  // Model generating synthetic targets (string or object spec).
  nlohmann::json synthetic_target;
  std::string base_dir;
};

absl::StatusOr<DatasetConfig> DatasetConfigFromJson(const nlohmann::json& value,
                                                    const std::string& path,
                                                    const std::string& base_dir);

// Loads or generates the data, normalizes and splits it. The split seed
// defaults to `seed`.
absl::StatusOr<Dataset> LoadDataset(const DatasetConfig& config,
                                    std::uint64_t seed);

// A compact spec string, a JSON model object, or {"file": "model.json"}.
absl::StatusOr<ModelHandle> BuildModel(const nlohmann::json& value,
                                       const FeatureSpace& space,
                                       const std::string& base_dir,
                                       const std::string& path = "model");

// A policy name or a table {name, min_diff_features, knn, seed}.
absl::StatusOr<PolicySpec> PolicySpecFromJson(const nlohmann::json& value,
                                              const std::string& path,
                                              std::uint64_t default_seed);

struct ExperimentConfig {
  DatasetConfig dataset;
  nlohmann::json model;
  PolicySpec policy;
  std::vector<MethodSpec> methods;
  std::vector<CurveMode> modes = {CurveMode::kInsertion, CurveMode::kDeletion};
  // (first, second) method labels; rows report first - second.
  std::vector<std::pair<std::string, std::string>> differences;
  std::uint64_t seed = 0;
  std::string output_dir;
  // Pairs evaluated (0 = every test row).
  int max_pairs = 100;
  bool write_curves = false;
  // 0 = DefaultThreadCount().
  int threads = 0;
};

absl::StatusOr<ExperimentConfig> ExperimentConfigFromJson(
    const nlohmann::json& value, const std::string& base_dir);

struct RoarJobConfig {
  DatasetConfig dataset;
  std::vector<MethodSpec> methods;
  RoarConfig roar;
  double ridge_lambda = 1e-3;
  std::string output_dir;
};

absl::StatusOr<RoarJobConfig> RoarJobConfigFromJson(const nlohmann::json& value,
                                                    const std::string& base_dir);

}  // namespace abc_bench

#endif  // ABC_BENCH_JOB_CONFIG_H_
