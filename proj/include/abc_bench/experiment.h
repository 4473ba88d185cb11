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

// Multi-method comparison: every (pair, method) gets an attribution, an
// insertion curve along the descending order of the scores and a deletion
// curve along its reverse. Results are aggregated into mean ABC +- standard
// error tables, paired difference rows and insertion/deletion correlations.

#ifndef ABC_BENCH_EXPERIMENT_H_
#define ABC_BENCH_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "abc_bench/attribution.h"
#include "abc_bench/curve_metrics.h"
#include "abc_bench/job_config.h"
#include "abc_bench/model.h"
#include "abc_bench/policy.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace abc_bench {

struct PairRecord {
  int pair_index = 0;
  int target_row = -1;
  std::optional<int> reference_row;
  int method_index = 0;
  std::string method;
  bool ok = false;
  std::string error;
  // NaN for a mode that was not requested.
  double abc_insertion = 0.0;
  double abc_deletion = 0.0;
  double auc_insertion = 0.0;
  double auc_deletion = 0.0;
  double aul = 0.0;
  int differing = 0;
  int differing_binary = 0;
  // Model evaluations reported by the method, when it reports them.
  std::optional<double> evaluations;
  std::vector<double> scores;
  std::vector<int> insertion_order;
  // Kept only when curves are written.
  std::vector<double> insertion_values;
  std::vector<double> deletion_values;
};

struct TableRow {
  CurveMode mode = CurveMode::kInsertion;
  std::string method;
  double mean = 0.0;
  double standard_error = 0.0;
  int count = 0;
  std::optional<double> mean_evaluations;
};

struct DifferenceRow {
  CurveMode mode = CurveMode::kInsertion;
  std::string first;
  std::string second;
  // Over pairs where both methods succeeded.
  double mean = 0.0;
  double paired_standard_error = 0.0;
  // sqrt(SE_first^2 + SE_second^2), ignoring the pairing.
  double unpaired_standard_error = 0.0;
  double mean_first = 0.0;
  double mean_second = 0.0;
  int count = 0;
};

struct ComparisonTable {
  std::vector<TableRow> rows;
  std::vector<DifferenceRow> differences;
};

struct CorrelationRow {
  std::string method;
  // Pearson correlation of insertion and deletion ABC; NaN if undefined.
  double pearson = 0.0;
  int count = 0;
};

struct AsymmetryStats {
  std::string policy;
  int pairs = 0;
  double mean_differing = 0.0;
  double mean_differing_binary = 0.0;
  std::vector<CorrelationRow> correlations;
};

struct ExperimentResult {
  PairSet pairs;
  std::vector<std::string> methods;
  std::vector<CurveMode> modes;
  // pair-major, method-minor.
  std::vector<PairRecord> records;
  ComparisonTable table;
  AsymmetryStats asymmetry;
  // Failed (pair, method) cells per method, in method order.
  std::vector<int> failures;
  std::string model_description;
  std::uint64_t seed = 0;
};

struct ComparisonOptions {
  std::vector<CurveMode> modes = {CurveMode::kInsertion, CurveMode::kDeletion};
  std::vector<std::pair<std::string, std::string>> differences;
  std::uint64_t seed = 0;
  int threads = 1;
  bool keep_curves = false;
};

// Runs every method on every pair. Per-cell failures are recorded.
ExperimentResult RunComparison(const Model& model, const PairSet& pairs,
                               std::span<const MethodSpec> methods,
                               const ComparisonOptions& options);

// Loads data and model, builds pairs on the test split and runs the
// comparison. Pairs use test rows as targets; references come from the test
// split, except the average policy, which averages the training split.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config);

ComparisonTable BuildComparisonTable(
    std::span<const PairRecord> records, std::span<const std::string> methods,
    std::span<const CurveMode> modes,
    std::span<const std::pair<std::string, std::string>> differences);

AsymmetryStats ComputeAsymmetryStats(std::span<const PairRecord> records,
                                     std::span<const std::string> methods,
                                     const std::string& policy);

// Sample mean and standard error (sample std / sqrt(count)).
std::pair<double, double> MeanAndStandardError(std::span<const double> values);
double PearsonCorrelation(std::span<const double> a, std::span<const double> b);

nlohmann::json SummaryJson(const ExperimentResult& result);
void WritePairsCsv(const ExperimentResult& result, std::ostream& out);
// summary.json, pairs.csv, pair_set.csv and, with curves, curves/*.csv.
absl::Status WriteExperimentOutputs(const ExperimentResult& result,
                                    const std::string& output_dir,
                                    bool write_curves);
void PrintSummary(const ExperimentResult& result, std::ostream& out);

}  // namespace abc_bench

#endif  // ABC_BENCH_EXPERIMENT_H_
