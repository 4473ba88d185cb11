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

// Remove-and-retrain: the globally top-ranked features are overwritten with
// uninformative values in both splits, the model is refit and the held-out
// loss is recorded for each removal quantile.

#ifndef ABC_BENCH_ROAR_H_
#define ABC_BENCH_ROAR_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "abc_bench/attribution.h"
#include "abc_bench/dataset.h"
#include "abc_bench/model.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace abc_bench {

class Trainer {
 public:
  virtual ~Trainer() = default;
  virtual std::string name() const = 0;
  // Must be deterministic given the inputs and seed.
  virtual absl::StatusOr<ModelHandle> Fit(const FeatureSpace& space,
                                          std::span<const Point> rows,
                                          std::span<const double> targets,
                                          std::uint64_t seed) const = 0;
};

// Closed-form ridge regression with an unpenalized intercept:
// beta = (Xc^T Xc + lambda I)^{-1} Xc^T yc on centered data.
class RidgeTrainer : public Trainer {
 public:
  explicit RidgeTrainer(double lambda = 1e-3) : lambda_(lambda) {}
  std::string name() const override { return "ridge"; }
  absl::StatusOr<ModelHandle> Fit(const FeatureSpace& space,
                                  std::span<const Point> rows,
                                  std::span<const double> targets,
                                  std::uint64_t seed) const override;

 private:
  double lambda_;
};

enum class RankingMode { kSigned, kAbsolute };

absl::StatusOr<RankingMode> ParseRankingMode(std::string_view name);
std::string RankingModeName(RankingMode mode);

// Each instance ranks its features (1 = largest score, or largest |score| in
// absolute mode; equal scores by index). Features are returned in ascending
// order of mean rank, ties by index.
absl::StatusOr<std::vector<int>> RankFeaturesGlobal(
    std::span<const AttributionVector> attributions, RankingMode mode);

// Mean Huber loss with threshold delta.
double HuberLoss(std::span<const double> predictions,
                 std::span<const double> targets, double delta = 1.0);

// Attribution source for ROAR. Called with the model fit on the original
// data, a training instance, the training-mean reference and a seed.
struct RoarMethod {
  std::string name;
  std::function<absl::StatusOr<AttributionVector>(
      const Model&, const Point&, const Point&, std::uint64_t)>
      attribute;
};

RoarMethod RoarMethodFromSpec(const MethodSpec& spec);
// Returns the same scores for every instance; for controlled rankings.
RoarMethod FixedScoreMethod(std::string name, std::vector<double> scores);

struct RoarConfig {
  std::vector<double> quantiles = {0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
  std::vector<RankingMode> rankings = {RankingMode::kSigned,
                                       RankingMode::kAbsolute};
  int replicates = 1;
  std::uint64_t seed = 0;
  // Training instances attributed per method (0 = all).
  int max_instances = 200;
  double huber_delta = 1.0;
  int threads = 1;
};

struct RoarCell {
  std::string method;
  RankingMode ranking = RankingMode::kSigned;
  double quantile = 0.0;
  int replicate = 0;
  double loss = 0.0;
};

struct RoarSummaryRow {
  std::string method;
  RankingMode ranking = RankingMode::kSigned;
  double quantile = 0.0;
  double mean_loss = 0.0;
  double standard_error = 0.0;
  int replicates = 0;
};

struct RoarRanking {
  std::string method;
  RankingMode ranking = RankingMode::kSigned;
  int replicate = 0;
  std::vector<int> order;
};

struct RoarReport {
  std::vector<double> quantiles;
  int replicates = 0;
  std::string trainer;
  // Held-out loss of the model fit on intact data, per replicate.
  std::vector<double> base_losses;
  std::vector<RoarRanking> rankings;
  std::vector<RoarCell> cells;

  // Aggregated over replicates, in cell order.
  std::vector<RoarSummaryRow> Summary() const;
  // Mean loss of one (method, ranking, quantile) cell; NaN when absent.
  double MeanLoss(const std::string& method, RankingMode ranking,
                  double quantile) const;
  double MeanBaseLoss() const;
};

// Needs targets and a non-empty train/test split. Quantiles must lie in
// (0, 1]; q removes the top ceil(q * n) features.
absl::StatusOr<RoarReport> RoarRun(const Dataset& ds, const Trainer& trainer,
                                   std::span<const RoarMethod> methods,
                                   const RoarConfig& config);

// "method,ranking_mode,quantile,replicate,loss"; quantile 0 rows carry the
// intact-data loss under method "none".
void WriteRoarCsv(const RoarReport& report, std::ostream& out);
nlohmann::json RoarSummaryJson(const RoarReport& report);

}  // namespace abc_bench

#endif  // ABC_BENCH_ROAR_H_
