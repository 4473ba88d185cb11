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

#include "abc_bench/roar.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "abc_bench/format.h"
#include "abc_bench/parallel.h"
#include "abc_bench/policy.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace abc_bench {
namespace {

// Number of features removed at quantile q. The epsilon keeps q * n that is
// an integer up to rounding from spilling into the next feature.
int RemovedCount(double q, int n) {
  return std::clamp(static_cast<int>(std::ceil(q * n - 1e-9)), 0, n);
}

// Training mean for continuous features, training mode for binary ones
// (ties go to 0).
std::vector<double> FillValues(const Dataset& ds) {
  const int n = ds.num_features();
  std::vector<double> fill(n, 0.0);
  for (int r : ds.train()) {
    for (int j = 0; j < n; ++j) fill[j] += ds.row(r)[j];
  }
  const double count = static_cast<double>(ds.train().size());
  for (int j = 0; j < n; ++j) {
    fill[j] /= count;
    if (ds.space().is_binary(j)) fill[j] = fill[j] > 0.5 ? 1.0 : 0.0;
  }
  return fill;
}

struct SplitData {
  std::vector<Point> train_rows;
  std::vector<double> train_targets;
  std::vector<Point> test_rows;
  std::vector<double> test_targets;
};

SplitData Degrade(const Dataset& ds, std::span<const int> removed,
                  std::span<const double> fill) {
  SplitData out;
  auto copy = [&](const std::vector<int>& index, std::vector<Point>* rows,
                  std::vector<double>* targets) {
    rows->reserve(index.size());
    targets->reserve(index.size());
    for (int r : index) {
      Point p = ds.row(r);
      for (int j : removed) p[j] = fill[j];
      rows->push_back(std::move(p));
      targets->push_back(ds.targets()[r]);
    }
  };
  copy(ds.train(), &out.train_rows, &out.train_targets);
  copy(ds.test(), &out.test_rows, &out.test_targets);
  return out;
}

absl::StatusOr<double> FitAndScore(const Trainer& trainer,
                                   const FeatureSpace& space,
                                   const SplitData& data, std::uint64_t seed,
                                   double delta, ModelHandle* fitted = nullptr) {
  auto model = trainer.Fit(space, data.train_rows, data.train_targets, seed);
  if (!model.ok()) return model.status();
  auto predictions = (*model)->Predict(data.test_rows);
  if (!predictions.ok()) return predictions.status();
  if (fitted != nullptr) *fitted = *model;
  return HuberLoss(*predictions, data.test_targets, delta);
}

}  // namespace

absl::StatusOr<ModelHandle> RidgeTrainer::Fit(const FeatureSpace& space,
                                              std::span<const Point> rows,
                                              std::span<const double> targets,
                                              std::uint64_t /*seed*/) const {
  const int n = space.size();
  if (rows.empty() || rows.size() != targets.size()) {
    return absl::InvalidArgumentError(
        "ridge needs a non-empty training set with one target per row");
  }
  if (!(lambda_ > 0.0)) {
    return absl::InvalidArgumentError("ridge lambda must be positive");
  }
  const double count = static_cast<double>(rows.size());
  Eigen::VectorXd mean_x = Eigen::VectorXd::Zero(n);
  double mean_y = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < n; ++j) mean_x[j] += rows[i][j];
    mean_y += targets[i];
  }
  mean_x /= count;
  mean_y /= count;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd centered(n);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < n; ++j) centered[j] = rows[i][j] - mean_x[j];
    gram.selfadjointView<Eigen::Lower>().rankUpdate(centered);
    rhs += (targets[i] - mean_y) * centered;
  }
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  gram.diagonal().array() += lambda_;
  const Eigen::VectorXd beta = gram.ldlt().solve(rhs);
  if (!beta.allFinite()) {
    return absl::InternalError("ridge solve produced non-finite coefficients");
  }
  std::vector<double> coefficients(beta.data(), beta.data() + n);
  const double intercept = mean_y - mean_x.dot(beta);
  return LinearModel::Create(space, intercept, std::move(coefficients));
}

absl::StatusOr<RankingMode> ParseRankingMode(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(std::string(name));
  if (lower == "signed") return RankingMode::kSigned;
  if (lower == "absolute") return RankingMode::kAbsolute;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown ranking mode \"", std::string(name),
      "\" (expected signed, absolute)"));
}

std::string RankingModeName(RankingMode mode) {
  return mode == RankingMode::kSigned ? "signed" : "absolute";
}

absl::StatusOr<std::vector<int>> RankFeaturesGlobal(
    std::span<const AttributionVector> attributions, RankingMode mode) {
  if (attributions.empty()) {
    return absl::InvalidArgumentError("no attributions to rank");
  }
  const size_t n = attributions[0].scores.size();
  std::vector<double> rank_sum(n, 0.0);
  std::vector<int> order(n);
  std::vector<double> key(n);
  for (const AttributionVector& a : attributions) {
    if (a.scores.size() != n) {
      return absl::InvalidArgumentError(
          "attributions have different feature counts");
    }
    for (size_t j = 0; j < n; ++j) {
      key[j] = mode == RankingMode::kAbsolute ? std::abs(a.scores[j])
                                              : a.scores[j];
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return key[x] > key[y]; });
    for (size_t r = 0; r < n; ++r) rank_sum[order[r]] += r + 1;
  }
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return rank_sum[x] < rank_sum[y]; });
  return order;
}

double HuberLoss(std::span<const double> predictions,
                 std::span<const double> targets, double delta) {
  double total = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double r = std::abs(predictions[i] - targets[i]);
    total += r <= delta ? 0.5 * r * r : delta * (r - 0.5 * delta);
  }
  return predictions.empty() ? 0.0 : total / predictions.size();
}

RoarMethod RoarMethodFromSpec(const MethodSpec& spec) {
  return RoarMethod{spec.label,
                    [spec](const Model& model, const Point& x,
                           const Point& x_ref, std::uint64_t seed) {
                      return ComputeAttribution(spec, model, x, x_ref, seed);
                    }};
}

RoarMethod FixedScoreMethod(std::string name, std::vector<double> scores) {
  return RoarMethod{
      name, [name, scores](const Model& model, const Point&, const Point&,
                           std::uint64_t) -> absl::StatusOr<AttributionVector> {
        if (static_cast<int>(scores.size()) != model.num_features()) {
          return absl::InvalidArgumentError(absl::StrCat(
              name, ": expected ", model.num_features(), " scores"));
        }
        return AttributionVector{name, scores, {}};
      }};
}

std::vector<RoarSummaryRow> RoarReport::Summary() const {
  std::vector<RoarSummaryRow> rows;
  std::vector<std::vector<double>> losses;
  for (const RoarCell& c : cells) {
    size_t k = 0;
    while (k < rows.size() &&
           !(rows[k].method == c.method && rows[k].ranking == c.ranking &&
             rows[k].quantile == c.quantile)) {
      ++k;
    }
    if (k == rows.size()) {
      rows.push_back({c.method, c.ranking, c.quantile, 0.0, 0.0, 0});
      losses.emplace_back();
    }
    losses[k].push_back(c.loss);
  }
  for (size_t k = 0; k < rows.size(); ++k) {
    const auto& v = losses[k];
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    rows[k].mean_loss = m;
    rows[k].replicates = static_cast<int>(v.size());
    rows[k].standard_error =
        v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) / std::sqrt(v.size())
                     : 0.0;
  }
  return rows;
}

double RoarReport::MeanLoss(const std::string& method, RankingMode ranking,
                            double quantile) const {
  for (const RoarSummaryRow& row : Summary()) {
    if (row.method == method && row.ranking == ranking &&
        row.quantile == quantile) {
      return row.mean_loss;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double RoarReport::MeanBaseLoss() const {
  if (base_losses.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(base_losses.begin(), base_losses.end(), 0.0) /
         base_losses.size();
}

absl::StatusOr<RoarReport> RoarRun(const Dataset& ds, const Trainer& trainer,
                                   std::span<const RoarMethod> methods,
                                   const RoarConfig& config) {
  if (!ds.has_targets()) {
    return absl::InvalidArgumentError("ROAR needs a dataset with targets");
  }
  if (ds.train().empty() || ds.test().empty()) {
    return absl::InvalidArgumentError(
        "ROAR needs non-empty training and test splits");
  }
  if (methods.empty()) return absl::InvalidArgumentError("no ROAR methods");
  if (config.quantiles.empty() || config.rankings.empty()) {
    return absl::InvalidArgumentError("ROAR needs quantiles and rankings");
  }
  for (double q : config.quantiles) {
    if (!(q > 0.0 && q <= 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("quantile ", q, " is outside (0, 1]"));
    }
  }
  if (config.replicates < 1) {
    return absl::InvalidArgumentError("replicates must be >= 1");
  }
  const int n = ds.num_features();
  const std::vector<double> fill = FillValues(ds);
  auto reference = AverageReference(ds, ds.train());
  if (!reference.ok()) return reference.status();
  std::vector<int> instances = ds.train();
  if (config.max_instances > 0 &&
      static_cast<int>(instances.size()) > config.max_instances) {
    instances.resize(config.max_instances);
  }

  RoarReport report;
  report.quantiles = config.quantiles;
  report.replicates = config.replicates;
  report.trainer = trainer.name();
  const SplitData intact = Degrade(ds, {}, fill);

  for (int rep = 0; rep < config.replicates; ++rep) {
    const std::uint64_t rep_seed = DeriveSeed(config.seed, {std::uint64_t(rep)});
    ModelHandle base_model;
    auto base_loss = FitAndScore(trainer, ds.space(), intact, rep_seed,
                                 config.huber_delta, &base_model);
    if (!base_loss.ok()) return base_loss.status();
    report.base_losses.push_back(*base_loss);

    // Rankings for every (method, mode).
    std::vector<RoarRanking> rankings;
    for (size_t m = 0; m < methods.size(); ++m) {
      std::vector<absl::StatusOr<AttributionVector>> attributions(
          instances.size(), absl::UnknownError(""));
      ParallelFor(instances.size(), config.threads, [&](size_t i) {
        attributions[i] = methods[m].attribute(
            *base_model, ds.row(instances[i]), *reference,
            DeriveSeed(rep_seed, {m, i}));
      });
      std::vector<AttributionVector> ok;
      for (auto& a : attributions) {
        if (!a.ok()) {
          return absl::Status(
              a.status().code(),
              absl::StrCat(methods[m].name, ": ", a.status().message()));
        }
        ok.push_back(*std::move(a));
      }
      for (RankingMode mode : config.rankings) {
        auto order = RankFeaturesGlobal(ok, mode);
        if (!order.ok()) return order.status();
        rankings.push_back({methods[m].name, mode, rep, *std::move(order)});
      }
    }

    // One refit per (ranking, quantile) cell.
    const size_t cell_count = rankings.size() * config.quantiles.size();
    std::vector<absl::StatusOr<double>> losses(cell_count,
                                               absl::UnknownError(""));
    ParallelFor(cell_count, config.threads, [&](size_t c) {
      const RoarRanking& ranking = rankings[c / config.quantiles.size()];
      const double q = config.quantiles[c % config.quantiles.size()];
      const int k = RemovedCount(q, n);
      const SplitData data = Degrade(
          ds, std::span<const int>(ranking.order).subspan(0, k), fill);
      losses[c] = FitAndScore(trainer, ds.space(), data, rep_seed,
                              config.huber_delta);
    });
    for (size_t c = 0; c < cell_count; ++c) {
      if (!losses[c].ok()) return losses[c].status();
      const RoarRanking& ranking = rankings[c / config.quantiles.size()];
      report.cells.push_back({ranking.method, ranking.ranking,
                              config.quantiles[c % config.quantiles.size()],
                              rep, *losses[c]});
    }
    for (auto& r : rankings) report.rankings.push_back(std::move(r));
  }
  return report;
}

void WriteRoarCsv(const RoarReport& report, std::ostream& out) {
  out << "method,ranking_mode,quantile,replicate,loss\n";
  for (size_t r = 0; r < report.base_losses.size(); ++r) {
    out << "none,none,0," << r << "," << FormatDouble(report.base_losses[r])
        << "\n";
  }
  for (const RoarCell& c : report.cells) {
    out << CsvField(c.method) << "," << RankingModeName(c.ranking) << ","
        << FormatDouble(c.quantile) << "," << c.replicate << ","
        << FormatDouble(c.loss) << "\n";
  }
}

nlohmann::json RoarSummaryJson(const RoarReport& report) {
  nlohmann::json out;
  out["trainer"] = report.trainer;
  out["replicates"] = report.replicates;
  out["quantiles"] = report.quantiles;
  out["base_loss"] = report.MeanBaseLoss();
  out["base_losses"] = report.base_losses;
  nlohmann::json rows = nlohmann::json::array();
  for (const RoarSummaryRow& row : report.Summary()) {
    rows.push_back({{"method", row.method},
                    {"ranking_mode", RankingModeName(row.ranking)},
                    {"quantile", row.quantile},
                    {"mean_loss", row.mean_loss},
                    {"degradation", row.mean_loss - report.MeanBaseLoss()},
                    {"standard_error", row.standard_error},
                    {"replicates", row.replicates}});
  }
  out["rows"] = std::move(rows);
  nlohmann::json rankings = nlohmann::json::array();
  for (const RoarRanking& r : report.rankings) {
    std::vector<int> one_based;
    for (int j : r.order) one_based.push_back(j + 1);
    rankings.push_back({{"method", r.method},
                        {"ranking_mode", RankingModeName(r.ranking)},
                        {"replicate", r.replicate},
                        {"order", one_based}});
  }
  out["rankings"] = std::move(rankings);
  return out;
}

}  // namespace abc_bench
