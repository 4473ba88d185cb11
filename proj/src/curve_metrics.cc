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

#include "abc_bench/curve_metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "abc_bench/format.h"
#include "absl/strings/str_cat.h"

namespace abc_bench {
namespace {

absl::Status CheckPair(const Model& model, const Point& x, const Point& x_ref,
                       const Ordering& order) {
  const int n = model.num_features();
  if (x.size() != n || x_ref.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("points must have ", n, " coordinates"));
  }
  if (static_cast<int>(order.perm.size()) != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ordering has ", order.perm.size(), " entries, expected ", n));
  }
  if (auto checked = MakeOrdering(order.perm, ""); !checked.ok()) {
    return checked.status();
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> EvaluatePath(const Model& model,
                                                 const Point& x,
                                                 const Point& x_ref,
                                                 std::span<const int> perm) {
  std::vector<Point> path;
  path.reserve(perm.size() + 1);
  path.push_back(x);
  for (int j : perm) {
    Point next = path.back();
    next[j] = x_ref[j];
    path.push_back(std::move(next));
  }
  return model.Predict(path);
}

// Visits every permutation of 0..n-1 in lexicographic order.
template <typename Fn>
void ForEachPermutation(int n, Fn&& fn) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    fn(std::span<const int>(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

absl::StatusOr<Ordering> MakeOrdering(std::vector<int> perm,
                                      std::string source) {
  std::vector<bool> seen(perm.size(), false);
  for (int j : perm) {
    if (j < 0 || j >= static_cast<int>(perm.size()) || seen[j]) {
      return absl::InvalidArgumentError("ordering is not a permutation");
    }
    seen[j] = true;
  }
  return Ordering{std::move(perm), std::move(source)};
}

Ordering InsertionOrderFromScores(std::span<const double> scores,
                                  std::string source) {
  std::vector<int> perm(scores.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return Ordering{std::move(perm), std::move(source)};
}

Ordering DeletionOrderFromScores(std::span<const double> scores,
                                 std::string source) {
  Ordering order = InsertionOrderFromScores(scores, std::move(source));
  std::reverse(order.perm.begin(), order.perm.end());
  return order;
}

std::string CurveModeName(CurveMode mode) {
  return mode == CurveMode::kInsertion ? "insertion" : "deletion";
}

TrajectoryReport MakeTrajectoryReport(CurveMode mode, Ordering ordering,
                                      std::vector<double> values) {
  TrajectoryReport report;
  report.mode = mode;
  report.ordering = std::move(ordering);
  report.values = std::move(values);
  const int n = report.n();
  report.auc = std::accumulate(report.values.begin(), report.values.end(), 0.0);
  report.aul = 0.5 * (n + 1) * (report.values.front() + report.values.back());
  report.abc = mode == CurveMode::kInsertion ? report.auc - report.aul
                                             : report.aul - report.auc;
  report.trapezoid_auc =
      report.auc - 0.5 * (report.values.front() + report.values.back());
  return report;
}

absl::StatusOr<TrajectoryReport> InsertionCurve(const Model& model,
                                                const Point& x,
                                                const Point& x_ref,
                                                const Ordering& order) {
  if (auto s = CheckPair(model, x, x_ref, order); !s.ok()) return s;
  auto values = EvaluatePath(model, x, x_ref, order.perm);
  if (!values.ok()) return values.status();
  return MakeTrajectoryReport(CurveMode::kInsertion, order, *std::move(values));
}

absl::StatusOr<TrajectoryReport> DeletionCurve(const Model& model,
                                               const Point& x,
                                               const Point& x_ref,
                                               const Ordering& order) {
  if (auto s = CheckPair(model, x, x_ref, order); !s.ok()) return s;
  auto values = EvaluatePath(model, x, x_ref, order.perm);
  if (!values.ok()) return values.status();
  return MakeTrajectoryReport(CurveMode::kDeletion, order, *std::move(values));
}

absl::StatusOr<std::vector<double>> CornerValues(const Model& model,
                                                 const Point& x,
                                                 const Point& x_ref) {
  const int n = model.num_features();
  if (x.size() != n || x_ref.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("points must have ", n, " coordinates"));
  }
  if (n > kMaxSubsetFeatures) {
    return absl::InvalidArgumentError(absl::StrCat(
        "corner table needs 2^n evaluations; n=", n, " exceeds the cap"));
  }
  std::vector<Point> corners(std::size_t{1} << n, x);
  for (std::size_t w = 0; w < corners.size(); ++w) {
    AssembleHybridInto(x, x_ref, SubsetMask(static_cast<std::uint32_t>(w)),
                       &corners[w]);
  }
  return model.Predict(corners);
}

double AucFromCorners(std::span<const double> corners,
                      std::span<const int> perm) {
  std::uint32_t mask = 0;
  double auc = corners[0];
  for (int j : perm) {
    mask |= 1u << j;
    auc += corners[mask];
  }
  return auc;
}

absl::StatusOr<RandomOrderSummary> RandomOrderBaseline(const Model& model,
                                                       const Point& x,
                                                       const Point& x_ref,
                                                       int trials,
                                                       std::uint64_t seed) {
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  const int n = model.num_features();
  RandomOrderSummary summary;
  double sum_ins = 0.0;
  double sum_del = 0.0;
  double sum_both = 0.0;

  if (n <= kExhaustiveBaselineFeatures) {
    auto corners = CornerValues(model, x, x_ref);
    if (!corners.ok()) return corners.status();
    const double aul = 0.5 * (n + 1) * ((*corners)[0] + corners->back());
    std::vector<int> reversed(n);
    ForEachPermutation(n, [&](std::span<const int> perm) {
      std::reverse_copy(perm.begin(), perm.end(), reversed.begin());
      const double abc = AucFromCorners(*corners, perm) - aul;
      const double abc_del = aul - AucFromCorners(*corners, reversed);
      sum_ins += abc;
      sum_del += abc_del;
      sum_both += abc + abc_del;
      ++summary.orderings;
    });
    summary.exhaustive = true;
  } else {
    std::mt19937_64 rng(seed);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int t = 0; t < trials; ++t) {
      std::shuffle(perm.begin(), perm.end(), rng);
      Ordering forward{perm, "random"};
      Ordering backward{std::vector<int>(perm.rbegin(), perm.rend()), "random"};
      auto ins = InsertionCurve(model, x, x_ref, forward);
      if (!ins.ok()) return ins.status();
      auto del = DeletionCurve(model, x, x_ref, backward);
      if (!del.ok()) return del.status();
      sum_ins += ins->abc;
      sum_del += del->abc;
      sum_both += ins->abc + del->abc;
      ++summary.orderings;
    }
  }
  const double count = static_cast<double>(summary.orderings);
  summary.mean_abc_insertion = sum_ins / count;
  summary.mean_abc_deletion = sum_del / count;
  summary.mean_sum = sum_both / count;
  return summary;
}

absl::StatusOr<Ordering> BestOrderExhaustive(const Model& model,
                                             const Point& x,
                                             const Point& x_ref,
                                             CurveMode mode) {
  const int n = model.num_features();
  if (n > kMaxExhaustiveOrderFeatures) {
    return absl::InvalidArgumentError(
        absl::StrCat("exhaustive order search supports n <= ",
                     kMaxExhaustiveOrderFeatures, "; got n=", n));
  }
  auto corners = CornerValues(model, x, x_ref);
  if (!corners.ok()) return corners.status();
  double scale = 0.0;
  for (double v : *corners) scale = std::max(scale, std::abs(v));
  // Sums over different orders can differ by rounding alone; treat those as
  // ties so the lexicographic rule decides.
  const double tie = 1e-12 * (n + 1) * std::max(1.0, scale);
  const double sign = mode == CurveMode::kInsertion ? 1.0 : -1.0;
  std::vector<int> best;
  double best_value = 0.0;
  ForEachPermutation(n, [&](std::span<const int> perm) {
    const double value = sign * AucFromCorners(*corners, perm);
    if (best.empty() || value > best_value + tie) {
      best.assign(perm.begin(), perm.end());
      best_value = value;
    }
  });
  return Ordering{std::move(best), "best-exhaustive"};
}

void WriteTrajectoryCsv(const TrajectoryReport& report, std::ostream& out) {
  out << "step,feature_changed,value\n";
  for (int step = 0; step <= report.n(); ++step) {
    out << step << ",";
    if (step > 0) out << report.ordering.perm[step - 1] + 1;
    out << "," << FormatDouble(report.values[step]) << "\n";
  }
}

}  // namespace abc_bench
