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

// Insertion and deletion trajectories between a target x and a reference
// x_ref, and the areas computed from them.
//
// A trajectory changes the coordinates of x to those of x_ref one feature at
// a time in the given order, evaluating f at the n+1 visited points. With
// values v_0 = f(x), ..., v_n = f(x_ref):
//
//   AUC = sum_{j=0}^{n} v_j
//   AUL = (n + 1) / 2 * (v_0 + v_n)
//   ABC = AUC - AUL   (insertion)      ABC' = AUL - AUC   (deletion)
//
// AUL does not depend on the ordering, so ABC ranks orderings exactly as AUC.

#ifndef ABC_BENCH_CURVE_METRICS_H_
#define ABC_BENCH_CURVE_METRICS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "abc_bench/feature_space.h"
#include "abc_bench/model.h"
#include "absl/status/statusor.h"

namespace abc_bench {

// Permutation of 0-indexed features; perm[k] is changed at step k + 1.
struct Ordering {
  std::vector<int> perm;
  std::string source;
};

absl::StatusOr<Ordering> MakeOrdering(std::vector<int> perm,
                                      std::string source);

// Descending by score; equal scores keep ascending feature index.
Ordering InsertionOrderFromScores(std::span<const double> scores,
                                  std::string source);
// Reverse of InsertionOrderFromScores, i.e. ascending by score with equal
// scores in descending feature index.
Ordering DeletionOrderFromScores(std::span<const double> scores,
                                 std::string source);

enum class CurveMode { kInsertion, kDeletion };

std::string CurveModeName(CurveMode mode);

struct TrajectoryReport {
  CurveMode mode = CurveMode::kInsertion;
  Ordering ordering;
  std::vector<double> values;  // n + 1 entries
  double auc = 0.0;
  double aul = 0.0;
  double abc = 0.0;
  // Trapezoid-rule area, AUC - (v_0 + v_n) / 2; for plotting only.
  double trapezoid_auc = 0.0;

  int n() const { return static_cast<int>(values.size()) - 1; }
  double abc_per_feature() const { return n() > 0 ? abc / n() : 0.0; }
};

// Computes AUC/AUL/ABC from a finished set of curve values.
TrajectoryReport MakeTrajectoryReport(CurveMode mode, Ordering ordering,
                                      std::vector<double> values);

absl::StatusOr<TrajectoryReport> InsertionCurve(const Model& model,
                                                const Point& x,
                                                const Point& x_ref,
                                                const Ordering& order);
absl::StatusOr<TrajectoryReport> DeletionCurve(const Model& model,
                                               const Point& x,
                                               const Point& x_ref,
                                               const Ordering& order);

// f at every hybrid corner: values[w] = f(x_ref_w : x_{-w}).
absl::StatusOr<std::vector<double>> CornerValues(const Model& model,
                                                 const Point& x,
                                                 const Point& x_ref);

// AUC of an ordering read off a corner table (no model calls).
double AucFromCorners(std::span<const double> corners,
                      std::span<const int> perm);

struct RandomOrderSummary {
  double mean_abc_insertion = 0.0;
  double mean_abc_deletion = 0.0;
  // Mean over orderings pi of ABC(pi) + ABC'(reverse(pi)).
  double mean_sum = 0.0;
  std::int64_t orderings = 0;
  bool exhaustive = false;
};

// Largest n for which RandomOrderBaseline enumerates all n! orderings.
inline constexpr int kExhaustiveBaselineFeatures = 8;

// Insertion along pi and deletion along reverse(pi) for random pi. With
// n <= kExhaustiveBaselineFeatures every ordering is visited once and
// `trials` and `seed` are ignored.
absl::StatusOr<RandomOrderSummary> RandomOrderBaseline(const Model& model,
                                                       const Point& x,
                                                       const Point& x_ref,
                                                       int trials,
                                                       std::uint64_t seed);

// Ordering with the largest insertion ABC (kInsertion) or the largest
// deletion ABC' (kDeletion) among all n! orderings, n <= 10. Ties go to the
// lexicographically smallest permutation.
absl::StatusOr<Ordering> BestOrderExhaustive(const Model& model,
                                             const Point& x,
                                             const Point& x_ref,
                                             CurveMode mode);

// "step,feature_changed,value" with 1-indexed features; step 0 has an empty
// feature column.
void WriteTrajectoryCsv(const TrajectoryReport& report, std::ostream& out);

}  // namespace abc_bench

#endif  // ABC_BENCH_CURVE_METRICS_H_
