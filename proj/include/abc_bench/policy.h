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

// Reference-point policies: how the x_ref paired with each target x is
// chosen from a pool of dataset rows.

#ifndef ABC_BENCH_POLICY_H_
#define ABC_BENCH_POLICY_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "abc_bench/dataset.h"
#include "abc_bench/feature_space.h"
#include "abc_bench/model.h"
#include "absl/status/statusor.h"

namespace abc_bench {

enum class PolicyKind { kCounterfactual, kOneToOne, kAverage };

absl::StatusOr<PolicyKind> ParsePolicyKind(std::string_view name);
std::string PolicyKindName(PolicyKind kind);

struct PolicySpec {
  PolicyKind kind = PolicyKind::kCounterfactual;
  // Counterfactual: candidates must differ from x in at least this many
  // coordinates; the knn nearest of those are scored by |f(x) - f(x')|.
  int min_diff_features = 12;
  int knn = 20;
  // One-to-one matching seed.
  std::uint64_t seed = 0;
};

absl::Status ValidatePolicySpec(const PolicySpec& spec, int n);

struct Pair {
  int target_row = -1;
  Point target;
  Point reference;
  // Row of the reference; empty for a synthetic reference (average policy).
  std::optional<int> reference_row;
};

struct PairSet {
  PolicySpec policy;
  std::vector<Pair> pairs;
  // One-to-one on an odd pool leaves one row out.
  std::optional<int> unpaired_row;
  // Targets for which no reference could be selected, with the reason.
  std::vector<std::pair<int, std::string>> failures;
};

// Returns the row index of the counterfactual reference for `target_row`.
// `candidates` are row indices; the target itself is skipped. Among the rows
// differing in >= min_diff_features coordinates, the knn nearest in Euclidean
// distance are kept and the one maximizing |f(x) - f(x')| wins. Ties in
// distance or response go to the lower row index.
absl::StatusOr<int> SelectCounterfactual(const Dataset& ds, const Model& model,
                                         int target_row,
                                         std::span<const int> candidates,
                                         const PolicySpec& spec);

// Same, with f precomputed for every dataset row.
absl::StatusOr<int> SelectCounterfactualWithValues(
    const Dataset& ds, std::span<const double> row_values, int target_row,
    std::span<const int> candidates, const PolicySpec& spec);

// Uniform random perfect matching of `pool`; every matched pair (a, b)
// yields the instances a -> b and b -> a, in that order.
absl::StatusOr<PairSet> PairOneToOne(const Dataset& ds,
                                     std::span<const int> pool,
                                     std::uint64_t seed);

// Per-dimension mean over `pool`, binary dimensions included.
absl::StatusOr<Point> AverageReference(const Dataset& ds,
                                       std::span<const int> pool);

// Builds pairs for `targets` with references drawn from `reference_pool`
// (counterfactual, one-to-one) or averaged over it (average). One-to-one
// matches `targets` among themselves. At most `max_pairs` pairs are returned
// (0 = unlimited); counterfactual failures are recorded, not fatal.
absl::StatusOr<PairSet> BuildPairs(const Dataset& ds, const Model& model,
                                   const PolicySpec& spec,
                                   std::span<const int> targets,
                                   std::span<const int> reference_pool,
                                   int max_pairs, int threads);

// "target_row,reference_row,policy" with 1-indexed rows; the reference
// column reads "synthetic" for averaged references.
void WritePairSetCsv(const PairSet& pairs, std::ostream& out);

}  // namespace abc_bench

#endif  // ABC_BENCH_POLICY_H_
