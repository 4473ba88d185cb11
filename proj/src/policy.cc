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

#include "abc_bench/policy.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "abc_bench/parallel.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace abc_bench {

absl::StatusOr<PolicyKind> ParsePolicyKind(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(std::string(name));
  if (lower == "counterfactual") return PolicyKind::kCounterfactual;
  if (lower == "one_to_one" || lower == "one-to-one") {
    return PolicyKind::kOneToOne;
  }
  if (lower == "average") return PolicyKind::kAverage;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown policy \"", std::string(name),
                   "\" (expected counterfactual, one_to_one, average)"));
}

std::string PolicyKindName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kCounterfactual:
      return "counterfactual";
    case PolicyKind::kOneToOne:
      return "one_to_one";
    case PolicyKind::kAverage:
      return "average";
  }
  return "unknown";
}

absl::Status ValidatePolicySpec(const PolicySpec& spec, int n) {
  if (spec.kind != PolicyKind::kCounterfactual) return absl::OkStatus();
  if (spec.min_diff_features < 0 || spec.min_diff_features > n) {
    return absl::InvalidArgumentError(
        absl::StrCat("min_diff_features must lie in [0, ", n, "]; got ",
                     spec.min_diff_features));
  }
  if (spec.knn < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("knn must be >= 1; got ", spec.knn));
  }
  return absl::OkStatus();
}

absl::StatusOr<int> SelectCounterfactualWithValues(
    const Dataset& ds, std::span<const double> row_values, int target_row,
    std::span<const int> candidates, const PolicySpec& spec) {
  if (auto s = ValidatePolicySpec(spec, ds.num_features()); !s.ok()) return s;
  const Point& x = ds.row(target_row);
  struct Candidate {
    double distance;
    int row;
  };
  std::vector<Candidate> passing;
  for (int row : candidates) {
    if (row == target_row) continue;
    const Point& c = ds.row(row);
    if (CountDifferences(x, c) < spec.min_diff_features) continue;
    double d2 = 0.0;
    for (int j = 0; j < x.size(); ++j) d2 += (x[j] - c[j]) * (x[j] - c[j]);
    passing.push_back({d2, row});
  }
  if (passing.empty()) {
    return absl::NotFoundError(absl::StrCat(
        "no candidate differs from target row ", target_row + 1, " in >= ",
        spec.min_diff_features, " features"));
  }
  auto closer = [](const Candidate& a, const Candidate& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.row < b.row;
  };
  const size_t keep = std::min<size_t>(passing.size(), spec.knn);
  std::partial_sort(passing.begin(), passing.begin() + keep, passing.end(),
                    closer);
  passing.resize(keep);
  std::sort(passing.begin(), passing.end(),
            [](const Candidate& a, const Candidate& b) { return a.row < b.row; });
  const double fx = row_values[target_row];
  int best = passing[0].row;
  double best_gap = std::abs(fx - row_values[best]);
  for (const Candidate& c : passing) {
    const double gap = std::abs(fx - row_values[c.row]);
    if (gap > best_gap) {
      best = c.row;
      best_gap = gap;
    }
  }
  return best;
}

absl::StatusOr<int> SelectCounterfactual(const Dataset& ds, const Model& model,
                                         int target_row,
                                         std::span<const int> candidates,
                                         const PolicySpec& spec) {
  if (target_row < 0 || target_row >= ds.num_rows()) {
    return absl::OutOfRangeError(absl::StrCat("no row ", target_row + 1));
  }
  std::vector<int> rows(candidates.begin(), candidates.end());
  rows.push_back(target_row);
  std::vector<Point> points;
  for (int r : rows) points.push_back(ds.row(r));
  auto values = model.Predict(points);
  if (!values.ok()) return values.status();
  std::vector<double> row_values(ds.num_rows(), 0.0);
  for (size_t i = 0; i < rows.size(); ++i) row_values[rows[i]] = (*values)[i];
  return SelectCounterfactualWithValues(ds, row_values, target_row, candidates,
                                        spec);
}

absl::StatusOr<PairSet> PairOneToOne(const Dataset& ds,
                                     std::span<const int> pool,
                                     std::uint64_t seed) {
  if (pool.size() < 2) {
    return absl::InvalidArgumentError("one-to-one pairing needs >= 2 rows");
  }
  std::vector<int> order(pool.begin(), pool.end());
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  PairSet out;
  out.policy.kind = PolicyKind::kOneToOne;
  out.policy.seed = seed;
  for (size_t i = 0; i + 1 < order.size(); i += 2) {
    const int a = order[i];
    const int b = order[i + 1];
    out.pairs.push_back({a, ds.row(a), ds.row(b), b});
    out.pairs.push_back({b, ds.row(b), ds.row(a), a});
  }
  if (order.size() % 2 == 1) out.unpaired_row = order.back();
  return out;
}

absl::StatusOr<Point> AverageReference(const Dataset& ds,
                                       std::span<const int> pool) {
  if (pool.empty()) return absl::InvalidArgumentError("average of empty pool");
  std::vector<double> mean(ds.num_features(), 0.0);
  for (int r : pool) {
    for (int j = 0; j < ds.num_features(); ++j) mean[j] += ds.row(r)[j];
  }
  for (double& m : mean) m /= static_cast<double>(pool.size());
  return Point(std::move(mean));
}

absl::StatusOr<PairSet> BuildPairs(const Dataset& ds, const Model& model,
                                   const PolicySpec& spec,
                                   std::span<const int> targets,
                                   std::span<const int> reference_pool,
                                   int max_pairs, int threads) {
  if (auto s = ValidatePolicySpec(spec, ds.num_features()); !s.ok()) return s;
  if (targets.empty()) return absl::InvalidArgumentError("no target rows");
  const size_t limit =
      max_pairs > 0 ? static_cast<size_t>(max_pairs) : targets.size() * 2;
  PairSet out;
  out.policy = spec;
  switch (spec.kind) {
    case PolicyKind::kOneToOne: {
      auto matched = PairOneToOne(ds, targets, spec.seed);
      if (!matched.ok()) return matched.status();
      out.pairs = std::move(matched->pairs);
      out.unpaired_row = matched->unpaired_row;
      // Keep mirrored instances together.
      size_t keep = std::min(limit, out.pairs.size());
      if (keep % 2 == 1 && keep < out.pairs.size()) ++keep;
      out.pairs.resize(keep);
      return out;
    }
    case PolicyKind::kAverage: {
      auto ref = AverageReference(ds, reference_pool);
      if (!ref.ok()) return ref.status();
      for (size_t i = 0; i < targets.size() && out.pairs.size() < limit; ++i) {
        out.pairs.push_back({targets[i], ds.row(targets[i]), *ref, {}});
      }
      return out;
    }
    case PolicyKind::kCounterfactual:
      break;
  }

  std::vector<int> needed(reference_pool.begin(), reference_pool.end());
  const size_t count = std::min(limit, targets.size());
  needed.insert(needed.end(), targets.begin(), targets.begin() + count);
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  std::vector<Point> points;
  points.reserve(needed.size());
  for (int r : needed) points.push_back(ds.row(r));
  auto values = model.Predict(points);
  if (!values.ok()) return values.status();
  std::vector<double> row_values(ds.num_rows(), 0.0);
  for (size_t i = 0; i < needed.size(); ++i) row_values[needed[i]] = (*values)[i];

  std::vector<absl::StatusOr<int>> chosen(count, absl::UnknownError(""));
  ParallelFor(count, threads, [&](size_t i) {
    chosen[i] = SelectCounterfactualWithValues(ds, row_values, targets[i],
                                               reference_pool, spec);
  });
  for (size_t i = 0; i < count; ++i) {
    const int t = targets[i];
    if (chosen[i].ok()) {
      out.pairs.push_back({t, ds.row(t), ds.row(*chosen[i]), *chosen[i]});
    } else {
      out.failures.emplace_back(t, std::string(chosen[i].status().message()));
    }
  }
  return out;
}

void WritePairSetCsv(const PairSet& pairs, std::ostream& out) {
  out << "target_row,reference_row,policy\n";
  const std::string policy = PolicyKindName(pairs.policy.kind);
  for (const Pair& p : pairs.pairs) {
    out << p.target_row + 1 << ",";
    if (p.reference_row.has_value()) {
      out << *p.reference_row + 1;
    } else {
      out << "synthetic";
    }
    out << "," << policy << "\n";
  }
}

}  // namespace abc_bench
