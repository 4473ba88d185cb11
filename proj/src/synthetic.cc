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

#include "abc_bench/synthetic.h"

#include <bit>

#include "absl/strings/str_cat.h"

namespace abc_bench {

ModelHandle RandomMultilinear(const FeatureSpace& space, std::mt19937_64& rng,
                              const RandomMultilinearOptions& options) {
  const int n = space.size();
  const int max_order = options.max_order > 0 ? options.max_order : n;
  std::uniform_real_distribution<double> coef(-options.scale, options.scale);
  std::bernoulli_distribution keep(options.density);
  std::vector<MultilinearModel::Term> terms;
  const std::uint32_t total = n >= 32 ? 0 : (1u << n);
  for (std::uint32_t u = 0; u < total; ++u) {
    const int size = std::popcount(u);
    if (size > max_order) continue;
    if (size == 0 && !options.include_intercept) continue;
    // Main effects are always present so every feature matters.
    if (size >= 2 && !keep(rng)) continue;
    terms.emplace_back(SubsetMask(u), coef(rng));
  }
  return std::make_shared<MultilinearModel>(space, std::move(terms));
}

ModelHandle RandomMonotoneAdditive(const FeatureSpace& space, Link link,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  const double intercept = coef(rng);
  std::vector<double> gamma(space.size());
  for (double& g : gamma) g = coef(rng);
  return std::make_shared<MonotoneAdditiveModel>(space, link, intercept,
                                                 std::move(gamma));
}

Point RandomPoint(const FeatureSpace& space, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> values(space.size());
  for (int j = 0; j < space.size(); ++j) {
    values[j] = space.is_binary(j) ? (coin(rng) ? 1.0 : 0.0) : normal(rng);
  }
  return Point(std::move(values));
}

FeatureSpace SyntheticSpace(int continuous, int binary) {
  std::vector<FeatureKind> kinds(continuous, FeatureKind::kContinuous);
  kinds.insert(kinds.end(), binary, FeatureKind::kBinary);
  std::vector<std::string> names;
  for (int j = 0; j < continuous + binary; ++j) {
    names.push_back(absl::StrCat("x", j + 1));
  }
  return *FeatureSpace::Create(std::move(kinds), std::move(names));
}

absl::StatusOr<Dataset> GenerateDataset(const SyntheticDataSpec& spec,
                                        const Model* target_model) {
  if (spec.rows < 1 || spec.continuous < 0 || spec.binary < 0 ||
      spec.continuous + spec.binary < 1) {
    return absl::InvalidArgumentError(
        "synthetic data needs rows >= 1 and at least one feature");
  }
  if (spec.noise < 0.0) {
    return absl::InvalidArgumentError("synthetic noise must be >= 0");
  }
  const FeatureSpace space = SyntheticSpace(spec.continuous, spec.binary);
  if (target_model != nullptr &&
      target_model->num_features() != space.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("target model has ", target_model->num_features(),
                     " features; synthetic data has ", space.size()));
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<Point> rows;
  rows.reserve(spec.rows);
  for (int i = 0; i < spec.rows; ++i) rows.push_back(RandomPoint(space, rng));
  std::vector<double> targets;
  if (target_model != nullptr) {
    auto values = target_model->Predict(rows);
    if (!values.ok()) return values.status();
    std::normal_distribution<double> normal(0.0, 1.0);
    targets = *std::move(values);
    for (double& y : targets) y += spec.noise * normal(rng);
  }
  return Dataset::Create(space, std::move(rows), std::move(targets));
}

}  // namespace abc_bench
