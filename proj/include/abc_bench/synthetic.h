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

// Seeded generators for random models, points and datasets. Used by the
// self-check suite, tests and in-memory experiment datasets.

#ifndef ABC_BENCH_SYNTHETIC_H_
#define ABC_BENCH_SYNTHETIC_H_

#include <cstdint>
#include <random>

#include "abc_bench/dataset.h"
#include "abc_bench/feature_space.h"
#include "abc_bench/model.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace abc_bench {

struct RandomMultilinearOptions {
  // Largest interaction order; 0 means n.
  int max_order = 0;
  // Probability that a subset of admissible size gets a nonzero coefficient.
  double density = 1.0;
  // Coefficients are uniform on [-scale, scale].
  double scale = 1.0;
  bool include_intercept = true;
};

// Multilinear model with random coefficients over `space`.
ModelHandle RandomMultilinear(const FeatureSpace& space, std::mt19937_64& rng,
                              const RandomMultilinearOptions& options = {});

// h(gamma_0 + sum_j gamma_j x_j) with gamma_j uniform on [-2, 2].
ModelHandle RandomMonotoneAdditive(const FeatureSpace& space, Link link,
                                   std::mt19937_64& rng);

// Continuous coordinates ~ N(0, 1), binary coordinates ~ Bernoulli(1/2).
Point RandomPoint(const FeatureSpace& space, std::mt19937_64& rng);

struct SyntheticDataSpec {
  int rows = 1000;
  int continuous = 2;
  int binary = 0;
  // Target = f(x) + noise * N(0, 1) when a target model is given.
  double noise = 0.0;
  std::uint64_t seed = 0;
};

// Features named x1..xn, continuous first. Without a target model the
// dataset has no targets.
absl::StatusOr<Dataset> GenerateDataset(const SyntheticDataSpec& spec,
                                        const Model* target_model);

FeatureSpace SyntheticSpace(int continuous, int binary);

}  // namespace abc_bench

#endif  // ABC_BENCH_SYNTHETIC_H_
