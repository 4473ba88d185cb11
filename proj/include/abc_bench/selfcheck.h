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

// Oracle identity suite: each check compares two independent computations
// of the same quantity on random models with n <= 7.

#ifndef ABC_BENCH_SELFCHECK_H_
#define ABC_BENCH_SELFCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

namespace abc_bench {

struct IdentityCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfCheckOptions {
  std::uint64_t seed = 20240601;
  // Random models per randomized check.
  int models = 25;
  // Largest n used by exhaustive checks (<= 7).
  int max_n = 7;
};

// Curve-sum insertion AUC equals the decomposition formula.
IdentityCheck CheckInsertionAucIdentity(const SelfCheckOptions& options);
// Curve-sum deletion AUC equals the floor formula.
IdentityCheck CheckDeletionAucIdentity(const SelfCheckOptions& options);
// Partial sums of deltas reproduce every hybrid corner.
IdentityCheck CheckReconstruction(const SelfCheckOptions& options);
// Enumerated E[ceil(pi(u))] equals |u|(n+1)/(|u|+1) exactly.
IdentityCheck CheckExpectedCeiling(const SelfCheckOptions& options);
// Exhaustive mean insertion ABC equals the closed form.
IdentityCheck CheckExpectedAbc(const SelfCheckOptions& options);
// Exhaustive mean of ABC + ABC' is zero.
IdentityCheck CheckAbcPlusDeletionAbc(const SelfCheckOptions& options);
// The 3-feature model with one interaction where the Shapley order is not
// the best insertion order.
IdentityCheck CheckShapleyCounterexample(const SelfCheckOptions& options);
// With two features the Shapley order always maximizes insertion AUC.
IdentityCheck CheckTwoFeatureOptimality(const SelfCheckOptions& options);
// Monotone links over additive cores: the Shapley order maximizes AUC and
// IG (casting) induces the same order.
IdentityCheck CheckMonotoneOptimality(const SelfCheckOptions& options);
// Efficiency of Shapley values and exact Kernel SHAP agreement.
IdentityCheck CheckShapleyEfficiency(const SelfCheckOptions& options);

std::vector<IdentityCheck> RunSelfCheck(const SelfCheckOptions& options);

}  // namespace abc_bench

#endif  // ABC_BENCH_SELFCHECK_H_
