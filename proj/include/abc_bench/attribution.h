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

// Feature attribution methods for a (model, x, x_ref) triple.
//
// All methods share one orientation: a positive score for feature j means
// that changing x_j to x_ref_j is expected to increase f. Insertion tests
// therefore sort scores in descending order.

#ifndef ABC_BENCH_ATTRIBUTION_H_
#define ABC_BENCH_ATTRIBUTION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abc_bench/feature_space.h"
#include "abc_bench/model.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace abc_bench {

struct AttributionVector {
  std::string method;
  std::vector<double> scores;
  // Sample counts, node counts, seeds, model evaluations.
  std::map<std::string, double> metadata;

  double sum() const;
};

enum class BinaryScheme { kCasting, kInterpolating, kJumping };

std::string BinarySchemeName(BinaryScheme scheme);

struct IGConfig {
  int nodes = 500;
  BinaryScheme binary_scheme = BinaryScheme::kCasting;
  // Where every binary jump happens along the path (Jumping only).
  double jump_position = 0.5;
};

// Largest number of binary dimensions for the interpolating scheme.
inline constexpr int kMaxInterpolatingBinary = 20;

enum class KSMode { kExact, kSampled };

struct KSConfig {
  KSMode mode = KSMode::kExact;
  // Coalition evaluations in sampled mode, excluding the empty and full
  // coalitions which are always used.
  int samples = 120000;
  std::uint64_t seed = 0;
};

// Largest n for exact Kernel SHAP.
inline constexpr int kMaxExactKernelShapFeatures = 20;

struct LimeConfig {
  int samples = 5000;
  // Defaults to 0.75 * sqrt(n).
  std::optional<double> kernel_width;
  double ridge = 1e-3;
  std::uint64_t seed = 0;
};

// Exact Shapley values from the anchored decomposition (2^n evaluations).
absl::StatusOr<AttributionVector> ExactShapley(const Model& model,
                                               const Point& x,
                                               const Point& x_ref);

// Integrated gradients with a midpoint Riemann sum:
//   A_j = (x_ref_j - x_j) * mean_k d f / d x_j (x + t_k (x_ref - x)),
//   t_k = (k + 1/2) / nodes.
// Binary dimensions are handled by `cfg.binary_scheme`:
//   casting        f is evaluated at fractional binary values;
//   interpolating  f is replaced by its multilinear interpolation over the
//                  binary corners (2^m evaluations per node);
//   jumping        binary dimensions switch at jump_position in ascending
//                  index order, each scoring the resulting jump in f.
absl::StatusOr<AttributionVector> IntegratedGradients(const Model& model,
                                                      const Point& x,
                                                      const Point& x_ref,
                                                      const IGConfig& cfg);

// Kernel SHAP: Shapley-kernel weighted least squares over coalitions with the
// efficiency constraint sum_j A_j = f(x_ref) - f(x) imposed exactly.
// Exact mode uses all 2^n coalitions. Sampled mode enumerates whole size
// classes {s, n - s} (small s first) while they fit in the sample budget,
// then draws the remaining sizes proportional to kernel mass, pairing every
// draw with its complement. A budget of 2^n - 2 or more is therefore exact.
absl::StatusOr<AttributionVector> KernelShap(const Model& model,
                                             const Point& x,
                                             const Point& x_ref,
                                             const KSConfig& cfg);

// Gradient at x; ignores x_ref.
absl::StatusOr<AttributionVector> VanillaGrad(const Model& model,
                                              const Point& x,
                                              const Point& x_ref);

// x_j * d f / d x_j at x. Binary coordinates equal to 0 are replaced by
// kBinaryZeroReplacement before the multiplication.
inline constexpr double kBinaryZeroReplacement = -1e-4;
absl::StatusOr<AttributionVector> InputTimesGradient(const Model& model,
                                                     const Point& x,
                                                     const Point& x_ref);

// Local linear surrogate. Masks z are drawn uniformly from {0,1}^n (the first
// sample is all ones, i.e. x itself); coordinates with z_j = 0 take x_ref
// values. A weighted ridge regression of f on the switched indicators 1 - z_j,
// with weights exp(-d^2 / width^2) for d = number of switched coordinates,
// gives the scores.
absl::StatusOr<AttributionVector> Lime(const Model& model, const Point& x,
                                       const Point& x_ref,
                                       const LimeConfig& cfg);

// i.i.d. standard normal scores.
AttributionVector RandomAttribution(int n, std::uint64_t seed);

// A named, configured method as used by experiments and the CLI.
enum class MethodKind {
  kExactShapley,
  kKernelShap,
  kIntegratedGradients,
  kVanillaGrad,
  kInputTimesGradient,
  kLime,
  kRandom,
};

struct MethodSpec {
  std::string label;
  MethodKind kind = MethodKind::kExactShapley;
  IGConfig ig;
  KSConfig ks;
  LimeConfig lime;
};

// Accepts "shapley", "ks:exact", "ks:sampled[:samples]",
// "ig:cast|ig:interp|ig:jump[:nodes]", "vanilla_grad", "input_x_grad",
// "lime[:samples]", "random".
absl::StatusOr<MethodSpec> ParseMethodSpec(const std::string& text);
// Either a string as above or an object {"name": ..., "samples": ...,
// "nodes": ..., "jump_position": ..., "kernel_width": ..., "ridge": ...}.
absl::StatusOr<MethodSpec> MethodSpecFromJson(const nlohmann::json& spec);

// Runs the method. `seed` replaces the seed of stochastic methods.
absl::StatusOr<AttributionVector> ComputeAttribution(const MethodSpec& spec,
                                                     const Model& model,
                                                     const Point& x,
                                                     const Point& x_ref,
                                                     std::uint64_t seed);

}  // namespace abc_bench

#endif  // ABC_BENCH_ATTRIBUTION_H_
