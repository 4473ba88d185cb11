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

// Anchored decomposition of f along a point pair (x, x_ref).
//
// For every subset u of the features,
//
//   delta[u] = sum_{v subset of u} (-1)^{|u - v|} f(x_ref_v : x_{-v})
//
// so delta[{}] = f(x), delta[{j}] is the main effect of switching x_j to
// x_ref_j and larger subsets hold interactions. The deltas are the Harsanyi
// dividends of the game v(S) = f(x_ref_S : x_{-S}), which gives exact Shapley
// values and closed forms for insertion/deletion areas:
//
//   AUC(order)  = sum_u (n - ceil(pos(u)) + 1) delta[u]
//   AUC'(order) = sum_u floor(pos(u)) delta[u]    (reverse order)
//   E[ABC]      = (n+1)/2 sum_{u != {}} (1 - |u|)/(|u| + 1) delta[u]
//
// where pos(u) relabels the members of u by their position in the ordering.

#ifndef ABC_BENCH_ANCHORED_DECOMPOSITION_H_
#define ABC_BENCH_ANCHORED_DECOMPOSITION_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "abc_bench/feature_space.h"
#include "abc_bench/model.h"
#include "absl/status/statusor.h"

namespace abc_bench {

// Above this n, Decompose() logs a warning about cost.
inline constexpr int kDecomposeWarnFeatures = 20;

class AnchoredDecomposition {
 public:
  AnchoredDecomposition(Point x, Point x_ref, std::vector<double> deltas);

  int n() const { return x_.size(); }
  const Point& x() const { return x_; }
  const Point& x_ref() const { return x_ref_; }
  // Dense table indexed by SubsetMask::bits().
  std::span<const double> deltas() const { return deltas_; }
  double delta(SubsetMask u) const { return deltas_[u.bits()]; }

  // f(x) and f(x_ref) recovered from the table.
  double f_x() const { return deltas_[0]; }
  double f_x_ref() const;

  // sum_{u subset of w} delta[u]; equals f(x_ref_w : x_{-w}).
  double Reconstruct(SubsetMask w) const;

 private:
  Point x_;
  Point x_ref_;
  std::vector<double> deltas_;
};

// Evaluates f at all 2^n hybrid corners and applies the subset Mobius
// transform. Fails when n exceeds kMaxSubsetFeatures.
absl::StatusOr<AnchoredDecomposition> Decompose(const Model& model,
                                                const Point& x,
                                                const Point& x_ref);

// Same transform over an existing corner table where
// corner_values[w] = f(x_ref_w : x_{-w}).
std::vector<double> MobiusTransform(std::vector<double> corner_values);
// Inverse (zeta) transform: subset sums.
std::vector<double> ZetaTransform(std::vector<double> deltas);

// Shapley values phi_j = sum_{u containing j} delta[u] / |u|.
std::vector<double> ShapleyFromDividends(const AnchoredDecomposition& d);

// Insertion AUC of `order` (0-indexed features, first changed first).
absl::StatusOr<double> AucOracle(const AnchoredDecomposition& d,
                                 std::span<const int> order);

// Deletion AUC for the curve that changes features in `deletion_order`.
// Evaluated as sum_u floor(pos(u)) delta[u] with positions taken in the
// reverse of `deletion_order`.
absl::StatusOr<double> DeletionAucOracle(const AnchoredDecomposition& d,
                                         std::span<const int> deletion_order);

// Expected insertion ABC under a uniformly random ordering.
double ExpectedAbcOracle(const AnchoredDecomposition& d);

// Exact fraction with a positive denominator, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational Make(std::int64_t num, std::int64_t den);
  double ToDouble() const { return static_cast<double>(num) / den; }
  Rational operator+(const Rational& other) const;
  bool operator==(const Rational& other) const = default;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// E[ceil(pi(u))] for |u| = size under a uniformly random permutation of n:
// size (n + 1) / (size + 1).
absl::StatusOr<Rational> ExpectedCeiling(int n, int size);

// Writes "mask,size,ceiling,delta" rows. Masks are rendered 1-indexed.
void WriteDeltaCsv(const AnchoredDecomposition& d, std::ostream& out);

}  // namespace abc_bench

#endif  // ABC_BENCH_ANCHORED_DECOMPOSITION_H_
