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

#include "abc_bench/anchored_decomposition.h"

#include <algorithm>
#include <bit>
#include <iostream>
#include <numeric>

#include "abc_bench/format.h"
#include "absl/strings/str_cat.h"

namespace abc_bench {
namespace {

// Corner evaluations are issued in chunks to bound memory at large n.
constexpr std::size_t kCornerChunk = std::size_t{1} << 14;

// Maps feature -> 1-indexed position in `order`, validating the permutation.
absl::StatusOr<std::vector<int>> Positions(std::span<const int> order, int n) {
  if (static_cast<int>(order.size()) != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "ordering has ", order.size(), " entries, expected ", n));
  }
  std::vector<int> position(n, 0);
  for (int k = 0; k < n; ++k) {
    const int j = order[k];
    if (j < 0 || j >= n || position[j] != 0) {
      return absl::InvalidArgumentError("ordering is not a permutation");
    }
    position[j] = k + 1;
  }
  return position;
}

}  // namespace

AnchoredDecomposition::AnchoredDecomposition(Point x, Point x_ref,
                                             std::vector<double> deltas)
    : x_(std::move(x)), x_ref_(std::move(x_ref)), deltas_(std::move(deltas)) {}

double AnchoredDecomposition::f_x_ref() const {
  return std::accumulate(deltas_.begin(), deltas_.end(), 0.0);
}

double AnchoredDecomposition::Reconstruct(SubsetMask w) const {
  // Enumerate the subsets of w.
  const std::uint32_t bits = w.bits();
  double total = 0.0;
  std::uint32_t u = bits;
  while (true) {
    total += deltas_[u];
    if (u == 0) break;
    u = (u - 1) & bits;
  }
  return total;
}

std::vector<double> MobiusTransform(std::vector<double> values) {
  const std::size_t size = values.size();
  for (std::size_t bit = 1; bit < size; bit <<= 1) {
    for (std::size_t mask = 0; mask < size; ++mask) {
      if (mask & bit) values[mask] -= values[mask ^ bit];
    }
  }
  return values;
}

std::vector<double> ZetaTransform(std::vector<double> values) {
  const std::size_t size = values.size();
  for (std::size_t bit = 1; bit < size; bit <<= 1) {
    for (std::size_t mask = 0; mask < size; ++mask) {
      if (mask & bit) values[mask] += values[mask ^ bit];
    }
  }
  return values;
}

absl::StatusOr<AnchoredDecomposition> Decompose(const Model& model,
                                                const Point& x,
                                                const Point& x_ref) {
  const int n = x.size();
  if (x_ref.size() != n || model.num_features() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: x has ", n, ", x_ref has ",
                     x_ref.size(), ", model has ", model.num_features()));
  }
  if (n > kMaxSubsetFeatures) {
    return absl::InvalidArgumentError(
        absl::StrCat("decomposition needs 2^n evaluations; n=", n,
                     " exceeds the cap of ", kMaxSubsetFeatures));
  }
  if (n > kDecomposeWarnFeatures) {
    std::clog << "warning: decomposing n=" << n << " features requires 2^" << n
              << " model evaluations\n";
  }
  const std::size_t total = std::size_t{1} << n;
  std::vector<double> corners;
  corners.reserve(total);
  std::vector<Point> batch;
  for (std::size_t start = 0; start < total; start += kCornerChunk) {
    const std::size_t end = std::min(total, start + kCornerChunk);
    batch.assign(end - start, x);
    for (std::size_t w = start; w < end; ++w) {
      AssembleHybridInto(x, x_ref, SubsetMask(static_cast<std::uint32_t>(w)),
                         &batch[w - start]);
    }
    auto values = model.Predict(batch);
    if (!values.ok()) return values.status();
    corners.insert(corners.end(), values->begin(), values->end());
  }
  return AnchoredDecomposition(x, x_ref, MobiusTransform(std::move(corners)));
}

std::vector<double> ShapleyFromDividends(const AnchoredDecomposition& d) {
  const int n = d.n();
  std::vector<double> phi(n, 0.0);
  const auto deltas = d.deltas();
  for (std::size_t u = 1; u < deltas.size(); ++u) {
    const double share =
        deltas[u] / std::popcount(static_cast<std::uint32_t>(u));
    for (std::uint32_t b = static_cast<std::uint32_t>(u); b != 0; b &= b - 1) {
      phi[std::countr_zero(b)] += share;
    }
  }
  return phi;
}

absl::StatusOr<double> AucOracle(const AnchoredDecomposition& d,
                                 std::span<const int> order) {
  const int n = d.n();
  auto position = Positions(order, n);
  if (!position.ok()) return position.status();
  const auto deltas = d.deltas();
  // ceiling[u] = max position over u, built from u without its lowest bit.
  std::vector<int> ceiling(deltas.size(), 0);
  double auc = 0.0;
  for (std::size_t u = 0; u < deltas.size(); ++u) {
    if (u != 0) {
      const std::uint32_t bits = static_cast<std::uint32_t>(u);
      ceiling[u] = std::max(ceiling[bits & (bits - 1)],
                            (*position)[std::countr_zero(bits)]);
    }
    auc += (n - ceiling[u] + 1) * deltas[u];
  }
  return auc;
}

absl::StatusOr<double> DeletionAucOracle(const AnchoredDecomposition& d,
                                         std::span<const int> deletion_order) {
  const int n = d.n();
  std::vector<int> reversed(deletion_order.rbegin(), deletion_order.rend());
  auto position = Positions(reversed, n);
  if (!position.ok()) return position.status();
  const auto deltas = d.deltas();
  std::vector<int> floor(deltas.size(), n + 1);
  double auc = 0.0;
  for (std::size_t u = 0; u < deltas.size(); ++u) {
    if (u != 0) {
      const std::uint32_t bits = static_cast<std::uint32_t>(u);
      floor[u] = std::min(floor[bits & (bits - 1)],
                          (*position)[std::countr_zero(bits)]);
    }
    auc += floor[u] * deltas[u];
  }
  return auc;
}

double ExpectedAbcOracle(const AnchoredDecomposition& d) {
  const int n = d.n();
  const auto deltas = d.deltas();
  double sum = 0.0;
  for (std::size_t u = 1; u < deltas.size(); ++u) {
    const int size = std::popcount(static_cast<std::uint32_t>(u));
    sum += static_cast<double>(1 - size) / (size + 1) * deltas[u];
  }
  return 0.5 * (n + 1) * sum;
}

Rational Rational::Make(std::int64_t num, std::int64_t den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

Rational Rational::operator+(const Rational& other) const {
  const std::int64_t g = std::gcd(den, other.den);
  return Make(num * (other.den / g) + other.num * (den / g),
              den / g * other.den);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  if (r.den == 1) return os << r.num;
  return os << r.num << "/" << r.den;
}

absl::StatusOr<Rational> ExpectedCeiling(int n, int size) {
  if (n < 1 || size < 0 || size > n) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 0 <= size <= n with n >= 1; got n=", n,
                     ", size=", size));
  }
  return Rational::Make(static_cast<std::int64_t>(size) * (n + 1), size + 1);
}

void WriteDeltaCsv(const AnchoredDecomposition& d, std::ostream& out) {
  out << "mask,size,ceiling,delta\n";
  const auto deltas = d.deltas();
  for (std::size_t u = 0; u < deltas.size(); ++u) {
    const SubsetMask mask(static_cast<std::uint32_t>(u));
    out << mask.FormatOneBased() << "," << mask.size() << ","
        << mask.Ceiling() << "," << FormatDouble(deltas[u]) << "\n";
  }
}

}  // namespace abc_bench
