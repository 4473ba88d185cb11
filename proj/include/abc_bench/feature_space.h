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

// Feature domains, points and subset masks.
//
// Features are 0-indexed everywhere inside the library. Anything rendered for
// a human (CSV dumps, CLI output) uses 1-indexed feature numbers.

#ifndef ABC_BENCH_FEATURE_SPACE_H_
#define ABC_BENCH_FEATURE_SPACE_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace abc_bench {

// Largest n for which anything enumerates all 2^n subsets.
inline constexpr int kMaxSubsetFeatures = 30;
// Largest n for which anything enumerates all n! orderings.
inline constexpr int kMaxExhaustiveOrderFeatures = 10;

enum class FeatureKind { kContinuous, kBinary };

std::string FeatureKindName(FeatureKind kind);

class FeatureSpace {
 public:
  // All-continuous space with n dimensions.
  static FeatureSpace Continuous(int n);
  // Validates non-emptiness and unique names.
  static absl::StatusOr<FeatureSpace> Create(
      std::vector<FeatureKind> kinds, std::vector<std::string> names = {});

  int size() const { return static_cast<int>(kinds_.size()); }
  FeatureKind kind(int j) const { return kinds_[j]; }
  bool is_binary(int j) const { return kinds_[j] == FeatureKind::kBinary; }
  const std::vector<FeatureKind>& kinds() const { return kinds_; }
  // Empty when the space is unnamed.
  const std::vector<std::string>& names() const { return names_; }
  // Name of feature j, or its 1-indexed number when unnamed.
  std::string label(int j) const;

  // Indices of binary dimensions, ascending.
  std::vector<int> BinaryIndices() const;
  int num_binary() const;

  bool operator==(const FeatureSpace& other) const = default;

 private:
  FeatureSpace(std::vector<FeatureKind> kinds, std::vector<std::string> names)
      : kinds_(std::move(kinds)), names_(std::move(names)) {}

  std::vector<FeatureKind> kinds_;
  std::vector<std::string> names_;
};

// A feature vector. Binary coordinates may hold fractional values (relaxed
// domain) unless validated with `strict_binary`.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> values) : values_(std::move(values)) {}
  Point(std::initializer_list<double> values) : values_(values) {}

  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int j) const { return values_[j]; }
  double& operator[](int j) { return values_[j]; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  bool operator==(const Point& other) const = default;

 private:
  std::vector<double> values_;
};

// Checks dimension and finiteness; with `strict_binary`, also that binary
// coordinates are exactly 0 or 1.
absl::Status ValidatePoint(const FeatureSpace& space, const Point& point,
                           bool strict_binary = false);

// Number of coordinates where the two points differ (exact inequality).
int CountDifferences(const Point& a, const Point& b);

// Subset u of {0..n-1} stored as a bitmask.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t bits) : bits_(bits) {}

  static SubsetMask Full(int n) {
    return SubsetMask(n >= 32 ? ~0u : ((1u << n) - 1u));
  }
  static SubsetMask Of(std::initializer_list<int> features);
  // Parses 1-indexed features, e.g. {1, 3} -> bits 0 and 2.
  static SubsetMask OfOneBased(std::initializer_list<int> features);

  std::uint32_t bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  bool Contains(int j) const { return (bits_ >> j) & 1u; }
  int size() const;
  SubsetMask With(int j) const { return SubsetMask(bits_ | (1u << j)); }
  SubsetMask Without(int j) const { return SubsetMask(bits_ & ~(1u << j)); }
  SubsetMask Union(SubsetMask other) const {
    return SubsetMask(bits_ | other.bits_);
  }
  bool IsSubsetOf(SubsetMask other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  // True when no bit at or above n is set.
  bool FitsIn(int n) const;

  // 1-indexed largest member; 0 for the empty set.
  int Ceiling() const;
  // 1-indexed smallest member; n+1 for the empty set.
  int Floor(int n) const;

  // 0-indexed members, ascending.
  std::vector<int> Members() const;
  // "{}" for the empty set, otherwise 1-indexed members joined by '+'.
  std::string FormatOneBased() const;

  bool operator==(const SubsetMask& other) const = default;

 private:
  std::uint32_t bits_ = 0;
};

// Returns the point whose coordinate j is x_ref[j] for j in u and x[j]
// otherwise, i.e. x_ref is inserted into x on the coordinates of u.
absl::StatusOr<Point> AssembleHybrid(const Point& x, const Point& x_ref,
                                     SubsetMask u);

// Unchecked variant for hot loops; sizes must already agree.
void AssembleHybridInto(const Point& x, const Point& x_ref, SubsetMask u,
                        Point* out);

}  // namespace abc_bench

#endif  // ABC_BENCH_FEATURE_SPACE_H_
