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

#include "abc_bench/feature_space.h"

#include <bit>
#include <cmath>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace abc_bench {

std::string FeatureKindName(FeatureKind kind) {
  return kind == FeatureKind::kBinary ? "binary" : "continuous";
}

FeatureSpace FeatureSpace::Continuous(int n) {
  return FeatureSpace(std::vector<FeatureKind>(n, FeatureKind::kContinuous),
                      {});
}

absl::StatusOr<FeatureSpace> FeatureSpace::Create(
    std::vector<FeatureKind> kinds, std::vector<std::string> names) {
  if (kinds.empty()) {
    return absl::InvalidArgumentError("feature space must be non-empty");
  }
  if (!names.empty()) {
    if (names.size() != kinds.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("expected ", kinds.size(), " feature names, got ",
                       names.size()));
    }
    std::set<std::string> seen;
    for (const auto& name : names) {
      if (!seen.insert(name).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("duplicate feature name \"", name, "\""));
      }
    }
  }
  return FeatureSpace(std::move(kinds), std::move(names));
}

std::string FeatureSpace::label(int j) const {
  if (!names_.empty()) return names_[j];
  return absl::StrCat(j + 1);
}

std::vector<int> FeatureSpace::BinaryIndices() const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (is_binary(j)) out.push_back(j);
  }
  return out;
}

int FeatureSpace::num_binary() const {
  return static_cast<int>(BinaryIndices().size());
}

absl::Status ValidatePoint(const FeatureSpace& space, const Point& point,
                           bool strict_binary) {
  if (point.size() != space.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("point has ", point.size(), " coordinates, space has ",
                     space.size()));
  }
  for (int j = 0; j < point.size(); ++j) {
    if (!std::isfinite(point[j])) {
      return absl::InvalidArgumentError(
          absl::StrCat("coordinate ", j + 1, " is not finite"));
    }
    if (strict_binary && space.is_binary(j) && point[j] != 0.0 &&
        point[j] != 1.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("binary coordinate ", j + 1, " has value ", point[j]));
    }
  }
  return absl::OkStatus();
}

int CountDifferences(const Point& a, const Point& b) {
  int count = 0;
  for (int j = 0; j < a.size() && j < b.size(); ++j) {
    if (a[j] != b[j]) ++count;
  }
  return count;
}

SubsetMask SubsetMask::Of(std::initializer_list<int> features) {
  std::uint32_t bits = 0;
  for (int j : features) bits |= 1u << j;
  return SubsetMask(bits);
}

SubsetMask SubsetMask::OfOneBased(std::initializer_list<int> features) {
  std::uint32_t bits = 0;
  for (int j : features) bits |= 1u << (j - 1);
  return SubsetMask(bits);
}

int SubsetMask::size() const { return std::popcount(bits_); }

bool SubsetMask::FitsIn(int n) const {
  return n >= 32 || (bits_ >> n) == 0;
}

int SubsetMask::Ceiling() const {
  if (bits_ == 0) return 0;
  return 32 - std::countl_zero(bits_);
}

int SubsetMask::Floor(int n) const {
  if (bits_ == 0) return n + 1;
  return std::countr_zero(bits_) + 1;
}

std::vector<int> SubsetMask::Members() const {
  std::vector<int> out;
  for (std::uint32_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(std::countr_zero(b));
  }
  return out;
}

std::string SubsetMask::FormatOneBased() const {
  if (bits_ == 0) return "{}";
  std::vector<int> one_based;
  for (int j : Members()) one_based.push_back(j + 1);
  return absl::StrJoin(one_based, "+");
}

absl::StatusOr<Point> AssembleHybrid(const Point& x, const Point& x_ref,
                                     SubsetMask u) {
  if (x.size() != x_ref.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: ", x.size(), " vs ", x_ref.size()));
  }
  if (!u.FitsIn(x.size())) {
    return absl::InvalidArgumentError(
        absl::StrCat("subset ", u.FormatOneBased(), " exceeds n=", x.size()));
  }
  Point out = x;
  AssembleHybridInto(x, x_ref, u, &out);
  return out;
}

void AssembleHybridInto(const Point& x, const Point& x_ref, SubsetMask u,
                        Point* out) {
  auto& values = out->mutable_values();
  values.resize(x.size());
  for (int j = 0; j < x.size(); ++j) {
    values[j] = u.Contains(j) ? x_ref[j] : x[j];
  }
}

}  // namespace abc_bench
