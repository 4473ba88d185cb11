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

#include <random>

#include "gtest/gtest.h"

namespace abc_bench {
namespace {

TEST(AssembleHybrid, EmptySetKeepsX) {
  auto p = AssembleHybrid({1, 2, 3}, {9, 8, 7}, SubsetMask());
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(*p, Point({1, 2, 3}));
}

TEST(AssembleHybrid, SubstitutesMembers) {
  auto p = AssembleHybrid({1, 2, 3}, {9, 8, 7}, SubsetMask::OfOneBased({1, 3}));
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(*p, Point({9, 2, 7}));
}

TEST(AssembleHybrid, FullSetGivesReference) {
  auto p = AssembleHybrid({0, 0}, {1, 1}, SubsetMask::Full(2));
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(*p, Point({1, 1}));
}

TEST(AssembleHybrid, RejectsMismatchedSizesAndStrayBits) {
  EXPECT_FALSE(AssembleHybrid({0, 0}, {1, 1, 1}, SubsetMask()).ok());
  EXPECT_FALSE(AssembleHybrid({0, 0}, {1, 1}, SubsetMask::Of({2})).ok());
}

TEST(AssembleHybrid, IdempotentAndComposable) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 8;
    std::vector<double> a(n), b(n);
    for (int j = 0; j < n; ++j) a[j] = unif(rng), b[j] = unif(rng);
    const Point x(a), x_ref(b);
    const std::uint32_t full = SubsetMask::Full(n).bits();
    const SubsetMask u(rng() & full);
    const SubsetMask v(rng() & full & ~u.bits());
    auto once = AssembleHybrid(x, x_ref, u);
    auto twice = AssembleHybrid(*once, x_ref, u);
    EXPECT_EQ(*once, *twice);
    auto chained = AssembleHybrid(*once, x_ref, v);
    auto joint = AssembleHybrid(x, x_ref, u.Union(v));
    EXPECT_EQ(*chained, *joint);
  }
}

TEST(SubsetMask, CeilingAndFloor) {
  const SubsetMask u = SubsetMask::OfOneBased({2, 5});
  EXPECT_EQ(u.Ceiling(), 5);
  EXPECT_EQ(u.Floor(6), 2);
  EXPECT_EQ(SubsetMask().Ceiling(), 0);
  EXPECT_EQ(SubsetMask().Floor(4), 5);
  EXPECT_EQ(SubsetMask::Full(7).Ceiling(), 7);
  EXPECT_EQ(SubsetMask::Full(7).Floor(7), 1);
}

TEST(SubsetMask, FormatsOneBased) {
  EXPECT_EQ(SubsetMask().FormatOneBased(), "{}");
  EXPECT_EQ(SubsetMask::Of({0, 2}).FormatOneBased(), "1+3");
  EXPECT_EQ(SubsetMask::Of({0, 2}).Members(), (std::vector<int>{0, 2}));
  EXPECT_EQ(SubsetMask::Of({0, 2}).size(), 2);
  EXPECT_TRUE(SubsetMask::Of({1}).IsSubsetOf(SubsetMask::Of({0, 1})));
  EXPECT_FALSE(SubsetMask::Of({3}).FitsIn(3));
}

TEST(FeatureSpace, ValidatesNames) {
  EXPECT_FALSE(FeatureSpace::Create({}).ok());
  EXPECT_FALSE(FeatureSpace::Create({FeatureKind::kContinuous, FeatureKind::kBinary},
                                    {"a", "a"})
                   .ok());
  EXPECT_FALSE(FeatureSpace::Create({FeatureKind::kContinuous}, {"a", "b"}).ok());
  auto space = FeatureSpace::Create(
      {FeatureKind::kContinuous, FeatureKind::kBinary, FeatureKind::kBinary},
      {"age", "smoker", "urban"});
  ASSERT_TRUE(space.ok());
  EXPECT_EQ(space->BinaryIndices(), (std::vector<int>{1, 2}));
  EXPECT_EQ(space->num_binary(), 2);
  EXPECT_EQ(space->label(0), "age");
  EXPECT_EQ(FeatureSpace::Continuous(3).label(2), "3");
}

TEST(ValidatePoint, StrictBinaryIsOptIn) {
  auto space = FeatureSpace::Create({FeatureKind::kContinuous, FeatureKind::kBinary});
  ASSERT_TRUE(space.ok());
  EXPECT_TRUE(ValidatePoint(*space, {0.3, 0.5}).ok());
  EXPECT_FALSE(ValidatePoint(*space, {0.3, 0.5}, /*strict_binary=*/true).ok());
  EXPECT_TRUE(ValidatePoint(*space, {0.3, 1.0}, true).ok());
  EXPECT_FALSE(ValidatePoint(*space, {0.3}).ok());
  EXPECT_FALSE(ValidatePoint(*space, {std::nan(""), 0.0}).ok());
}

TEST(CountDifferences, ExactInequality) {
  EXPECT_EQ(CountDifferences({1, 2, 3}, {1, 2.0000001, 4}), 2);
  EXPECT_EQ(CountDifferences({1, 2}, {1, 2}), 0);
}

}  // namespace
}  // namespace abc_bench
