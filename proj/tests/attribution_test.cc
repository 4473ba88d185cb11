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

#include "abc_bench/attribution.h"

#include <cmath>
#include <random>

#include "abc_bench/anchored_decomposition.h"
#include "abc_bench/curve_metrics.h"
#include "abc_bench/synthetic.h"
#include "gtest/gtest.h"

namespace abc_bench {
namespace {

ModelHandle Counterexample() {
  return *MultilinearModel::Create(FeatureSpace::Continuous(3),
                                   {{SubsetMask::Of({0}), 3.0},
                                    {SubsetMask::Of({1}), 2.0},
                                    {SubsetMask::Of({2}), 1.0},
                                    {SubsetMask::Of({0, 1}), -1.5}});
}

void ExpectNear(const std::vector<double>& a, const std::vector<double>& b,
                double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], tol) << "j=" << j;
}

TEST(ExactShapley, Counterexample) {
  auto phi = ExactShapley(*Counterexample(), {0, 0, 0}, {1, 1, 1});
  ASSERT_TRUE(phi.ok());
  ExpectNear(phi->scores, {2.25, 1.25, 1.0}, 1e-12);
  EXPECT_NEAR(phi->sum(), 4.5, 1e-12);
}

TEST(KernelShap, ExactMatchesShapleyUpToTwelveFeatures) {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 12; ++n) {
    const FeatureSpace space = FeatureSpace::Continuous(n);
    auto model = RandomMultilinear(space, rng, {.max_order = 3, .density = 0.5});
    const Point x = RandomPoint(space, rng), x_ref = RandomPoint(space, rng);
    auto ks = KernelShap(*model, x, x_ref, KSConfig{});
    auto phi = ExactShapley(*model, x, x_ref);
    ASSERT_TRUE(ks.ok() && phi.ok()) << ks.status();
    ExpectNear(ks->scores, phi->scores, 1e-9);
    EXPECT_EQ(ks->metadata.at("evaluations"), std::ldexp(1.0, n));
  }
}

TEST(KernelShap, CounterexampleExact) {
  auto ks = KernelShap(*Counterexample(), {0, 0, 0}, {1, 1, 1}, KSConfig{});
  ASSERT_TRUE(ks.ok());
  ExpectNear(ks->scores, {2.25, 1.25, 1.0}, 1e-9);
}

TEST(KernelShap, SampledIsCloseAndReproducible) {
  std::mt19937_64 rng(32);
  const FeatureSpace space = FeatureSpace::Continuous(8);
  auto model = RandomMultilinear(space, rng);
  const Point x = RandomPoint(space, rng), x_ref = RandomPoint(space, rng);
  KSConfig cfg;
  cfg.mode = KSMode::kSampled;
  cfg.samples = 10 * 256;
  cfg.seed = 4;
  auto a = KernelShap(*model, x, x_ref, cfg);
  auto b = KernelShap(*model, x, x_ref, cfg);
  auto exact = ExactShapley(*model, x, x_ref);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->scores, b->scores);
  ExpectNear(a->scores, exact->scores, 0.05);
  // Efficiency is imposed exactly.
  EXPECT_NEAR(a->sum(), exact->sum(), 1e-9);
  EXPECT_EQ(a->metadata.at("paired"), 1.0);
}

TEST(KernelShap, PartialBudgetEnumeratesSmallSizes) {
  std::mt19937_64 rng(33);
  const FeatureSpace space = FeatureSpace::Continuous(10);
  auto model = RandomMultilinear(space, rng, {.max_order = 2});
  const Point x = RandomPoint(space, rng), x_ref = RandomPoint(space, rng);
  KSConfig cfg;
  cfg.mode = KSMode::kSampled;
  // Sizes {1, 9} and {2, 8} take 20 + 90 coalitions; 190 remain for sampling.
  cfg.samples = 300;
  cfg.seed = 5;
  auto a = KernelShap(*model, x, x_ref, cfg);
  ASSERT_TRUE(a.ok()) << a.status();
  EXPECT_EQ(a->metadata.at("enumerated_size_classes"), 2.0);
  EXPECT_EQ(a->metadata.at("evaluations"), 302.0);
  cfg.seed = 6;
  auto b = KernelShap(*model, x, x_ref, cfg);
  EXPECT_NE(a->scores, b->scores);
  auto exact = ExactShapley(*model, x, x_ref);
  EXPECT_NEAR(a->sum(), exact->sum(), 1e-9);
}

TEST(IntegratedGradients, LinearIsExactAtAnyNodeCount) {
  auto model = *LinearModel::Create(FeatureSpace::Continuous(3), 1, {2, -1, 0.5});
  for (int nodes : {1, 2, 7, 500}) {
    IGConfig cfg;
    cfg.nodes = nodes;
    auto ig = IntegratedGradients(*model, {1, 2, 3}, {0, 4, -1}, cfg);
    ASSERT_TRUE(ig.ok());
    ExpectNear(ig->scores, {-2, -2, -2}, 1e-12);
  }
}

TEST(IntegratedGradients, InterpolatingMatchesShapleyOnBinaryMultilinear) {
  std::mt19937_64 rng(33);
  for (int n = 2; n <= 6; ++n) {
    auto space = *FeatureSpace::Create(std::vector<FeatureKind>(n, FeatureKind::kBinary));
    auto model = RandomMultilinear(space, rng);
    const Point x = RandomPoint(space, rng), x_ref = RandomPoint(space, rng);
    IGConfig cfg;
    cfg.binary_scheme = BinaryScheme::kInterpolating;
    auto ig = IntegratedGradients(*model, x, x_ref, cfg);
    auto phi = ExactShapley(*model, x, x_ref);
    ASSERT_TRUE(ig.ok());
    ExpectNear(ig->scores, phi->scores, 1e-6);
  }
}

TEST(IntegratedGradients, InterpolatingOnMultilinearPlusAdditive) {
  std::mt19937_64 rng(34);
  auto space = *FeatureSpace::Create({FeatureKind::kContinuous, FeatureKind::kBinary,
                                      FeatureKind::kBinary, FeatureKind::kContinuous});
  // Interactions only among binary dims, plus linear continuous terms.
  auto model = *MultilinearModel::Create(space, {{SubsetMask::Of({0}), 1.5},
                                                 {SubsetMask::Of({3}), -0.7},
                                                 {SubsetMask::Of({1}), 2.0},
                                                 {SubsetMask::Of({2}), -1.0},
                                                 {SubsetMask::Of({1, 2}), 3.0}});
  const Point x{0.3, 0, 1, -1}, x_ref{1.2, 1, 0, 0.5};
  IGConfig cfg;
  cfg.binary_scheme = BinaryScheme::kInterpolating;
  auto ig = IntegratedGradients(*model, x, x_ref, cfg);
  auto phi = ExactShapley(*model, x, x_ref);
  ExpectNear(ig->scores, phi->scores, 1e-4);
}

TEST(IntegratedGradients, JumpingSingleBinary) {
  auto space = *FeatureSpace::Create({FeatureKind::kBinary});
  auto model = *MonotoneAdditiveModel::Create(space, Link::kExp, 0.2, {1.3});
  IGConfig cfg;
  cfg.binary_scheme = BinaryScheme::kJumping;
  auto ig = IntegratedGradients(*model, {0}, {1}, cfg);
  ASSERT_TRUE(ig.ok());
  EXPECT_NEAR(ig->scores[0], *model->PredictOne({1}) - *model->PredictOne({0}), 1e-12);
}

TEST(IntegratedGradients, CastingOnAdditiveEqualsShapley) {
  std::mt19937_64 rng(35);
  const FeatureSpace space = FeatureSpace::Continuous(5);
  auto model = *LinearModel::Create(space, 0.1, {1, -2, 0.3, 4, -0.5});
  const Point x = RandomPoint(space, rng), x_ref = RandomPoint(space, rng);
  auto ig = IntegratedGradients(*model, x, x_ref, IGConfig{});
  ExpectNear(ig->scores, ExactShapley(*model, x, x_ref)->scores, 1e-6);
}

TEST(IntegratedGradients, MonotoneLinksPreserveShapleyOrder) {
  std::mt19937_64 rng(36);
  for (Link link : {Link::kLogistic, Link::kExp, Link::kLeakyRelu}) {
    for (int trial = 0; trial < 20; ++trial) {
      const FeatureSpace space = FeatureSpace::Continuous(2 + trial % 6);
      auto model = RandomMonotoneAdditive(space, link, rng);
      const Point x = RandomPoint(space, rng), x_ref = RandomPoint(space, rng);
      auto ig = IntegratedGradients(*model, x, x_ref, IGConfig{});
      auto phi = ExactShapley(*model, x, x_ref);
      EXPECT_EQ(InsertionOrderFromScores(ig->scores, "").perm,
                InsertionOrderFromScores(phi->scores, "").perm)
          << LinkName(link);
    }
  }
}

TEST(DummyFeature, ScoresZero) {
  // Feature 3 never enters f.
  auto model = *MultilinearModel::Create(FeatureSpace::Continuous(3),
                                         {{SubsetMask::Of({0}), 1.0},
                                          {SubsetMask::Of({0, 1}), 2.0}});
  const Point x{0.2, -1, 5}, x_ref{1, 2, -3};
  EXPECT_NEAR(ExactShapley(*model, x, x_ref)->scores[2], 0, 1e-9);
  EXPECT_NEAR(KernelShap(*model, x, x_ref, KSConfig{})->scores[2], 0, 1e-9);
  EXPECT_NEAR(IntegratedGradients(*model, x, x_ref, IGConfig{})->scores[2], 0, 1e-9);
}

TEST(VanillaGrad, Examples) {
  auto linear = *LinearModel::Create(FeatureSpace::Continuous(2), 1, {2, 3});
  ExpectNear(VanillaGrad(*linear, {5, 5}, {0, 0})->scores, {2, 3}, 1e-12);
  auto logistic = *MonotoneAdditiveModel::Create(FeatureSpace::Continuous(1),
                                                 Link::kLogistic, 0, {1});
  ExpectNear(VanillaGrad(*logistic, {0}, {1})->scores, {0.25}, 1e-12);
  ExpectNear(VanillaGrad(*Counterexample(), {0, 0, 0}, {1, 1, 1})->scores, {3, 2, 1},
             1e-12);
}

TEST(InputTimesGradient, Examples) {
  auto linear = *LinearModel::Create(FeatureSpace::Continuous(3), 1, {2, 3, 4});
  ExpectNear(InputTimesGradient(*linear, {0, 0, 0}, {1, 1, 1})->scores, {0, 0, 0}, 0);
  ExpectNear(InputTimesGradient(*linear, {1, -2, 0.5}, {0, 0, 0})->scores, {2, -6, 2},
             1e-12);
  auto space = *FeatureSpace::Create({FeatureKind::kContinuous, FeatureKind::kBinary});
  auto mixed = *LinearModel::Create(space, 0, {2, 3});
  auto a = InputTimesGradient(*mixed, {1, 0}, {0, 1});
  ExpectNear(a->scores, {2, kBinaryZeroReplacement * 3}, 1e-15);
}

TEST(Lime, RecoversAdditiveEffects) {
  auto model = *LinearModel::Create(FeatureSpace::Continuous(4), 0.5, {1, -2, 0.5, 3});
  const Point x{0, 0, 0, 0}, x_ref{1, 1, 2, -1};
  LimeConfig cfg;
  cfg.samples = 10000;
  cfg.seed = 5;
  auto lime = Lime(*model, x, x_ref, cfg);
  ASSERT_TRUE(lime.ok());
  // Positive means moving to x_ref raises f.
  ExpectNear(lime->scores, {1, -2, 1, -3}, 0.05);
}

TEST(Lime, DeterministicAndNeedsEnoughSamples) {
  std::mt19937_64 rng(37);
  const FeatureSpace space = FeatureSpace::Continuous(5);
  auto model = RandomMultilinear(space, rng);
  const Point x = RandomPoint(space, rng), x_ref = RandomPoint(space, rng);
  LimeConfig cfg;
  cfg.samples = 300;
  cfg.seed = 8;
  EXPECT_EQ(Lime(*model, x, x_ref, cfg)->scores, Lime(*model, x, x_ref, cfg)->scores);
  cfg.samples = 6;
  EXPECT_FALSE(Lime(*model, x, x_ref, cfg).ok());
  cfg.samples = 7;
  EXPECT_TRUE(Lime(*model, x, x_ref, cfg).ok());
}

TEST(RandomAttribution, SeededAndVaried) {
  EXPECT_EQ(RandomAttribution(6, 1).scores, RandomAttribution(6, 1).scores);
  int distinct = 0;
  const std::vector<int> first = InsertionOrderFromScores(RandomAttribution(6, 0).scores, "").perm;
  for (std::uint64_t seed = 1; seed < 20; ++seed) {
    distinct += InsertionOrderFromScores(RandomAttribution(6, seed).scores, "").perm != first;
  }
  EXPECT_GE(distinct, 17);
}

// Mean insertion ABC of random orderings on an additive model is ~0.
TEST(RandomAttribution, ZeroMeanAbcOnAdditive) {
  auto model = *LinearModel::Create(FeatureSpace::Continuous(6), 0, {1, -2, 3, 0.5, -1, 2});
  const Point x{0, 0, 0, 0, 0, 0}, x_ref{1, 1, 1, 1, 1, 1};
  std::vector<double> abc;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    auto order = InsertionOrderFromScores(RandomAttribution(6, seed).scores, "");
    abc.push_back(InsertionCurve(*model, x, x_ref, order)->abc);
  }
  double mean = 0, sq = 0;
  for (double v : abc) mean += v;
  mean /= abc.size();
  for (double v : abc) sq += (v - mean) * (v - mean);
  const double se = std::sqrt(sq / (abc.size() - 1) / abc.size());
  EXPECT_LE(std::abs(mean), 3 * se);
}

TEST(MethodSpec, ParsesNames) {
  auto ks = ParseMethodSpec("ks:sampled:2000");
  ASSERT_TRUE(ks.ok());
  EXPECT_EQ(ks->kind, MethodKind::kKernelShap);
  EXPECT_EQ(ks->ks.mode, KSMode::kSampled);
  EXPECT_EQ(ks->ks.samples, 2000);
  EXPECT_EQ(ks->label, "ks:sampled:2000");
  auto ig = ParseMethodSpec("ig:jump:64");
  ASSERT_TRUE(ig.ok());
  EXPECT_EQ(ig->ig.binary_scheme, BinaryScheme::kJumping);
  EXPECT_EQ(ig->ig.nodes, 64);
  EXPECT_EQ(ParseMethodSpec("lime:300")->lime.samples, 300);
  EXPECT_EQ(ParseMethodSpec("vanilla_grad")->kind, MethodKind::kVanillaGrad);
  EXPECT_FALSE(ParseMethodSpec("deeplift").ok());
  EXPECT_FALSE(ParseMethodSpec("ks:sampled:-4").ok());
}

TEST(MethodSpec, ParsesObjects) {
  auto spec = MethodSpecFromJson(nlohmann::json::parse(
      R"({"name": "lime", "samples": 400, "kernel_width": 2.0, "label": "lime-wide"})"));
  ASSERT_TRUE(spec.ok()) << spec.status();
  EXPECT_EQ(spec->label, "lime-wide");
  EXPECT_EQ(spec->lime.samples, 400);
  EXPECT_EQ(*spec->lime.kernel_width, 2.0);
  EXPECT_FALSE(MethodSpecFromJson(nlohmann::json::parse(R"({"name": "lime", "x": 1})")).ok());
}

TEST(ComputeAttribution, SeedControlsStochasticMethods) {
  auto model = Counterexample();
  auto spec = *ParseMethodSpec("random");
  auto a = ComputeAttribution(spec, *model, {0, 0, 0}, {1, 1, 1}, 3);
  auto b = ComputeAttribution(spec, *model, {0, 0, 0}, {1, 1, 1}, 3);
  auto c = ComputeAttribution(spec, *model, {0, 0, 0}, {1, 1, 1}, 4);
  EXPECT_EQ(a->scores, b->scores);
  EXPECT_NE(a->scores, c->scores);
  EXPECT_EQ(a->method, "random");
}

}  // namespace
}  // namespace abc_bench
