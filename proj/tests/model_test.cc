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

#include "abc_bench/model.h"

#include <cmath>
#include <random>

#include "abc_bench/anchored_decomposition.h"
#include "abc_bench/external_model.h"
#include "abc_bench/model_spec.h"
#include "abc_bench/synthetic.h"
#include "gtest/gtest.h"

namespace abc_bench {
namespace {

ModelHandle CounterexampleModel() {
  return *MultilinearModel::Create(FeatureSpace::Continuous(3),
                                   {{SubsetMask::Of({0}), 3.0},
                                    {SubsetMask::Of({1}), 2.0},
                                    {SubsetMask::Of({2}), 1.0},
                                    {SubsetMask::Of({0, 1}), -1.5}});
}

TEST(Predict, SpecExamples) {
  auto linear = LinearModel::Create(FeatureSpace::Continuous(2), 1.0, {2, 3});
  ASSERT_TRUE(linear.ok());
  EXPECT_DOUBLE_EQ(*(*linear)->PredictOne({0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(*CounterexampleModel()->PredictOne({1, 1, 0}), 3.5);
  auto logistic = MonotoneAdditiveModel::Create(FeatureSpace::Continuous(1),
                                                Link::kLogistic, 0.0, {1.0});
  ASSERT_TRUE(logistic.ok());
  EXPECT_DOUBLE_EQ(*(*logistic)->PredictOne({0}), 0.5);
}

TEST(Predict, RejectsBadPoints) {
  auto linear = *LinearModel::Create(FeatureSpace::Continuous(2), 1.0, {2, 3});
  EXPECT_FALSE(linear->PredictOne({0}).ok());
  EXPECT_FALSE(linear->PredictOne({0, INFINITY}).ok());
}

TEST(Predict, CountsEvaluations) {
  auto linear = *LinearModel::Create(FeatureSpace::Continuous(2), 0.0, {1, 1});
  std::vector<Point> batch = {{1, 2}, {3, 4}, {5, 6}};
  ASSERT_TRUE(linear->Predict(batch).ok());
  EXPECT_EQ(linear->evaluation_count(), 3);
}

TEST(Gradient, SpecExamples) {
  auto linear = *LinearModel::Create(FeatureSpace::Continuous(2), 4.0, {2, 3});
  std::vector<Point> at = {{7, -1}};
  auto g = linear->Gradient(at);
  ASSERT_TRUE(g.ok());
  EXPECT_DOUBLE_EQ(g->at(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(g->at(0, 1), 3.0);

  auto logistic = *MonotoneAdditiveModel::Create(FeatureSpace::Continuous(1),
                                                 Link::kLogistic, 0.0, {1.0});
  std::vector<Point> origin = {{0}};
  EXPECT_DOUBLE_EQ(logistic->Gradient(origin)->at(0, 0), 0.25);

  auto model = CounterexampleModel();
  std::vector<Point> corner = {{1, 1, 0}};
  auto analytic = model->Gradient(corner);
  auto numeric = model->FiniteDifferenceGradient(corner);
  ASSERT_TRUE(analytic.ok() && numeric.ok());
  EXPECT_DOUBLE_EQ(analytic->at(0, 0), 1.5);
  EXPECT_NEAR(numeric->at(0, 0), 1.5, 1e-6);
}

// Finite differences agree with every analytic gradient at random points.
TEST(Gradient, FiniteDifferencesMatchAnalytic) {
  std::mt19937_64 rng(11);
  auto space = *FeatureSpace::Create({FeatureKind::kContinuous, FeatureKind::kBinary,
                                      FeatureKind::kContinuous, FeatureKind::kBinary});
  std::vector<ModelHandle> models = {
      RandomMultilinear(space, rng),
      RandomMonotoneAdditive(space, Link::kLogistic, rng),
      RandomMonotoneAdditive(space, Link::kExp, rng),
      RandomMonotoneAdditive(space, Link::kIdentity, rng),
      *TabularInterpolantModel::Create(space, {1, -2, 3, 0.5}, {0.7, -1.1}),
      *LinearModel::Create(space, 0.3, {1, 2, 3, 4}),
  };
  for (const ModelHandle& model : models) {
    std::vector<Point> points;
    for (int k = 0; k < 100; ++k) {
      Point p = RandomPoint(space, rng);
      // Relaxed binary values keep the check away from kinks.
      for (int j : space.BinaryIndices()) p[j] = 0.2 + 0.6 * (p[j] + 0.1) / 1.2;
      points.push_back(p);
    }
    auto analytic = model->Gradient(points);
    auto numeric = model->FiniteDifferenceGradient(points);
    ASSERT_TRUE(analytic.ok() && numeric.ok()) << model->Describe();
    for (size_t i = 0; i < analytic->values.size(); ++i) {
      const double a = analytic->values[i], b = numeric->values[i];
      EXPECT_LE(std::abs(a - b), 1e-5 * std::max(1.0, std::abs(a)))
          << model->Describe();
    }
  }
}

TEST(Gradient, LeakyReluAwayFromKink) {
  auto model = *MonotoneAdditiveModel::Create(FeatureSpace::Continuous(2),
                                              Link::kLeakyRelu, 0.0, {1, 2});
  std::vector<Point> points = {{-1, -1}, {1, 1}};
  auto g = model->Gradient(points);
  ASSERT_TRUE(g.ok());
  EXPECT_DOUBLE_EQ(g->at(0, 1), 2 * kLeakyReluSlope);
  EXPECT_DOUBLE_EQ(g->at(1, 1), 2.0);
}

// coefficients -> f -> deltas -> coefficients on the unit cube.
TEST(Multilinear, CornerRoundTripThroughDecomposition) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n) {
    const FeatureSpace space = FeatureSpace::Continuous(n);
    auto model = RandomMultilinear(space, rng);
    auto d = Decompose(*model, Point(std::vector<double>(n, 0.0)),
                       Point(std::vector<double>(n, 1.0)));
    ASSERT_TRUE(d.ok());
    const auto& ml = dynamic_cast<const MultilinearModel&>(*model);
    for (std::uint32_t u = 0; u < (1u << n); ++u) {
      EXPECT_NEAR(d->delta(SubsetMask(u)), ml.coefficient(SubsetMask(u)), 1e-10);
    }
  }
}

TEST(Tabular, InterpolatesCorners) {
  auto space = *FeatureSpace::Create({FeatureKind::kBinary, FeatureKind::kBinary,
                                      FeatureKind::kContinuous});
  auto model = *TabularInterpolantModel::Create(space, {1, 2, 3, 5}, {10});
  EXPECT_DOUBLE_EQ(*model->PredictOne({0, 0, 0}), 1);
  EXPECT_DOUBLE_EQ(*model->PredictOne({1, 0, 0}), 2);
  EXPECT_DOUBLE_EQ(*model->PredictOne({0, 1, 0}), 3);
  EXPECT_DOUBLE_EQ(*model->PredictOne({1, 1, 1}), 15);
  EXPECT_DOUBLE_EQ(*model->PredictOne({0.5, 0.5, 0}), 2.75);
  EXPECT_FALSE(TabularInterpolantModel::Create(space, {1, 2, 3}, {10}).ok());
}

TEST(ModelSpec, ParsesCompactForms) {
  auto linear = ParseModelSpec("linear:1:2,3");
  ASSERT_TRUE(linear.ok());
  EXPECT_DOUBLE_EQ(*(*linear)->PredictOne({1, 1}), 6);
  auto ml = ParseModelSpec("multilinear:3:1=3,2=2,3=1,1+2=-1.5");
  ASSERT_TRUE(ml.ok());
  EXPECT_DOUBLE_EQ(*(*ml)->PredictOne({1, 1, 0}), 3.5);
  auto logistic = ParseModelSpec("logistic:0:1");
  ASSERT_TRUE(logistic.ok());
  EXPECT_DOUBLE_EQ(*(*logistic)->PredictOne({0}), 0.5);
  EXPECT_FALSE(ParseModelSpec("cubic:0:1").ok());
  EXPECT_FALSE(ParseModelSpec("multilinear:2:3=1").ok());
  EXPECT_FALSE(ParseModelSpec("linear:1:2,3", FeatureSpace::Continuous(3)).ok());
}

TEST(ModelSpec, ParsesJsonForms) {
  auto model = ModelFromJson(nlohmann::json::parse(
      R"({"kind": "multilinear", "n": 2, "terms": [{"features": [1, 2], "coefficient": 4}]})"));
  ASSERT_TRUE(model.ok());
  EXPECT_DOUBLE_EQ(*(*model)->PredictOne({0.5, 0.5}), 1.0);
  EXPECT_FALSE(ModelFromJson(nlohmann::json::parse(
                                 R"({"kind": "linear", "coefficients": [1], "bogus": 1})"))
                   .ok());
}

std::string Server(const std::string& flags = "") {
  return std::string(FAKE_MODEL_SERVER) + " " + flags;
}

TEST(External, PredictsSums) {
  auto model = ConnectExternal(Server(), FeatureSpace::Continuous(2));
  ASSERT_TRUE(model.ok()) << model.status();
  std::vector<Point> batch = {{1, 2}, {0, 0}};
  auto values = (*model)->Predict(batch);
  ASSERT_TRUE(values.ok());
  EXPECT_EQ(*values, (std::vector<double>{3, 0}));
  EXPECT_EQ((*model)->gradient_capability(), GradientCapability::kFiniteDifference);
}

TEST(External, BatchesLargeRequests) {
  ExternalModelOptions options;
  options.batch_size = 7;
  auto model = ConnectExternal(Server(), FeatureSpace::Continuous(3), options);
  ASSERT_TRUE(model.ok());
  std::vector<Point> batch;
  for (int i = 0; i < 50; ++i) batch.push_back({double(i), 1, 1});
  auto values = (*model)->Predict(batch);
  ASSERT_TRUE(values.ok());
  for (int i = 0; i < 50; ++i) EXPECT_EQ((*values)[i], i + 2);
}

TEST(External, UsesServerGradients) {
  auto model = ConnectExternal(Server("--gradients"), FeatureSpace::Continuous(2));
  ASSERT_TRUE(model.ok());
  EXPECT_EQ((*model)->gradient_capability(), GradientCapability::kAnalytic);
  std::vector<Point> batch = {{1, 2}};
  const std::int64_t before = (*model)->evaluation_count();
  auto g = (*model)->Gradient(batch);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->values, (std::vector<double>{1, 1}));
  // No predict calls were spent on finite differences.
  EXPECT_EQ((*model)->evaluation_count(), before);
}

TEST(External, ServerDeathIsAProtocolError) {
  ExternalModelOptions options;
  options.probe_determinism = false;
  auto model = ConnectExternal(Server("--die-after 2"), FeatureSpace::Continuous(2),
                               options);
  ASSERT_TRUE(model.ok());
  std::vector<Point> batch = {{1, 2}};
  EXPECT_TRUE((*model)->Predict(batch).ok());
  auto failed = (*model)->Predict(batch);
  EXPECT_FALSE(failed.ok());
  // The handle stays broken.
  EXPECT_FALSE((*model)->Predict(batch).ok());
}

TEST(External, DeterminismProbeRejectsDrift) {
  auto model = ConnectExternal(Server("--nondeterministic"), FeatureSpace::Continuous(2));
  EXPECT_FALSE(model.ok());
}

TEST(External, MismatchedIdIsAProtocolError) {
  auto model = ConnectExternal(Server("--bad-id"), FeatureSpace::Continuous(2));
  EXPECT_FALSE(model.ok());
}

TEST(External, RejectedHandshakeAndNonFiniteOutput) {
  EXPECT_FALSE(ConnectExternal(Server("--reject"), FeatureSpace::Continuous(2)).ok());
  ExternalModelOptions options;
  options.probe_determinism = false;
  auto model = ConnectExternal(Server("--nan"), FeatureSpace::Continuous(2), options);
  ASSERT_TRUE(model.ok());
  std::vector<Point> batch = {{1, 2}};
  EXPECT_FALSE((*model)->Predict(batch).ok());
}

TEST(External, SpawnFailure) {
  EXPECT_FALSE(ConnectExternal("/nonexistent/model-server", FeatureSpace::Continuous(2)).ok());
}

}  // namespace
}  // namespace abc_bench
