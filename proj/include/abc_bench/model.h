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

// Black-box regression models f: X -> R.
//
// Every model exposes batched prediction and a gradient. Builtin families
// provide analytic gradients; anything else falls back to central finite
// differences on top of Predict(). Binary dimensions are evaluated on the
// relaxed domain [0, 1] (and beyond) without complaint.

#ifndef ABC_BENCH_MODEL_H_
#define ABC_BENCH_MODEL_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "abc_bench/feature_space.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace abc_bench {

enum class ModelKind { kBuiltin, kExternal };
enum class GradientCapability { kAnalytic, kFiniteDifference };

// Row-major batch x n matrix of partial derivatives.
struct GradientResult {
  int batch = 0;
  int n = 0;
  std::vector<double> values;

  double at(int row, int j) const { return values[row * n + j]; }
  std::span<const double> row(int r) const {
    return std::span<const double>(values).subspan(r * n, n);
  }
};

class Model {
 public:
  explicit Model(FeatureSpace space) : space_(std::move(space)) {}
  virtual ~Model() = default;

  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  const FeatureSpace& space() const { return space_; }
  int num_features() const { return space_.size(); }

  virtual ModelKind kind() const { return ModelKind::kBuiltin; }
  virtual GradientCapability gradient_capability() const {
    return GradientCapability::kFiniteDifference;
  }
  virtual std::string Describe() const = 0;

  // One finite value per point. Points must have n finite coordinates.
  absl::StatusOr<std::vector<double>> Predict(std::span<const Point> batch) const;
  absl::StatusOr<double> PredictOne(const Point& point) const;

  // Analytic when available, otherwise central finite differences.
  absl::StatusOr<GradientResult> Gradient(std::span<const Point> batch) const;

  // Always finite differences, regardless of capability. Step for coordinate
  // j is 1e-5 * max(1, |x_j|).
  absl::StatusOr<GradientResult> FiniteDifferenceGradient(
      std::span<const Point> batch) const;

  // Total number of points passed through Predict() so far.
  std::int64_t evaluation_count() const { return evaluations_.load(); }

 protected:
  virtual absl::StatusOr<std::vector<double>> DoPredict(
      std::span<const Point> batch) const = 0;
  // Only called when gradient_capability() is kAnalytic.
  virtual absl::StatusOr<GradientResult> DoGradient(
      std::span<const Point> batch) const;

 private:
  absl::Status CheckBatch(std::span<const Point> batch) const;

  FeatureSpace space_;
  mutable std::atomic<std::int64_t> evaluations_{0};
};

using ModelHandle = std::shared_ptr<const Model>;

// f(x) = intercept + sum_j coefficients_j x_j.
class LinearModel : public Model {
 public:
  LinearModel(FeatureSpace space, double intercept,
              std::vector<double> coefficients);
  static absl::StatusOr<ModelHandle> Create(FeatureSpace space,
                                            double intercept,
                                            std::vector<double> coefficients);

  double intercept() const { return intercept_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  GradientCapability gradient_capability() const override {
    return GradientCapability::kAnalytic;
  }
  std::string Describe() const override;

 protected:
  absl::StatusOr<std::vector<double>> DoPredict(
      std::span<const Point> batch) const override;
  absl::StatusOr<GradientResult> DoGradient(
      std::span<const Point> batch) const override;

 private:
  double intercept_;
  std::vector<double> coefficients_;
};

enum class Link { kIdentity, kLogistic, kExp, kLeakyRelu };

std::string LinkName(Link link);
absl::StatusOr<Link> ParseLink(const std::string& name);

// Negative-side slope of the leaky ReLU link.
inline constexpr double kLeakyReluSlope = 0.01;

// f(x) = h(gamma_0 + sum_j gamma_j x_j) for a strictly increasing link h.
class MonotoneAdditiveModel : public Model {
 public:
  MonotoneAdditiveModel(FeatureSpace space, Link link, double intercept,
                        std::vector<double> coefficients);
  static absl::StatusOr<ModelHandle> Create(FeatureSpace space, Link link,
                                            double intercept,
                                            std::vector<double> coefficients);

  Link link() const { return link_; }
  double intercept() const { return intercept_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  // h(w) and h'(w). The leaky ReLU derivative at 0 is taken as 1.
  double ApplyLink(double w) const;
  double LinkDerivative(double w) const;

  GradientCapability gradient_capability() const override {
    return GradientCapability::kAnalytic;
  }
  std::string Describe() const override;

 protected:
  absl::StatusOr<std::vector<double>> DoPredict(
      std::span<const Point> batch) const override;
  absl::StatusOr<GradientResult> DoGradient(
      std::span<const Point> batch) const override;

 private:
  double Core(const Point& x) const;

  Link link_;
  double intercept_;
  std::vector<double> coefficients_;
};

// f(x) = sum_u c_u prod_{j in u} x_j over a sparse coefficient table.
class MultilinearModel : public Model {
 public:
  using Term = std::pair<SubsetMask, double>;

  MultilinearModel(FeatureSpace space, std::vector<Term> terms);
  static absl::StatusOr<ModelHandle> Create(FeatureSpace space,
                                            std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  // Coefficient of u; 0 when absent.
  double coefficient(SubsetMask u) const;

  GradientCapability gradient_capability() const override {
    return GradientCapability::kAnalytic;
  }
  std::string Describe() const override;

 protected:
  absl::StatusOr<std::vector<double>> DoPredict(
      std::span<const Point> batch) const override;
  absl::StatusOr<GradientResult> DoGradient(
      std::span<const Point> batch) const override;

 private:
  double Evaluate(const Point& x) const;

  std::vector<Term> terms_;
};

// Multilinear interpolation of a table given at all 2^m corners of the binary
// dimensions, plus a linear term in the continuous dimensions:
//
//   f(x) = sum_c T[c] prod_{b in c} x_b prod_{b not in c} (1 - x_b)
//          + sum_{k continuous} w_k x_k
//
// Corner c is a bitmask over the binary dimensions taken in ascending index
// order (bit i <-> i-th binary dimension).
class TabularInterpolantModel : public Model {
 public:
  TabularInterpolantModel(FeatureSpace space, std::vector<double> table,
                          std::vector<double> continuous_coefficients);
  static absl::StatusOr<ModelHandle> Create(
      FeatureSpace space, std::vector<double> table,
      std::vector<double> continuous_coefficients);

  GradientCapability gradient_capability() const override {
    return GradientCapability::kAnalytic;
  }
  std::string Describe() const override;

 protected:
  absl::StatusOr<std::vector<double>> DoPredict(
      std::span<const Point> batch) const override;
  absl::StatusOr<GradientResult> DoGradient(
      std::span<const Point> batch) const override;

 private:
  // Interpolates the table at the binary coordinates of x, optionally with
  // binary dimension `pinned` forced to `pinned_value`.
  double Interpolate(const Point& x, int pinned = -1,
                     double pinned_value = 0.0) const;

  std::vector<int> binary_;
  std::vector<int> continuous_;
  std::vector<double> table_;
  std::vector<double> continuous_coefficients_;
};

// Evaluates f on a plain function; used by tests and the synthetic generator.
// No analytic gradient.
class FunctionModel : public Model {
 public:
  FunctionModel(FeatureSpace space, std::string name,
                std::function<double(std::span<const double>)> fn);

  std::string Describe() const override { return name_; }

 protected:
  absl::StatusOr<std::vector<double>> DoPredict(
      std::span<const Point> batch) const override;

 private:
  std::string name_;
  std::function<double(std::span<const double>)> fn_;
};

}  // namespace abc_bench

#endif  // ABC_BENCH_MODEL_H_
