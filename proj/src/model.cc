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

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace abc_bench {

absl::Status Model::CheckBatch(std::span<const Point> batch) const {
  for (size_t i = 0; i < batch.size(); ++i) {
    const Point& p = batch[i];
    if (p.size() != num_features()) {
      return absl::InvalidArgumentError(
          absl::StrCat("batch row ", i, " has ", p.size(),
                       " coordinates, model expects ", num_features()));
    }
    for (int j = 0; j < p.size(); ++j) {
      if (!std::isfinite(p[j])) {
        return absl::InvalidArgumentError(absl::StrCat(
            "batch row ", i, " coordinate ", j + 1, " is not finite"));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> Model::Predict(
    std::span<const Point> batch) const {
  if (auto status = CheckBatch(batch); !status.ok()) return status;
  if (batch.empty()) return std::vector<double>{};
  evaluations_.fetch_add(static_cast<std::int64_t>(batch.size()));
  auto values = DoPredict(batch);
  if (!values.ok()) return values.status();
  if (values->size() != batch.size()) {
    return absl::InternalError(absl::StrCat("model returned ", values->size(),
                                            " values for a batch of ",
                                            batch.size()));
  }
  for (size_t i = 0; i < values->size(); ++i) {
    if (!std::isfinite((*values)[i])) {
      return absl::InternalError(absl::StrCat(
          "model produced a non-finite value for batch row ", i));
    }
  }
  return values;
}

absl::StatusOr<double> Model::PredictOne(const Point& point) const {
  auto values = Predict(std::span<const Point>(&point, 1));
  if (!values.ok()) return values.status();
  return (*values)[0];
}

absl::StatusOr<GradientResult> Model::Gradient(
    std::span<const Point> batch) const {
  if (gradient_capability() != GradientCapability::kAnalytic) {
    return FiniteDifferenceGradient(batch);
  }
  if (auto status = CheckBatch(batch); !status.ok()) return status;
  auto result = DoGradient(batch);
  if (!result.ok()) return result.status();
  if (result->batch != static_cast<int>(batch.size()) ||
      result->n != num_features() ||
      result->values.size() != batch.size() * num_features()) {
    return absl::InternalError("gradient result has the wrong shape");
  }
  for (double g : result->values) {
    if (!std::isfinite(g)) {
      return absl::InternalError("model produced a non-finite gradient");
    }
  }
  return result;
}

absl::StatusOr<GradientResult> Model::FiniteDifferenceGradient(
    std::span<const Point> batch) const {
  if (auto status = CheckBatch(batch); !status.ok()) return status;
  const int n = num_features();
  std::vector<Point> probes;
  probes.reserve(batch.size() * 2 * n);
  for (const Point& p : batch) {
    for (int j = 0; j < n; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(p[j]));
      Point plus = p;
      Point minus = p;
      plus[j] += h;
      minus[j] -= h;
      probes.push_back(std::move(plus));
      probes.push_back(std::move(minus));
    }
  }
  auto values = Predict(probes);
  if (!values.ok()) return values.status();
  GradientResult result{static_cast<int>(batch.size()), n, {}};
  result.values.resize(batch.size() * n);
  for (size_t r = 0; r < batch.size(); ++r) {
    for (int j = 0; j < n; ++j) {
      const size_t k = (r * n + j) * 2;
      // Recompute the step from the perturbed points so the divisor matches
      // the representable difference exactly.
      const double h2 = probes[k][j] - probes[k + 1][j];
      result.values[r * n + j] = ((*values)[k] - (*values)[k + 1]) / h2;
    }
  }
  return result;
}

absl::StatusOr<GradientResult> Model::DoGradient(
    std::span<const Point> /*batch*/) const {
  return absl::UnimplementedError("model has no analytic gradient");
}

// ---------------------------------------------------------------------------
// LinearModel

LinearModel::LinearModel(FeatureSpace space, double intercept,
                         std::vector<double> coefficients)
    : Model(std::move(space)),
      intercept_(intercept),
      coefficients_(std::move(coefficients)) {}

absl::StatusOr<ModelHandle> LinearModel::Create(
    FeatureSpace space, double intercept, std::vector<double> coefficients) {
  if (static_cast<int>(coefficients.size()) != space.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("linear model has ", coefficients.size(),
                     " coefficients for ", space.size(), " features"));
  }
  return std::make_shared<LinearModel>(std::move(space), intercept,
                                       std::move(coefficients));
}

std::string LinearModel::Describe() const {
  return absl::StrCat("linear(", intercept_, "; ",
                      absl::StrJoin(coefficients_, ","), ")");
}

absl::StatusOr<std::vector<double>> LinearModel::DoPredict(
    std::span<const Point> batch) const {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const Point& p : batch) {
    double value = intercept_;
    for (int j = 0; j < p.size(); ++j) value += coefficients_[j] * p[j];
    out.push_back(value);
  }
  return out;
}

absl::StatusOr<GradientResult> LinearModel::DoGradient(
    std::span<const Point> batch) const {
  GradientResult result{static_cast<int>(batch.size()), num_features(), {}};
  result.values.reserve(batch.size() * num_features());
  for (size_t r = 0; r < batch.size(); ++r) {
    result.values.insert(result.values.end(), coefficients_.begin(),
                         coefficients_.end());
  }
  return result;
}

// ---------------------------------------------------------------------------
// MonotoneAdditiveModel

std::string LinkName(Link link) {
  switch (link) {
    case Link::kIdentity:
      return "identity";
    case Link::kLogistic:
      return "logistic";
    case Link::kExp:
      return "exp";
    case Link::kLeakyRelu:
      return "leaky_relu";
  }
  return "unknown";
}

absl::StatusOr<Link> ParseLink(const std::string& name) {
  if (name == "identity") return Link::kIdentity;
  if (name == "logistic") return Link::kLogistic;
  if (name == "exp") return Link::kExp;
  if (name == "leaky_relu") return Link::kLeakyRelu;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown link \"", name, "\" (expected identity, logistic, exp, ",
      "leaky_relu)"));
}

MonotoneAdditiveModel::MonotoneAdditiveModel(FeatureSpace space, Link link,
                                             double intercept,
                                             std::vector<double> coefficients)
    : Model(std::move(space)),
      link_(link),
      intercept_(intercept),
      coefficients_(std::move(coefficients)) {}

absl::StatusOr<ModelHandle> MonotoneAdditiveModel::Create(
    FeatureSpace space, Link link, double intercept,
    std::vector<double> coefficients) {
  if (static_cast<int>(coefficients.size()) != space.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("monotone additive model has ", coefficients.size(),
                     " coefficients for ", space.size(), " features"));
  }
  return std::make_shared<MonotoneAdditiveModel>(std::move(space), link,
                                                 intercept,
                                                 std::move(coefficients));
}

double MonotoneAdditiveModel::ApplyLink(double w) const {
  switch (link_) {
    case Link::kIdentity:
      return w;
    case Link::kLogistic:
      return 1.0 / (1.0 + std::exp(-w));
    case Link::kExp:
      return std::exp(w);
    case Link::kLeakyRelu:
      return w >= 0.0 ? w : kLeakyReluSlope * w;
  }
  return w;
}

double MonotoneAdditiveModel::LinkDerivative(double w) const {
  switch (link_) {
    case Link::kIdentity:
      return 1.0;
    case Link::kLogistic: {
      const double s = 1.0 / (1.0 + std::exp(-w));
      return s * (1.0 - s);
    }
    case Link::kExp:
      return std::exp(w);
    case Link::kLeakyRelu:
      return w >= 0.0 ? 1.0 : kLeakyReluSlope;
  }
  return 1.0;
}

double MonotoneAdditiveModel::Core(const Point& x) const {
  double w = intercept_;
  for (int j = 0; j < x.size(); ++j) w += coefficients_[j] * x[j];
  return w;
}

std::string MonotoneAdditiveModel::Describe() const {
  return absl::StrCat(LinkName(link_), "(", intercept_, "; ",
                      absl::StrJoin(coefficients_, ","), ")");
}

absl::StatusOr<std::vector<double>> MonotoneAdditiveModel::DoPredict(
    std::span<const Point> batch) const {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const Point& p : batch) out.push_back(ApplyLink(Core(p)));
  return out;
}

absl::StatusOr<GradientResult> MonotoneAdditiveModel::DoGradient(
    std::span<const Point> batch) const {
  GradientResult result{static_cast<int>(batch.size()), num_features(), {}};
  result.values.reserve(batch.size() * num_features());
  for (const Point& p : batch) {
    const double scale = LinkDerivative(Core(p));
    for (double c : coefficients_) result.values.push_back(scale * c);
  }
  return result;
}

// ---------------------------------------------------------------------------
// MultilinearModel

MultilinearModel::MultilinearModel(FeatureSpace space, std::vector<Term> terms)
    : Model(std::move(space)), terms_(std::move(terms)) {}

absl::StatusOr<ModelHandle> MultilinearModel::Create(FeatureSpace space,
                                                     std::vector<Term> terms) {
  if (space.size() > kMaxSubsetFeatures) {
    return absl::InvalidArgumentError(
        absl::StrCat("multilinear model supports at most ",
                     kMaxSubsetFeatures, " features"));
  }
  // Merge duplicate subsets so coefficient() is well defined.
  std::vector<Term> merged;
  for (const auto& [u, c] : terms) {
    if (!u.FitsIn(space.size())) {
      return absl::InvalidArgumentError(absl::StrCat(
          "term ", u.FormatOneBased(), " exceeds n=", space.size()));
    }
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Term& t) { return t.first == u; });
    if (it == merged.end()) {
      merged.emplace_back(u, c);
    } else {
      it->second += c;
    }
  }
  return std::make_shared<MultilinearModel>(std::move(space),
                                            std::move(merged));
}

double MultilinearModel::coefficient(SubsetMask u) const {
  for (const auto& [v, c] : terms_) {
    if (v == u) return c;
  }
  return 0.0;
}

std::string MultilinearModel::Describe() const {
  std::vector<std::string> parts;
  for (const auto& [u, c] : terms_) {
    parts.push_back(absl::StrCat(u.FormatOneBased(), "=", c));
  }
  return absl::StrCat("multilinear(", num_features(), "; ",
                      absl::StrJoin(parts, ","), ")");
}

double MultilinearModel::Evaluate(const Point& x) const {
  double value = 0.0;
  for (const auto& [u, c] : terms_) {
    double term = c;
    for (int j : u.Members()) term *= x[j];
    value += term;
  }
  return value;
}

absl::StatusOr<std::vector<double>> MultilinearModel::DoPredict(
    std::span<const Point> batch) const {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const Point& p : batch) out.push_back(Evaluate(p));
  return out;
}

absl::StatusOr<GradientResult> MultilinearModel::DoGradient(
    std::span<const Point> batch) const {
  const int n = num_features();
  GradientResult result{static_cast<int>(batch.size()), n, {}};
  result.values.assign(batch.size() * n, 0.0);
  for (size_t r = 0; r < batch.size(); ++r) {
    const Point& p = batch[r];
    for (const auto& [u, c] : terms_) {
      const std::vector<int> members = u.Members();
      for (int j : members) {
        double partial = c;
        for (int k : members) {
          if (k != j) partial *= p[k];
        }
        result.values[r * n + j] += partial;
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// TabularInterpolantModel

TabularInterpolantModel::TabularInterpolantModel(
    FeatureSpace space, std::vector<double> table,
    std::vector<double> continuous_coefficients)
    : Model(std::move(space)),
      table_(std::move(table)),
      continuous_coefficients_(std::move(continuous_coefficients)) {
  for (int j = 0; j < num_features(); ++j) {
    (this->space().is_binary(j) ? binary_ : continuous_).push_back(j);
  }
}

absl::StatusOr<ModelHandle> TabularInterpolantModel::Create(
    FeatureSpace space, std::vector<double> table,
    std::vector<double> continuous_coefficients) {
  const int m = space.num_binary();
  if (m > 20) {
    return absl::InvalidArgumentError(
        "tabular interpolant supports at most 20 binary dimensions");
  }
  if (table.size() != (size_t{1} << m)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tabular interpolant needs 2^", m, "=", size_t{1} << m,
                     " corner values, got ", table.size()));
  }
  if (static_cast<int>(continuous_coefficients.size()) != space.size() - m) {
    return absl::InvalidArgumentError(absl::StrCat(
        "tabular interpolant needs ", space.size() - m,
        " continuous coefficients, got ", continuous_coefficients.size()));
  }
  return std::make_shared<TabularInterpolantModel>(
      std::move(space), std::move(table), std::move(continuous_coefficients));
}

std::string TabularInterpolantModel::Describe() const {
  return absl::StrCat("tabular(m=", binary_.size(), "; table=",
                      absl::StrJoin(table_, ","), "; continuous=",
                      absl::StrJoin(continuous_coefficients_, ","), ")");
}

double TabularInterpolantModel::Interpolate(const Point& x, int pinned,
                                            double pinned_value) const {
  // Fold one binary dimension at a time: the highest bit first.
  std::vector<double> work = table_;
  for (int i = static_cast<int>(binary_.size()) - 1; i >= 0; --i) {
    const double t = (i == pinned) ? pinned_value : x[binary_[i]];
    const size_t half = size_t{1} << i;
    for (size_t c = 0; c < half; ++c) {
      work[c] = (1.0 - t) * work[c] + t * work[c + half];
    }
  }
  return work[0];
}

absl::StatusOr<std::vector<double>> TabularInterpolantModel::DoPredict(
    std::span<const Point> batch) const {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const Point& p : batch) {
    double value = Interpolate(p);
    for (size_t k = 0; k < continuous_.size(); ++k) {
      value += continuous_coefficients_[k] * p[continuous_[k]];
    }
    out.push_back(value);
  }
  return out;
}

absl::StatusOr<GradientResult> TabularInterpolantModel::DoGradient(
    std::span<const Point> batch) const {
  const int n = num_features();
  GradientResult result{static_cast<int>(batch.size()), n, {}};
  result.values.assign(batch.size() * n, 0.0);
  for (size_t r = 0; r < batch.size(); ++r) {
    const Point& p = batch[r];
    // The interpolant is affine in each binary coordinate.
    for (size_t i = 0; i < binary_.size(); ++i) {
      const int ii = static_cast<int>(i);
      result.values[r * n + binary_[i]] =
          Interpolate(p, ii, 1.0) - Interpolate(p, ii, 0.0);
    }
    for (size_t k = 0; k < continuous_.size(); ++k) {
      result.values[r * n + continuous_[k]] = continuous_coefficients_[k];
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// FunctionModel

FunctionModel::FunctionModel(FeatureSpace space, std::string name,
                             std::function<double(std::span<const double>)> fn)
    : Model(std::move(space)), name_(std::move(name)), fn_(std::move(fn)) {}

absl::StatusOr<std::vector<double>> FunctionModel::DoPredict(
    std::span<const Point> batch) const {
  std::vector<double> out;
  out.reserve(batch.size());
  for (const Point& p : batch) out.push_back(fn_(p.values()));
  return out;
}

}  // namespace abc_bench
