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

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "abc_bench/anchored_decomposition.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace abc_bench {
namespace {

using nlohmann::json;

// Points per Predict() call for the sampling-heavy methods.
constexpr std::size_t kEvalChunk = 8192;

absl::Status CheckTriple(const Model& model, const Point& x,
                         const Point& x_ref) {
  if (auto s = ValidatePoint(model.space(), x); !s.ok()) return s;
  if (auto s = ValidatePoint(model.space(), x_ref); !s.ok()) return s;
  return absl::OkStatus();
}

// Solves a small symmetric positive (semi)definite system, rejecting
// numerically singular matrices.
absl::StatusOr<Eigen::VectorXd> SolveNormalEquations(const Eigen::MatrixXd& a,
                                                     const Eigen::VectorXd& b,
                                                     const std::string& what) {
  if (a.rows() == 0) return Eigen::VectorXd();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.rcond() < 1e-13) {
    return absl::FailedPreconditionError(absl::StrCat(
        what, ": regression system is singular (too few or degenerate "
              "samples)"));
  }
  Eigen::VectorXd solution = ldlt.solve(b);
  if (!solution.allFinite()) {
    return absl::FailedPreconditionError(
        absl::StrCat(what, ": regression produced non-finite coefficients"));
  }
  return solution;
}

// Evaluates f at hybrid points x_ref_w : x_{-w} for the given masks.
absl::StatusOr<std::vector<double>> EvaluateCoalitions(
    const Model& model, const Point& x, const Point& x_ref,
    const std::vector<std::uint32_t>& masks) {
  std::vector<double> out;
  out.reserve(masks.size());
  std::vector<Point> batch;
  for (std::size_t start = 0; start < masks.size(); start += kEvalChunk) {
    const std::size_t end = std::min(masks.size(), start + kEvalChunk);
    batch.assign(end - start, x);
    for (std::size_t i = start; i < end; ++i) {
      AssembleHybridInto(x, x_ref, SubsetMask(masks[i]), &batch[i - start]);
    }
    auto values = model.Predict(batch);
    if (!values.ok()) return values.status();
    out.insert(out.end(), values->begin(), values->end());
  }
  return out;
}

// Multilinear interpolation of `table` (2^m corner values) at `coords`.
double InterpolateCorners(std::vector<double> table,
                          std::span<const double> coords) {
  for (int i = static_cast<int>(coords.size()) - 1; i >= 0; --i) {
    const double t = coords[i];
    const std::size_t half = std::size_t{1} << i;
    for (std::size_t c = 0; c < half; ++c) {
      table[c] = (1.0 - t) * table[c] + t * table[c + half];
    }
  }
  return table[0];
}

// Corner weights prod_{i in u} p_i prod_{i not in u} (1 - p_i).
std::vector<double> CornerWeights(std::span<const double> coords) {
  std::vector<double> w(std::size_t{1} << coords.size(), 0.0);
  w[0] = 1.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const std::size_t half = std::size_t{1} << i;
    for (std::size_t u = 0; u < half; ++u) {
      w[u | half] = w[u] * coords[i];
      w[u] *= 1.0 - coords[i];
    }
  }
  return w;
}

std::vector<double> NodePositions(int nodes) {
  std::vector<double> t(nodes);
  for (int k = 0; k < nodes; ++k) t[k] = (k + 0.5) / nodes;
  return t;
}

Point PathPoint(const Point& x, const Point& x_ref, double t) {
  Point p = x;
  for (int j = 0; j < p.size(); ++j) p[j] = x[j] + t * (x_ref[j] - x[j]);
  return p;
}

absl::StatusOr<AttributionVector> IgCasting(const Model& model, const Point& x,
                                            const Point& x_ref,
                                            const IGConfig& cfg) {
  const int n = model.num_features();
  std::vector<Point> path;
  path.reserve(cfg.nodes);
  for (double t : NodePositions(cfg.nodes)) path.push_back(PathPoint(x, x_ref, t));
  auto grads = model.Gradient(path);
  if (!grads.ok()) return grads.status();
  AttributionVector out{"ig:cast", std::vector<double>(n, 0.0), {}};
  for (int k = 0; k < cfg.nodes; ++k) {
    for (int j = 0; j < n; ++j) out.scores[j] += grads->at(k, j);
  }
  for (int j = 0; j < n; ++j) {
    out.scores[j] *= (x_ref[j] - x[j]) / cfg.nodes;
  }
  return out;
}

absl::StatusOr<AttributionVector> IgInterpolating(const Model& model,
                                                  const Point& x,
                                                  const Point& x_ref,
                                                  const IGConfig& cfg) {
  const int n = model.num_features();
  const std::vector<int> binary = model.space().BinaryIndices();
  const int m = static_cast<int>(binary.size());
  if (m > kMaxInterpolatingBinary) {
    return absl::InvalidArgumentError(
        absl::StrCat("interpolating scheme supports at most ",
                     kMaxInterpolatingBinary, " binary features; got ", m));
  }
  std::vector<int> continuous;
  for (int j = 0; j < n; ++j) {
    if (!model.space().is_binary(j)) continuous.push_back(j);
  }
  const std::size_t corners = std::size_t{1} << m;

  // f at the binary corners with the continuous part of `base`.
  auto corner_points = [&](const Point& base) {
    std::vector<Point> points(corners, base);
    for (std::size_t u = 0; u < corners; ++u) {
      for (int i = 0; i < m; ++i) points[u][binary[i]] = (u >> i) & 1u;
    }
    return points;
  };

  AttributionVector out{"ig:interp", std::vector<double>(n, 0.0), {}};
  std::vector<double> fixed_table;
  if (continuous.empty()) {
    // Corner values do not move along the path.
    auto values = model.Predict(corner_points(x));
    if (!values.ok()) return values.status();
    fixed_table = *std::move(values);
  }

  std::vector<double> coords(m);
  for (double t : NodePositions(cfg.nodes)) {
    const Point p = PathPoint(x, x_ref, t);
    for (int i = 0; i < m; ++i) coords[i] = p[binary[i]];
    std::vector<double> table = fixed_table;
    std::vector<Point> points;
    if (!continuous.empty()) {
      points = corner_points(p);
      auto values = model.Predict(points);
      if (!values.ok()) return values.status();
      table = *std::move(values);
    }
    // The interpolant is affine in each binary coordinate.
    for (int i = 0; i < m; ++i) {
      std::vector<double> pinned = coords;
      pinned[i] = 1.0;
      const double high = InterpolateCorners(table, pinned);
      pinned[i] = 0.0;
      const double low = InterpolateCorners(table, pinned);
      out.scores[binary[i]] += high - low;
    }
    if (!continuous.empty()) {
      auto grads = model.Gradient(points);
      if (!grads.ok()) return grads.status();
      const std::vector<double> weights = CornerWeights(coords);
      for (int c : continuous) {
        double partial = 0.0;
        for (std::size_t u = 0; u < corners; ++u) {
          partial += weights[u] * grads->at(static_cast<int>(u), c);
        }
        out.scores[c] += partial;
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    out.scores[j] *= (x_ref[j] - x[j]) / cfg.nodes;
  }
  out.metadata["corner_evaluations"] =
      static_cast<double>(corners) * (continuous.empty() ? 1 : cfg.nodes);
  return out;
}

absl::StatusOr<AttributionVector> IgJumping(const Model& model, const Point& x,
                                            const Point& x_ref,
                                            const IGConfig& cfg) {
  const int n = model.num_features();
  const std::vector<int> binary = model.space().BinaryIndices();
  AttributionVector out{"ig:jump", std::vector<double>(n, 0.0), {}};

  // Continuous coordinates move along the segment; binary coordinates sit at
  // x before the jump position and at x_ref after it.
  auto state_at = [&](double t) {
    Point p = PathPoint(x, x_ref, t);
    for (int j : binary) p[j] = t < cfg.jump_position ? x[j] : x_ref[j];
    return p;
  };

  if (static_cast<int>(binary.size()) < n) {
    std::vector<Point> path;
    path.reserve(cfg.nodes);
    for (double t : NodePositions(cfg.nodes)) path.push_back(state_at(t));
    auto grads = model.Gradient(path);
    if (!grads.ok()) return grads.status();
    for (int j = 0; j < n; ++j) {
      if (model.space().is_binary(j)) continue;
      double total = 0.0;
      for (int k = 0; k < cfg.nodes; ++k) total += grads->at(k, j);
      out.scores[j] = (x_ref[j] - x[j]) * total / cfg.nodes;
    }
  }

  if (!binary.empty()) {
    // Jumps execute one after another at the same continuous position.
    std::vector<Point> sequence;
    Point current = PathPoint(x, x_ref, cfg.jump_position);
    for (int j : binary) current[j] = x[j];
    sequence.push_back(current);
    for (int j : binary) {
      current[j] = x_ref[j];
      sequence.push_back(current);
    }
    auto values = model.Predict(sequence);
    if (!values.ok()) return values.status();
    for (size_t i = 0; i < binary.size(); ++i) {
      out.scores[binary[i]] = (*values)[i + 1] - (*values)[i];
    }
  }
  out.metadata["jump_position"] = cfg.jump_position;
  return out;
}

}  // namespace

double AttributionVector::sum() const {
  return std::accumulate(scores.begin(), scores.end(), 0.0);
}

std::string BinarySchemeName(BinaryScheme scheme) {
  switch (scheme) {
    case BinaryScheme::kCasting:
      return "cast";
    case BinaryScheme::kInterpolating:
      return "interp";
    case BinaryScheme::kJumping:
      return "jump";
  }
  return "unknown";
}

absl::StatusOr<AttributionVector> ExactShapley(const Model& model,
                                               const Point& x,
                                               const Point& x_ref) {
  if (auto s = CheckTriple(model, x, x_ref); !s.ok()) return s;
  auto d = Decompose(model, x, x_ref);
  if (!d.ok()) return d.status();
  AttributionVector out{"shapley", ShapleyFromDividends(*d), {}};
  out.metadata["evaluations"] = std::ldexp(1.0, model.num_features());
  return out;
}

absl::StatusOr<AttributionVector> IntegratedGradients(const Model& model,
                                                      const Point& x,
                                                      const Point& x_ref,
                                                      const IGConfig& cfg) {
  if (auto s = CheckTriple(model, x, x_ref); !s.ok()) return s;
  if (cfg.nodes < 1) {
    return absl::InvalidArgumentError("IG needs at least one node");
  }
  if (!(cfg.jump_position > 0.0 && cfg.jump_position < 1.0)) {
    return absl::InvalidArgumentError("jump_position must lie in (0, 1)");
  }
  absl::StatusOr<AttributionVector> out;
  switch (cfg.binary_scheme) {
    case BinaryScheme::kCasting:
      out = IgCasting(model, x, x_ref, cfg);
      break;
    case BinaryScheme::kInterpolating:
      out = IgInterpolating(model, x, x_ref, cfg);
      break;
    case BinaryScheme::kJumping:
      out = IgJumping(model, x, x_ref, cfg);
      break;
  }
  if (out.ok()) out->metadata["nodes"] = cfg.nodes;
  return out;
}

absl::StatusOr<AttributionVector> KernelShap(const Model& model,
                                             const Point& x,
                                             const Point& x_ref,
                                             const KSConfig& cfg) {
  if (auto s = CheckTriple(model, x, x_ref); !s.ok()) return s;
  const int n = model.num_features();
  const bool exact = cfg.mode == KSMode::kExact;
  if (exact && n > kMaxExactKernelShapFeatures) {
    return absl::InvalidArgumentError(
        absl::StrCat("exact Kernel SHAP supports n <= ",
                     kMaxExactKernelShapFeatures, "; got n=", n));
  }
  if (!exact && cfg.samples < 1) {
    return absl::InvalidArgumentError("sampled Kernel SHAP needs samples >= 1");
  }
  if (!exact && n > 31) {
    return absl::InvalidArgumentError("sampled Kernel SHAP supports n <= 31");
  }

  const std::uint32_t full = SubsetMask::Full(n).bits();
  std::vector<std::uint32_t> masks = {0u, full};
  std::vector<double> weights = {0.0, 0.0};
  int enumerated_sizes = 0;
  if (exact) {
    // Kernel weight (n - 1) / (C(n, s) s (n - s)) for coalition size s.
    std::vector<double> binom(n + 1, 1.0);
    for (int s = 1; s <= n; ++s) binom[s] = binom[s - 1] * (n - s + 1) / s;
    for (std::uint32_t z = 1; z < full; ++z) {
      const int s = std::popcount(z);
      masks.push_back(z);
      weights.push_back((n - 1) / (binom[s] * s * (n - s)));
    }
  } else if (n > 1) {
    // Size classes {s, n - s} are enumerated whole, smallest s first, while
    // they fit in the budget; the remaining sizes are sampled in complement
    // pairs and share the leftover kernel mass equally.
    std::vector<double> binom(n + 1, 1.0);
    for (int s = 1; s <= n; ++s) binom[s] = binom[s - 1] * (n - s + 1) / s;
    int budget = cfg.samples;
    int first_sampled = 1;
    int enumerated_classes = 0;
    for (int s = 1; 2 * s <= n; ++s) {
      const double count = (2 * s == n ? 1.0 : 2.0) * binom[s];
      if (count > budget) break;
      for (std::uint32_t z = 1; z < full; ++z) {
        const int size = std::popcount(z);
        if (size != s && size != n - s) continue;
        masks.push_back(z);
        weights.push_back((n - 1) / (binom[size] * size * (n - size)));
      }
      budget -= static_cast<int>(count);
      first_sampled = s + 1;
      ++enumerated_classes;
    }
    const int last_sampled = n - first_sampled;
    if (first_sampled <= last_sampled && budget > 0) {
      std::mt19937_64 rng(cfg.seed);
      std::vector<double> size_mass;
      double leftover_mass = 0.0;
      for (int s = first_sampled; s <= last_sampled; ++s) {
        size_mass.push_back(1.0 / (s * (n - s)));
        leftover_mass += (n - 1.0) / (s * (n - s));
      }
      std::discrete_distribution<int> size_dist(size_mass.begin(),
                                                size_mass.end());
      const double sample_weight = leftover_mass / budget;
      std::vector<int> features(n);
      std::iota(features.begin(), features.end(), 0);
      int drawn = 0;
      while (drawn < budget) {
        const int s = size_dist(rng) + first_sampled;
        // Partial Fisher-Yates for a uniform subset of size s.
        std::uint32_t z = 0;
        for (int i = 0; i < s; ++i) {
          std::uniform_int_distribution<int> pick(i, n - 1);
          std::swap(features[i], features[pick(rng)]);
          z |= 1u << features[i];
        }
        masks.push_back(z);
        weights.push_back(sample_weight);
        ++drawn;
        if (drawn < budget) {
          masks.push_back(full & ~z);
          weights.push_back(sample_weight);
          ++drawn;
        }
      }
    }
    enumerated_sizes = enumerated_classes;
  }

  auto values = EvaluateCoalitions(model, x, x_ref, masks);
  if (!values.ok()) return values.status();
  const double base = (*values)[0];
  const double total = (*values)[1] - base;

  AttributionVector out{exact ? "ks:exact" : "ks:sampled",
                        std::vector<double>(n, 0.0), {}};
  out.metadata["evaluations"] = static_cast<double>(masks.size());
  if (!exact) {
    out.metadata["samples"] = cfg.samples;
    out.metadata["seed"] = static_cast<double>(cfg.seed);
    out.metadata["paired"] = 1.0;
    out.metadata["enumerated_size_classes"] = enumerated_sizes;
  }
  if (n == 1) {
    out.scores[0] = total;
    return out;
  }

  // Substitute A_{n-1} = total - sum_{j<n-1} A_j and solve for the rest.
  const int k = n - 1;
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd row(k);
  for (std::size_t i = 2; i < masks.size(); ++i) {
    const std::uint32_t z = masks[i];
    const double last = (z >> k) & 1u;
    for (int j = 0; j < k; ++j) row[j] = ((z >> j) & 1u) - last;
    const double target = (*values)[i] - base - last * total;
    normal.selfadjointView<Eigen::Lower>().rankUpdate(row, weights[i]);
    rhs += weights[i] * target * row;
  }
  normal.triangularView<Eigen::StrictlyUpper>() = normal.transpose();
  auto solution = SolveNormalEquations(normal, rhs, "Kernel SHAP");
  if (!solution.ok()) return solution.status();
  double assigned = 0.0;
  for (int j = 0; j < k; ++j) {
    out.scores[j] = (*solution)[j];
    assigned += out.scores[j];
  }
  out.scores[k] = total - assigned;
  return out;
}

absl::StatusOr<AttributionVector> VanillaGrad(const Model& model,
                                              const Point& x,
                                              const Point& x_ref) {
  if (auto s = CheckTriple(model, x, x_ref); !s.ok()) return s;
  auto grads = model.Gradient(std::span<const Point>(&x, 1));
  if (!grads.ok()) return grads.status();
  return AttributionVector{"vanilla_grad", grads->values, {}};
}

absl::StatusOr<AttributionVector> InputTimesGradient(const Model& model,
                                                     const Point& x,
                                                     const Point& x_ref) {
  if (auto s = CheckTriple(model, x, x_ref); !s.ok()) return s;
  auto grads = model.Gradient(std::span<const Point>(&x, 1));
  if (!grads.ok()) return grads.status();
  AttributionVector out{"input_x_grad", grads->values, {}};
  for (int j = 0; j < x.size(); ++j) {
    const double input = (model.space().is_binary(j) && x[j] == 0.0)
                             ? kBinaryZeroReplacement
                             : x[j];
    out.scores[j] *= input;
  }
  return out;
}

absl::StatusOr<AttributionVector> Lime(const Model& model, const Point& x,
                                       const Point& x_ref,
                                       const LimeConfig& cfg) {
  if (auto s = CheckTriple(model, x, x_ref); !s.ok()) return s;
  const int n = model.num_features();
  if (cfg.samples < n + 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "LIME needs at least n + 2 = ", n + 2, " samples; got ", cfg.samples));
  }
  if (n > 31) return absl::InvalidArgumentError("LIME supports n <= 31");
  const double width = cfg.kernel_width.value_or(0.75 * std::sqrt(n));
  if (!(width > 0.0)) {
    return absl::InvalidArgumentError("LIME kernel width must be positive");
  }

  std::mt19937_64 rng(cfg.seed);
  std::bernoulli_distribution coin(0.5);
  // Masks record switched coordinates (1 - z); sample 0 is x itself.
  std::vector<std::uint32_t> switched(cfg.samples, 0u);
  for (int i = 1; i < cfg.samples; ++i) {
    for (int j = 0; j < n; ++j) {
      if (coin(rng)) switched[i] |= 1u << j;
    }
  }
  auto values = EvaluateCoalitions(model, x, x_ref, switched);
  if (!values.ok()) return values.status();

  std::vector<double> weights(cfg.samples);
  double weight_sum = 0.0;
  Eigen::VectorXd mean_s = Eigen::VectorXd::Zero(n);
  double mean_y = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const double d = std::popcount(switched[i]);
    weights[i] = std::exp(-(d * d) / (width * width));
    weight_sum += weights[i];
    for (int j = 0; j < n; ++j) mean_s[j] += weights[i] * ((switched[i] >> j) & 1u);
    mean_y += weights[i] * (*values)[i];
  }
  mean_s /= weight_sum;
  mean_y /= weight_sum;

  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd row(n);
  for (int i = 0; i < cfg.samples; ++i) {
    for (int j = 0; j < n; ++j) row[j] = ((switched[i] >> j) & 1u) - mean_s[j];
    normal.selfadjointView<Eigen::Lower>().rankUpdate(row, weights[i]);
    rhs += weights[i] * ((*values)[i] - mean_y) * row;
  }
  normal.triangularView<Eigen::StrictlyUpper>() = normal.transpose();
  normal.diagonal().array() += cfg.ridge;
  auto solution = SolveNormalEquations(normal, rhs, "LIME");
  if (!solution.ok()) return solution.status();

  AttributionVector out{"lime", std::vector<double>(n), {}};
  for (int j = 0; j < n; ++j) out.scores[j] = (*solution)[j];
  out.metadata["samples"] = cfg.samples;
  out.metadata["kernel_width"] = width;
  out.metadata["seed"] = static_cast<double>(cfg.seed);
  return out;
}

AttributionVector RandomAttribution(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  AttributionVector out{"random", std::vector<double>(n), {}};
  for (double& s : out.scores) s = normal(rng);
  out.metadata["seed"] = static_cast<double>(seed);
  return out;
}

absl::StatusOr<MethodSpec> ParseMethodSpec(const std::string& text) {
  const std::vector<std::string> parts = absl::StrSplit(text, ':');
  MethodSpec spec;
  spec.label = text;
  auto count_arg = [&](size_t index, int* target) -> absl::Status {
    if (parts.size() <= index) return absl::OkStatus();
    if (parts.size() > index + 1 || !absl::SimpleAtoi(parts[index], target) ||
        *target < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad count in method \"", text, "\""));
    }
    return absl::OkStatus();
  };
  const std::string& head = parts[0];
  if (head == "shapley" && parts.size() == 1) {
    spec.kind = MethodKind::kExactShapley;
    return spec;
  }
  if (head == "ks" && parts.size() >= 2) {
    spec.kind = MethodKind::kKernelShap;
    if (parts[1] == "exact" && parts.size() == 2) {
      spec.ks.mode = KSMode::kExact;
      return spec;
    }
    if (parts[1] == "sampled") {
      spec.ks.mode = KSMode::kSampled;
      if (auto s = count_arg(2, &spec.ks.samples); !s.ok()) return s;
      return spec;
    }
  }
  if (head == "ig" && parts.size() >= 2) {
    spec.kind = MethodKind::kIntegratedGradients;
    if (parts[1] == "cast") {
      spec.ig.binary_scheme = BinaryScheme::kCasting;
    } else if (parts[1] == "interp") {
      spec.ig.binary_scheme = BinaryScheme::kInterpolating;
    } else if (parts[1] == "jump") {
      spec.ig.binary_scheme = BinaryScheme::kJumping;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "unknown IG scheme \"", parts[1], "\" (expected cast, interp, jump)"));
    }
    if (auto s = count_arg(2, &spec.ig.nodes); !s.ok()) return s;
    return spec;
  }
  if (head == "vanilla_grad" && parts.size() == 1) {
    spec.kind = MethodKind::kVanillaGrad;
    return spec;
  }
  if (head == "input_x_grad" && parts.size() == 1) {
    spec.kind = MethodKind::kInputTimesGradient;
    return spec;
  }
  if (head == "lime") {
    spec.kind = MethodKind::kLime;
    if (auto s = count_arg(1, &spec.lime.samples); !s.ok()) return s;
    return spec;
  }
  if (head == "random" && parts.size() == 1) {
    spec.kind = MethodKind::kRandom;
    return spec;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown method \"", text,
      "\" (expected shapley, ks:exact, ks:sampled[:N], ig:cast|interp|jump[:N], "
      "vanilla_grad, input_x_grad, lime[:N], random)"));
}

absl::StatusOr<MethodSpec> MethodSpecFromJson(const json& value) {
  if (value.is_string()) return ParseMethodSpec(value.get<std::string>());
  if (!value.is_object() || !value.contains("name") ||
      !value["name"].is_string()) {
    return absl::InvalidArgumentError(
        "method must be a string or an object with a \"name\"");
  }
  auto spec = ParseMethodSpec(value["name"].get<std::string>());
  if (!spec.ok()) return spec.status();
  for (const auto& [key, v] : value.items()) {
    if (key == "name" || key == "label") continue;
    if (!v.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("method option \"", key, "\" must be a number"));
    }
    if (key == "samples" && v.is_number_integer() && v.get<int>() >= 1 &&
        (spec->kind == MethodKind::kKernelShap ||
         spec->kind == MethodKind::kLime)) {
      spec->ks.samples = v.get<int>();
      spec->lime.samples = v.get<int>();
    } else if (key == "nodes" && v.is_number_integer() && v.get<int>() >= 1 &&
               spec->kind == MethodKind::kIntegratedGradients) {
      spec->ig.nodes = v.get<int>();
    } else if (key == "jump_position" &&
               spec->kind == MethodKind::kIntegratedGradients) {
      spec->ig.jump_position = v.get<double>();
    } else if (key == "kernel_width" && spec->kind == MethodKind::kLime) {
      spec->lime.kernel_width = v.get<double>();
    } else if (key == "ridge" && spec->kind == MethodKind::kLime) {
      spec->lime.ridge = v.get<double>();
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "option \"", key, "\" is not valid for method \"",
          value["name"].get<std::string>(), "\""));
    }
  }
  spec->label = value.value("label", value["name"].get<std::string>());
  return spec;
}

absl::StatusOr<AttributionVector> ComputeAttribution(const MethodSpec& spec,
                                                     const Model& model,
                                                     const Point& x,
                                                     const Point& x_ref,
                                                     std::uint64_t seed) {
  absl::StatusOr<AttributionVector> out;
  switch (spec.kind) {
    case MethodKind::kExactShapley:
      out = ExactShapley(model, x, x_ref);
      break;
    case MethodKind::kKernelShap: {
      KSConfig cfg = spec.ks;
      cfg.seed = seed;
      out = KernelShap(model, x, x_ref, cfg);
      break;
    }
    case MethodKind::kIntegratedGradients:
      out = IntegratedGradients(model, x, x_ref, spec.ig);
      break;
    case MethodKind::kVanillaGrad:
      out = VanillaGrad(model, x, x_ref);
      break;
    case MethodKind::kInputTimesGradient:
      out = InputTimesGradient(model, x, x_ref);
      break;
    case MethodKind::kLime: {
      LimeConfig cfg = spec.lime;
      cfg.seed = seed;
      out = Lime(model, x, x_ref, cfg);
      break;
    }
    case MethodKind::kRandom:
      if (auto s = CheckTriple(model, x, x_ref); !s.ok()) return s;
      out = RandomAttribution(model.num_features(), seed);
      break;
  }
  if (out.ok()) out->method = spec.label;
  return out;
}

}  // namespace abc_bench
