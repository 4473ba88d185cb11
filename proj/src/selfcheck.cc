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

#include "abc_bench/selfcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <bit>
#include <limits>
#include <random>
#include <sstream>

#include "abc_bench/anchored_decomposition.h"
#include "abc_bench/attribution.h"
#include "abc_bench/curve_metrics.h"
#include "abc_bench/format.h"
#include "abc_bench/synthetic.h"
#include "absl/strings/str_cat.h"

namespace abc_bench {
namespace {

constexpr double kTol = 1e-9;

struct Case {
  ModelHandle model;
  Point x;
  Point x_ref;
};

int MaxN(const SelfCheckOptions& o) { return std::clamp(o.max_n, 2, 7); }

// Random multilinear model and point pair, n drawn from [2, max_n].
Case RandomCase(std::mt19937_64& rng, int min_n, int max_n) {
  std::uniform_int_distribution<int> pick_n(min_n, max_n);
  const int n = pick_n(rng);
  const FeatureSpace space = FeatureSpace::Continuous(n);
  Case c{RandomMultilinear(space, rng), RandomPoint(space, rng),
         RandomPoint(space, rng)};
  return c;
}

std::vector<int> RandomPermutation(int n, std::mt19937_64& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

IdentityCheck Fail(std::string name, std::string detail) {
  return {std::move(name), false, std::move(detail)};
}

// Largest AUC over all orderings, read off the corner table.
double MaxAuc(std::span<const double> corners, int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = -std::numeric_limits<double>::infinity();
  do {
    best = std::max(best, AucFromCorners(corners, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double Scale(std::span<const double> corners) {
  double s = 1.0;
  for (double v : corners) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

IdentityCheck CheckInsertionAucIdentity(const SelfCheckOptions& options) {
  const std::string name = "insertion AUC = sum_u (n - ceil(pi(u)) + 1) delta_u";
  std::mt19937_64 rng(options.seed ^ 0x11);
  double worst = 0.0;
  for (int m = 0; m < options.models; ++m) {
    Case c = RandomCase(rng, 2, std::max(2, MaxN(options) + 1));
    auto d = Decompose(*c.model, c.x, c.x_ref);
    if (!d.ok()) return Fail(name, std::string(d.status().message()));
    for (int t = 0; t < 5; ++t) {
      Ordering order{RandomPermutation(d->n(), rng), "random"};
      auto curve = InsertionCurve(*c.model, c.x, c.x_ref, order);
      auto oracle = AucOracle(*d, order.perm);
      if (!curve.ok() || !oracle.ok()) return Fail(name, "evaluation failed");
      worst = std::max(worst, std::abs(curve->auc - *oracle));
    }
  }
  return {name, worst <= kTol, absl::StrCat("max |diff| = ", FormatDouble(worst))};
}

IdentityCheck CheckDeletionAucIdentity(const SelfCheckOptions& options) {
  const std::string name = "deletion AUC' = sum_u floor(pi(u)) delta_u";
  std::mt19937_64 rng(options.seed ^ 0x12);
  double worst = 0.0;
  for (int m = 0; m < options.models; ++m) {
    Case c = RandomCase(rng, 2, MaxN(options));
    auto d = Decompose(*c.model, c.x, c.x_ref);
    if (!d.ok()) return Fail(name, std::string(d.status().message()));
    Ordering order{RandomPermutation(d->n(), rng), "random"};
    auto curve = DeletionCurve(*c.model, c.x, c.x_ref, order);
    auto oracle = DeletionAucOracle(*d, order.perm);
    if (!curve.ok() || !oracle.ok()) return Fail(name, "evaluation failed");
    worst = std::max(worst, std::abs(curve->auc - *oracle));
  }
  return {name, worst <= kTol, absl::StrCat("max |diff| = ", FormatDouble(worst))};
}

IdentityCheck CheckReconstruction(const SelfCheckOptions& options) {
  const std::string name = "sum_{u in w} delta_u = f(x'_w : x_-w) for all w";
  std::mt19937_64 rng(options.seed ^ 0x13);
  double worst = 0.0;
  for (int m = 0; m < options.models; ++m) {
    Case c = RandomCase(rng, 1, MaxN(options));
    auto d = Decompose(*c.model, c.x, c.x_ref);
    auto corners = CornerValues(*c.model, c.x, c.x_ref);
    if (!d.ok() || !corners.ok()) return Fail(name, "evaluation failed");
    for (std::uint32_t w = 0; w < corners->size(); ++w) {
      worst = std::max(worst,
                       std::abs(d->Reconstruct(SubsetMask(w)) - (*corners)[w]));
    }
  }
  return {name, worst <= kTol, absl::StrCat("max |diff| = ", FormatDouble(worst))};
}

IdentityCheck CheckExpectedCeiling(const SelfCheckOptions& options) {
  const std::string name = "E[ceil(pi(u))] = |u|(n+1)/(|u|+1) (exact)";
  for (int n = 1; n <= MaxN(options); ++n) {
    // totals[s] = sum over permutations and |u| = s of the largest position.
    std::vector<std::int64_t> totals(n + 1, 0), counts(n + 1, 0);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    do {
      for (std::uint32_t u = 0; u < (1u << n); ++u) {
        int ceiling = 0;
        for (int j = 0; j < n; ++j) {
          if (u >> j & 1u) ceiling = std::max(ceiling, perm[j]);
        }
        const int s = std::popcount(u);
        totals[s] += ceiling;
        counts[s] += 1;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int s = 0; s <= n; ++s) {
      const Rational enumerated = Rational::Make(totals[s], counts[s]);
      auto expected = ExpectedCeiling(n, s);
      if (!expected.ok() || !(enumerated == *expected)) {
        std::ostringstream detail;
        detail << "n=" << n << " |u|=" << s << ": enumerated " << enumerated;
        return Fail(name, detail.str());
      }
    }
  }
  return {name, true, absl::StrCat("n = 1..", MaxN(options), ", all sizes")};
}

IdentityCheck CheckExpectedAbc(const SelfCheckOptions& options) {
  const std::string name = "E[ABC] = (n+1)/2 sum (1-|u|)/(|u|+1) delta_u";
  std::mt19937_64 rng(options.seed ^ 0x14);
  double worst = 0.0;
  for (int m = 0; m < options.models; ++m) {
    Case c = RandomCase(rng, 2, MaxN(options));
    auto d = Decompose(*c.model, c.x, c.x_ref);
    auto baseline = RandomOrderBaseline(*c.model, c.x, c.x_ref, 1, 0);
    if (!d.ok() || !baseline.ok()) return Fail(name, "evaluation failed");
    worst = std::max(worst, std::abs(baseline->mean_abc_insertion -
                                     ExpectedAbcOracle(*d)));
  }
  return {name, worst <= kTol, absl::StrCat("max |diff| = ", FormatDouble(worst))};
}

IdentityCheck CheckAbcPlusDeletionAbc(const SelfCheckOptions& options) {
  const std::string name = "E[ABC + ABC'] = 0 over all orderings";
  std::mt19937_64 rng(options.seed ^ 0x15);
  double worst = 0.0;
  for (int m = 0; m < options.models; ++m) {
    Case c = RandomCase(rng, 2, MaxN(options));
    auto baseline = RandomOrderBaseline(*c.model, c.x, c.x_ref, 1, 0);
    if (!baseline.ok()) return Fail(name, "evaluation failed");
    worst = std::max(worst, std::abs(baseline->mean_sum));
  }
  return {name, worst <= kTol, absl::StrCat("max |mean| = ", FormatDouble(worst))};
}

IdentityCheck CheckShapleyCounterexample(const SelfCheckOptions&) {
  const std::string name = "Shapley order is not always the best order (A=-1.5)";
  const double a = -1.5;
  auto model = MultilinearModel::Create(
      FeatureSpace::Continuous(3),
      {{SubsetMask::Of({0}), 3.0},
       {SubsetMask::Of({1}), 2.0},
       {SubsetMask::Of({2}), 1.0},
       {SubsetMask::Of({0, 1}), a}});
  if (!model.ok()) return Fail(name, std::string(model.status().message()));
  const Point x{0, 0, 0}, x_ref{1, 1, 1};
  auto phi = ExactShapley(**model, x, x_ref);
  auto auc_123 = InsertionCurve(**model, x, x_ref, {{0, 1, 2}, "given"});
  auto auc_132 = InsertionCurve(**model, x, x_ref, {{0, 2, 1}, "given"});
  auto best = BestOrderExhaustive(**model, x, x_ref, CurveMode::kInsertion);
  if (!phi.ok() || !auc_123.ok() || !auc_132.ok() || !best.ok()) {
    return Fail(name, "evaluation failed");
  }
  const Ordering shapley_order = InsertionOrderFromScores(phi->scores, "shapley");
  const bool ok = std::abs(phi->scores[0] - 2.25) <= kTol &&
                  std::abs(phi->scores[1] - 1.25) <= kTol &&
                  std::abs(phi->scores[2] - 1.0) <= kTol &&
                  std::abs(auc_123->auc - 11.0) <= kTol &&
                  std::abs(auc_132->auc - 11.5) <= kTol &&
                  best->perm == std::vector<int>{0, 2, 1};
  return {name, ok,
          absl::StrCat("phi = (", FormatDoubles(phi->scores), "), phi order (",
                       FormatOrderOneBased(shapley_order.perm, ","),
                       ") AUC ", FormatDouble(auc_123->auc),
                       ", best AUC order (", FormatOrderOneBased(best->perm, ","),
                       ") AUC ", FormatDouble(auc_132->auc))};
}

IdentityCheck CheckTwoFeatureOptimality(const SelfCheckOptions& options) {
  const std::string name = "n=2: Shapley order attains the maximal insertion AUC";
  std::mt19937_64 rng(options.seed ^ 0x16);
  const int models = std::max(options.models, 1) * 4;
  for (int m = 0; m < models; ++m) {
    Case c = RandomCase(rng, 2, 2);
    auto phi = ExactShapley(*c.model, c.x, c.x_ref);
    auto corners = CornerValues(*c.model, c.x, c.x_ref);
    if (!phi.ok() || !corners.ok()) return Fail(name, "evaluation failed");
    const Ordering order = InsertionOrderFromScores(phi->scores, "shapley");
    const double gap = MaxAuc(*corners, 2) - AucFromCorners(*corners, order.perm);
    if (gap > kTol * Scale(*corners)) {
      return Fail(name, absl::StrCat("model ", m, ": AUC gap ", FormatDouble(gap)));
    }
  }
  return {name, true, absl::StrCat(models, " random models")};
}

IdentityCheck CheckMonotoneOptimality(const SelfCheckOptions& options) {
  const std::string name =
      "monotone links: Shapley order optimal, IG order = Shapley order";
  std::mt19937_64 rng(options.seed ^ 0x17);
  IGConfig ig;
  ig.nodes = 200;
  int cases = 0;
  for (Link link : {Link::kLogistic, Link::kExp, Link::kLeakyRelu}) {
    for (int m = 0; m < options.models; ++m) {
      std::uniform_int_distribution<int> pick_n(2, MaxN(options));
      const FeatureSpace space = FeatureSpace::Continuous(pick_n(rng));
      ModelHandle model = RandomMonotoneAdditive(space, link, rng);
      const Point x = RandomPoint(space, rng), x_ref = RandomPoint(space, rng);
      auto phi = ExactShapley(*model, x, x_ref);
      auto grads = IntegratedGradients(*model, x, x_ref, ig);
      auto corners = CornerValues(*model, x, x_ref);
      if (!phi.ok() || !grads.ok() || !corners.ok()) {
        return Fail(name, "evaluation failed");
      }
      const Ordering shapley = InsertionOrderFromScores(phi->scores, "shapley");
      const Ordering integrated = InsertionOrderFromScores(grads->scores, "ig");
      const double gap =
          MaxAuc(*corners, space.size()) - AucFromCorners(*corners, shapley.perm);
      if (gap > kTol * Scale(*corners)) {
        return Fail(name, absl::StrCat(LinkName(link), " model ", m,
                                       ": AUC gap ", FormatDouble(gap)));
      }
      if (integrated.perm != shapley.perm) {
        return Fail(name, absl::StrCat(LinkName(link), " model ", m,
                                       ": IG order differs from Shapley order"));
      }
      ++cases;
    }
  }
  return {name, true, absl::StrCat(cases, " models over 3 links")};
}

IdentityCheck CheckShapleyEfficiency(const SelfCheckOptions& options) {
  const std::string name = "sum phi = f(x') - f(x); exact Kernel SHAP = Shapley";
  std::mt19937_64 rng(options.seed ^ 0x18);
  double worst = 0.0;
  for (int m = 0; m < options.models; ++m) {
    Case c = RandomCase(rng, 2, MaxN(options));
    auto phi = ExactShapley(*c.model, c.x, c.x_ref);
    auto ks = KernelShap(*c.model, c.x, c.x_ref, KSConfig{});
    auto fx = c.model->PredictOne(c.x);
    auto fr = c.model->PredictOne(c.x_ref);
    if (!phi.ok() || !ks.ok() || !fx.ok() || !fr.ok()) {
      return Fail(name, "evaluation failed");
    }
    worst = std::max(worst, std::abs(phi->sum() - (*fr - *fx)));
    for (size_t j = 0; j < phi->scores.size(); ++j) {
      worst = std::max(worst, std::abs(phi->scores[j] - ks->scores[j]));
    }
  }
  return {name, worst <= kTol, absl::StrCat("max |diff| = ", FormatDouble(worst))};
}

std::vector<IdentityCheck> RunSelfCheck(const SelfCheckOptions& options) {
  return {CheckInsertionAucIdentity(options), CheckDeletionAucIdentity(options),
          CheckReconstruction(options),       CheckExpectedCeiling(options),
          CheckExpectedAbc(options),          CheckAbcPlusDeletionAbc(options),
          CheckShapleyCounterexample(options), CheckTwoFeatureOptimality(options),
          CheckMonotoneOptimality(options),   CheckShapleyEfficiency(options)};
}

}  // namespace abc_bench
