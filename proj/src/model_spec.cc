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

#include "abc_bench/model_spec.h"

#include <set>

#include "abc_bench/external_model.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace abc_bench {
namespace {

using nlohmann::json;

absl::StatusOr<double> ParseNumber(absl::string_view text) {
  double value;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(text), &value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot parse number \"", text, "\""));
  }
  return value;
}

absl::StatusOr<std::vector<double>> ParseNumberList(absl::string_view text) {
  std::vector<double> out;
  if (absl::StripAsciiWhitespace(text).empty()) return out;
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    auto value = ParseNumber(part);
    if (!value.ok()) return value.status();
    out.push_back(*value);
  }
  return out;
}

absl::StatusOr<FeatureSpace> ResolveSpace(
    int n, const std::optional<FeatureSpace>& space) {
  if (!space.has_value()) {
    if (n < 1) return absl::InvalidArgumentError("model needs at least 1 feature");
    return FeatureSpace::Continuous(n);
  }
  if (space->size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("model has ", n, " features but the data space has ",
                     space->size()));
  }
  return *space;
}

absl::StatusOr<SubsetMask> ParseSubset(absl::string_view text, int n) {
  text = absl::StripAsciiWhitespace(text);
  if (text == "{}" || text.empty()) return SubsetMask();
  std::uint32_t bits = 0;
  for (absl::string_view part : absl::StrSplit(text, '+')) {
    int j;
    if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(part), &j) || j < 1 ||
        j > n) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad feature \"", part, "\" in subset \"", text,
                       "\" (features are 1..", n, ")"));
    }
    bits |= 1u << (j - 1);
  }
  return SubsetMask(bits);
}

absl::StatusOr<std::vector<double>> DoubleArray(const json& spec,
                                                const std::string& key) {
  if (!spec.contains(key) || !spec[key].is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat("model spec needs an array \"", key, "\""));
  }
  std::vector<double> out;
  for (const json& v : spec[key]) {
    if (!v.is_number()) {
      return absl::InvalidArgumentError(
          absl::StrCat("model spec \"", key, "\" must hold numbers"));
    }
    out.push_back(v.get<double>());
  }
  return out;
}

double NumberOr(const json& spec, const std::string& key, double fallback) {
  if (spec.contains(key) && spec[key].is_number()) return spec[key].get<double>();
  return fallback;
}

absl::Status RejectUnknownKeys(const json& spec,
                               const std::set<std::string>& allowed) {
  for (const auto& [key, value] : spec.items()) {
    if (!allowed.count(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown model spec key \"", key, "\""));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ModelHandle> ParseModelSpec(
    const std::string& spec, const std::optional<FeatureSpace>& space) {
  const absl::string_view trimmed = absl::StripAsciiWhitespace(spec);
  if (!trimmed.empty() && trimmed.front() == '{') {
    json parsed = json::parse(trimmed.begin(), trimmed.end(), nullptr,
                              /*allow_exceptions=*/false);
    if (parsed.is_discarded()) {
      return absl::InvalidArgumentError("model spec is not valid JSON");
    }
    return ModelFromJson(parsed, space);
  }
  const size_t colon = trimmed.find(':');
  if (colon == absl::string_view::npos) {
    return absl::InvalidArgumentError(absl::StrCat(
        "model spec \"", spec, "\" must look like <kind>:<parameters>"));
  }
  const std::string kind(trimmed.substr(0, colon));
  const absl::string_view rest = trimmed.substr(colon + 1);

  if (kind == "external") {
    if (!space.has_value()) {
      return absl::InvalidArgumentError(
          "external models need a feature space (pass data or points first)");
    }
    return ConnectExternal(std::string(rest), *space);
  }

  const std::vector<absl::string_view> fields =
      absl::StrSplit(rest, absl::MaxSplits(':', 1));
  if (fields.size() != 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "model spec \"", spec, "\" must look like ", kind, ":<a>:<b>"));
  }

  if (kind == "multilinear") {
    int n;
    if (!absl::SimpleAtoi(fields[0], &n) || n < 1 || n > kMaxSubsetFeatures) {
      return absl::InvalidArgumentError(
          absl::StrCat("multilinear feature count \"", fields[0],
                       "\" must be in 1..", kMaxSubsetFeatures));
    }
    std::vector<MultilinearModel::Term> terms;
    if (!absl::StripAsciiWhitespace(fields[1]).empty()) {
      for (absl::string_view term : absl::StrSplit(fields[1], ',')) {
        const std::vector<absl::string_view> kv = absl::StrSplit(term, '=');
        if (kv.size() != 2) {
          return absl::InvalidArgumentError(
              absl::StrCat("multilinear term \"", term, "\" must be set=value"));
        }
        auto u = ParseSubset(kv[0], n);
        if (!u.ok()) return u.status();
        auto c = ParseNumber(kv[1]);
        if (!c.ok()) return c.status();
        terms.emplace_back(*u, *c);
      }
    }
    auto resolved = ResolveSpace(n, space);
    if (!resolved.ok()) return resolved.status();
    return MultilinearModel::Create(*std::move(resolved), std::move(terms));
  }

  auto intercept = ParseNumber(fields[0]);
  if (!intercept.ok()) return intercept.status();
  auto coefficients = ParseNumberList(fields[1]);
  if (!coefficients.ok()) return coefficients.status();
  auto resolved = ResolveSpace(static_cast<int>(coefficients->size()), space);
  if (!resolved.ok()) return resolved.status();

  if (kind == "linear") {
    return LinearModel::Create(*std::move(resolved), *intercept,
                               *std::move(coefficients));
  }
  auto link = ParseLink(kind);
  if (!link.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "unknown model kind \"", kind,
        "\" (expected linear, identity, logistic, exp, leaky_relu, "
        "multilinear, external)"));
  }
  return MonotoneAdditiveModel::Create(*std::move(resolved), *link, *intercept,
                                       *std::move(coefficients));
}

absl::StatusOr<ModelHandle> ModelFromJson(
    const json& spec, const std::optional<FeatureSpace>& space) {
  if (spec.is_string()) return ParseModelSpec(spec.get<std::string>(), space);
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    return absl::InvalidArgumentError(
        "model spec must be a string or an object with a \"kind\"");
  }
  const std::string kind = spec["kind"].get<std::string>();

  if (kind == "linear") {
    if (auto s = RejectUnknownKeys(spec, {"kind", "intercept", "coefficients"});
        !s.ok())
      return s;
    auto coefficients = DoubleArray(spec, "coefficients");
    if (!coefficients.ok()) return coefficients.status();
    auto resolved = ResolveSpace(static_cast<int>(coefficients->size()), space);
    if (!resolved.ok()) return resolved.status();
    return LinearModel::Create(*std::move(resolved),
                               NumberOr(spec, "intercept", 0.0),
                               *std::move(coefficients));
  }
  if (kind == "monotone_additive") {
    if (auto s = RejectUnknownKeys(
            spec, {"kind", "link", "intercept", "coefficients"});
        !s.ok())
      return s;
    auto coefficients = DoubleArray(spec, "coefficients");
    if (!coefficients.ok()) return coefficients.status();
    auto link = ParseLink(spec.value("link", std::string("identity")));
    if (!link.ok()) return link.status();
    auto resolved = ResolveSpace(static_cast<int>(coefficients->size()), space);
    if (!resolved.ok()) return resolved.status();
    return MonotoneAdditiveModel::Create(*std::move(resolved), *link,
                                         NumberOr(spec, "intercept", 0.0),
                                         *std::move(coefficients));
  }
  if (kind == "multilinear") {
    if (auto s = RejectUnknownKeys(spec, {"kind", "n", "terms"}); !s.ok())
      return s;
    if (!spec.contains("n") || !spec["n"].is_number_integer()) {
      return absl::InvalidArgumentError("multilinear spec needs integer \"n\"");
    }
    const int n = spec["n"].get<int>();
    if (n < 1 || n > kMaxSubsetFeatures) {
      return absl::InvalidArgumentError(
          absl::StrCat("multilinear n must be in 1..", kMaxSubsetFeatures));
    }
    std::vector<MultilinearModel::Term> terms;
    for (const json& term : spec.value("terms", json::array())) {
      if (!term.is_object() || !term.contains("coefficient") ||
          !term["coefficient"].is_number()) {
        return absl::InvalidArgumentError(
            "multilinear terms need \"features\" and \"coefficient\"");
      }
      std::uint32_t bits = 0;
      for (const json& f : term.value("features", json::array())) {
        if (!f.is_number_integer() || f.get<int>() < 1 || f.get<int>() > n) {
          return absl::InvalidArgumentError(
              absl::StrCat("multilinear term feature must be in 1..", n));
        }
        bits |= 1u << (f.get<int>() - 1);
      }
      terms.emplace_back(SubsetMask(bits), term["coefficient"].get<double>());
    }
    auto resolved = ResolveSpace(n, space);
    if (!resolved.ok()) return resolved.status();
    return MultilinearModel::Create(*std::move(resolved), std::move(terms));
  }
  if (kind == "tabular") {
    if (auto s = RejectUnknownKeys(
            spec, {"kind", "table", "continuous_coefficients"});
        !s.ok())
      return s;
    if (!space.has_value()) {
      return absl::InvalidArgumentError(
          "tabular models need a feature space with binary dimensions");
    }
    auto table = DoubleArray(spec, "table");
    if (!table.ok()) return table.status();
    std::vector<double> continuous;
    if (spec.contains("continuous_coefficients")) {
      auto parsed = DoubleArray(spec, "continuous_coefficients");
      if (!parsed.ok()) return parsed.status();
      continuous = *std::move(parsed);
    }
    return TabularInterpolantModel::Create(*space, *std::move(table),
                                           std::move(continuous));
  }
  if (kind == "external") {
    if (auto s = RejectUnknownKeys(
            spec, {"kind", "command", "batch_size", "timeout_ms"});
        !s.ok())
      return s;
    if (!space.has_value()) {
      return absl::InvalidArgumentError("external models need a feature space");
    }
    if (!spec.contains("command") || !spec["command"].is_string()) {
      return absl::InvalidArgumentError("external spec needs \"command\"");
    }
    ExternalModelOptions options;
    options.batch_size = spec.value("batch_size", options.batch_size);
    options.timeout = std::chrono::milliseconds(
        spec.value("timeout_ms", static_cast<long>(options.timeout.count())));
    return ConnectExternal(spec["command"].get<std::string>(), *space, options);
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown model kind \"", kind,
      "\" (expected linear, monotone_additive, multilinear, tabular, "
      "external)"));
}

}  // namespace abc_bench
