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

#include "abc_bench/job_config.h"

#include <fstream>
#include <set>

#include "abc_bench/config.h"
#include "abc_bench/model_spec.h"
#include "absl/strings/str_cat.h"

namespace abc_bench {
namespace {

using nlohmann::json;

// Prefixes an error message with the key path it belongs to.
absl::Status AtPath(const absl::Status& status, const std::string& path) {
  if (status.ok()) return status;
  return absl::Status(status.code(),
                      absl::StrCat(path, ": ", status.message()));
}

absl::StatusOr<std::vector<MethodSpec>> ReadMethods(const json& object,
                                                    const std::string& path) {
  auto it = object.find("methods");
  if (it == object.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, "methods"), ": required"));
  }
  std::vector<json> items;
  if (it->is_string()) {
    auto names = ReadStringList(object, "methods", path, {});
    if (!names.ok()) return names.status();
    for (const auto& name : *names) items.emplace_back(name);
  } else if (it->is_array()) {
    items.assign(it->begin(), it->end());
  } else {
    return absl::InvalidArgumentError(absl::StrCat(
        KeyPath(path, "methods"), ": expected a list of method specs"));
  }
  if (items.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, "methods"), ": at least one method"));
  }
  std::vector<MethodSpec> methods;
  std::set<std::string> labels;
  for (size_t i = 0; i < items.size(); ++i) {
    const std::string item_path = absl::StrCat(KeyPath(path, "methods"), "[", i, "]");
    auto spec = MethodSpecFromJson(items[i]);
    if (!spec.ok()) return AtPath(spec.status(), item_path);
    if (!labels.insert(spec->label).second) {
      return absl::InvalidArgumentError(
          absl::StrCat(item_path, ": duplicate method label \"", spec->label,
                       "\""));
    }
    methods.push_back(*std::move(spec));
  }
  return methods;
}

}  // namespace

absl::StatusOr<DatasetConfig> DatasetConfigFromJson(const json& value,
                                                    const std::string& path,
                                                    const std::string& base_dir) {
  if (auto s = ExpectObject(value, path); !s.ok()) return s;
  if (auto s = RejectUnknownKeys(value, path,
                                 {"path", "schema", "normalize",
                                  "train_fraction", "split_seed", "synthetic"});
      !s.ok()) {
    return s;
  }
  DatasetConfig config;
  config.base_dir = base_dir;
  auto csv = ReadString(value, "path", path, "");
  if (!csv.ok()) return csv.status();
  config.path = *csv;
  auto fraction = ReadDouble(value, "train_fraction", path, 0.8);
  if (!fraction.ok()) return fraction.status();
  if (!(*fraction > 0.0 && *fraction <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, "train_fraction"), ": must lie in (0, 1]"));
  }
  config.train_fraction = *fraction;
  if (value.contains("split_seed")) {
    auto seed = ReadSeed(value, "split_seed", path, 0);
    if (!seed.ok()) return seed.status();
    config.split_seed = *seed;
  }
  if (value.contains("normalize")) {
    auto normalize = ReadBool(value, "normalize", path, false);
    if (!normalize.ok()) return normalize.status();
    config.normalize = *normalize;
  }
  if (value.contains("schema")) {
    const json& schema = value["schema"];
    const std::string schema_path = KeyPath(path, "schema");
    absl::StatusOr<Schema> parsed =
        schema.is_string()
            ? LoadSchemaFile(ResolvePath(base_dir, schema.get<std::string>()))
            : SchemaFromJson(schema);
    if (!parsed.ok()) return AtPath(parsed.status(), schema_path);
    config.schema = *std::move(parsed);
  }
  if (value.contains("synthetic")) {
    const json& synth = value["synthetic"];
    const std::string sp = KeyPath(path, "synthetic");
    if (auto s = ExpectObject(synth, sp); !s.ok()) return s;
    if (auto s = RejectUnknownKeys(synth, sp,
                                   {"rows", "continuous", "binary", "noise",
                                    "seed", "target_model"});
        !s.ok()) {
      return s;
    }
    SyntheticDataSpec spec;
    auto rows = ReadInt(synth, "rows", sp, spec.rows);
    auto continuous = ReadInt(synth, "continuous", sp, spec.continuous);
    auto binary = ReadInt(synth, "binary", sp, spec.binary);
    auto noise = ReadDouble(synth, "noise", sp, spec.noise);
    auto seed = ReadSeed(synth, "seed", sp, spec.seed);
    for (const absl::Status& s : {rows.status(), continuous.status(),
                                  binary.status(), noise.status(),
                                  seed.status()}) {
      if (!s.ok()) return s;
    }
    if (*rows < 2 || *continuous < 0 || *binary < 0 ||
        *continuous + *binary < 1 || *continuous + *binary > 30 ||
        *noise < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          sp, ": need rows >= 2, 1..30 features in total and noise >= 0"));
    }
    spec.rows = static_cast<int>(*rows);
    spec.continuous = static_cast<int>(*continuous);
    spec.binary = static_cast<int>(*binary);
    spec.noise = *noise;
    spec.seed = *seed;
    config.synthetic = spec;
    if (synth.contains("target_model")) {
      config.synthetic_target = synth["target_model"];
    }
  }
  if (config.synthetic.has_value() == !config.path.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        path, ": give exactly one of \"path\" or a [", path,
        ".synthetic] table"));
  }
  if (!config.path.empty() && !config.schema.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, "schema"), ": required with a CSV path"));
  }
  return config;
}

absl::StatusOr<Dataset> LoadDataset(const DatasetConfig& config,
                                    std::uint64_t seed) {
  absl::StatusOr<Dataset> ds = absl::UnknownError("");
  if (config.synthetic.has_value()) {
    ModelHandle target;
    if (!config.synthetic_target.is_null()) {
      auto model = BuildModel(
          config.synthetic_target,
          SyntheticSpace(config.synthetic->continuous, config.synthetic->binary),
          config.base_dir, "dataset.synthetic.target_model");
      if (!model.ok()) return model.status();
      target = *model;
    }
    ds = GenerateDataset(*config.synthetic, target.get());
    if (ds.ok() && config.normalize.value_or(false)) {
      if (auto s = ds->Normalize(); !s.ok()) return s;
    }
  } else {
    Schema schema = *config.schema;
    if (config.normalize.has_value()) schema.normalize = *config.normalize;
    ds = LoadCsv(ResolvePath(config.base_dir, config.path), schema);
  }
  if (!ds.ok()) return ds.status();
  if (auto s = ds->Split(config.train_fraction, config.split_seed.value_or(seed));
      !s.ok()) {
    return s;
  }
  return ds;
}

absl::StatusOr<ModelHandle> BuildModel(const json& value,
                                       const FeatureSpace& space,
                                       const std::string& base_dir,
                                       const std::string& path) {
  absl::StatusOr<ModelHandle> model = absl::UnknownError("");
  if (value.is_string()) {
    model = ParseModelSpec(value.get<std::string>(), space);
  } else if (value.is_object() && value.contains("file")) {
    if (value.size() != 1 || !value["file"].is_string()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ": a model file reference takes only \"file\" = <path>"));
    }
    const std::string file = ResolvePath(base_dir, value["file"].get<std::string>());
    std::ifstream in(file);
    if (!in) return absl::NotFoundError(absl::StrCat(path, ": cannot open ", file));
    json parsed = json::parse(in, nullptr, false);
    if (parsed.is_discarded()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": ", file, " is not valid JSON"));
    }
    model = ModelFromJson(parsed, space);
  } else if (value.is_object()) {
    model = ModelFromJson(value, space);
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": expected a model spec string or table"));
  }
  if (!model.ok()) return AtPath(model.status(), path);
  return model;
}

absl::StatusOr<PolicySpec> PolicySpecFromJson(const json& value,
                                              const std::string& path,
                                              std::uint64_t default_seed) {
  PolicySpec spec;
  spec.seed = default_seed;
  if (value.is_string()) {
    auto kind = ParsePolicyKind(value.get<std::string>());
    if (!kind.ok()) return AtPath(kind.status(), path);
    spec.kind = *kind;
    return spec;
  }
  if (auto s = ExpectObject(value, path); !s.ok()) return s;
  if (auto s = RejectUnknownKeys(value, path,
                                 {"name", "min_diff_features", "knn", "seed"});
      !s.ok()) {
    return s;
  }
  auto name = ReadString(value, "name", path, "counterfactual");
  if (!name.ok()) return name.status();
  auto kind = ParsePolicyKind(*name);
  if (!kind.ok()) return AtPath(kind.status(), KeyPath(path, "name"));
  spec.kind = *kind;
  auto min_diff = ReadInt(value, "min_diff_features", path, spec.min_diff_features);
  if (!min_diff.ok()) return min_diff.status();
  auto knn = ReadInt(value, "knn", path, spec.knn);
  if (!knn.ok()) return knn.status();
  auto seed = ReadSeed(value, "seed", path, default_seed);
  if (!seed.ok()) return seed.status();
  spec.min_diff_features = static_cast<int>(*min_diff);
  spec.knn = static_cast<int>(*knn);
  spec.seed = *seed;
  if (spec.knn < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, "knn"), ": must be >= 1"));
  }
  if (spec.min_diff_features < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, "min_diff_features"), ": must be >= 0"));
  }
  return spec;
}

absl::StatusOr<ExperimentConfig> ExperimentConfigFromJson(
    const json& value, const std::string& base_dir) {
  if (auto s = ExpectObject(value, ""); !s.ok()) return s;
  if (auto s = RejectUnknownKeys(
          value, "",
          {"seed", "output_dir", "threads", "max_pairs", "modes", "methods",
           "differences", "write_curves", "dataset", "model", "policy"});
      !s.ok()) {
    return s;
  }
  ExperimentConfig config;
  auto seed = ReadSeed(value, "seed", "", 0);
  if (!seed.ok()) return seed.status();
  config.seed = *seed;
  auto output = ReadString(value, "output_dir", "", "");
  if (!output.ok()) return output.status();
  config.output_dir = *output;
  auto threads = ReadInt(value, "threads", "", 0);
  if (!threads.ok()) return threads.status();
  if (*threads < 0) return absl::InvalidArgumentError("threads: must be >= 0");
  config.threads = static_cast<int>(*threads);
  auto max_pairs = ReadInt(value, "max_pairs", "", config.max_pairs);
  if (!max_pairs.ok()) return max_pairs.status();
  if (*max_pairs < 0) return absl::InvalidArgumentError("max_pairs: must be >= 0");
  config.max_pairs = static_cast<int>(*max_pairs);
  auto curves = ReadBool(value, "write_curves", "", false);
  if (!curves.ok()) return curves.status();
  config.write_curves = *curves;

  auto modes = ReadStringList(value, "modes", "", {"insertion", "deletion"});
  if (!modes.ok()) return modes.status();
  config.modes.clear();
  for (const std::string& m : *modes) {
    if (m == "insertion") {
      config.modes.push_back(CurveMode::kInsertion);
    } else if (m == "deletion") {
      config.modes.push_back(CurveMode::kDeletion);
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "modes: unknown mode \"", m, "\" (expected insertion, deletion)"));
    }
  }
  if (config.modes.empty()) {
    return absl::InvalidArgumentError("modes: at least one mode");
  }

  auto methods = ReadMethods(value, "");
  if (!methods.ok()) return methods.status();
  config.methods = *std::move(methods);

  if (value.contains("differences")) {
    const json& diffs = value["differences"];
    if (!diffs.is_array()) {
      return absl::InvalidArgumentError(
          "differences: expected a list of [first, second] pairs");
    }
    for (size_t i = 0; i < diffs.size(); ++i) {
      const json& d = diffs[i];
      const std::string p = absl::StrCat("differences[", i, "]");
      if (!d.is_array() || d.size() != 2 || !d[0].is_string() ||
          !d[1].is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat(p, ": expected [first, second] method labels"));
      }
      for (const json& label : d) {
        bool found = false;
        for (const MethodSpec& m : config.methods) {
          found = found || m.label == label.get<std::string>();
        }
        if (!found) {
          return absl::InvalidArgumentError(absl::StrCat(
              p, ": \"", label.get<std::string>(), "\" is not a listed method"));
        }
      }
      config.differences.emplace_back(d[0].get<std::string>(),
                                      d[1].get<std::string>());
    }
  } else if (config.methods.size() >= 2) {
    config.differences.emplace_back(config.methods[0].label,
                                    config.methods[1].label);
  }

  if (!value.contains("dataset")) {
    return absl::InvalidArgumentError("dataset: required");
  }
  auto dataset = DatasetConfigFromJson(value["dataset"], "dataset", base_dir);
  if (!dataset.ok()) return dataset.status();
  config.dataset = *std::move(dataset);

  if (!value.contains("model")) {
    return absl::InvalidArgumentError("model: required");
  }
  config.model = value["model"];

  auto policy = PolicySpecFromJson(
      value.contains("policy") ? value["policy"] : json("counterfactual"),
      "policy", config.seed);
  if (!policy.ok()) return policy.status();
  config.policy = *policy;
  return config;
}

absl::StatusOr<RoarJobConfig> RoarJobConfigFromJson(const json& value,
                                                    const std::string& base_dir) {
  if (auto s = ExpectObject(value, ""); !s.ok()) return s;
  if (auto s = RejectUnknownKeys(
          value, "",
          {"seed", "output_dir", "threads", "methods", "rankings", "quantiles",
           "replicates", "max_instances", "ridge_lambda", "huber_delta",
           "dataset"});
      !s.ok()) {
    return s;
  }
  RoarJobConfig config;
  auto seed = ReadSeed(value, "seed", "", 0);
  if (!seed.ok()) return seed.status();
  config.roar.seed = *seed;
  auto output = ReadString(value, "output_dir", "", "");
  if (!output.ok()) return output.status();
  config.output_dir = *output;
  auto threads = ReadInt(value, "threads", "", 0);
  if (!threads.ok()) return threads.status();
  if (*threads < 0) return absl::InvalidArgumentError("threads: must be >= 0");
  config.roar.threads = static_cast<int>(*threads);
  auto replicates = ReadInt(value, "replicates", "", 1);
  if (!replicates.ok()) return replicates.status();
  if (*replicates < 1) {
    return absl::InvalidArgumentError("replicates: must be >= 1");
  }
  config.roar.replicates = static_cast<int>(*replicates);
  auto max_instances = ReadInt(value, "max_instances", "", config.roar.max_instances);
  if (!max_instances.ok()) return max_instances.status();
  if (*max_instances < 0) {
    return absl::InvalidArgumentError("max_instances: must be >= 0");
  }
  config.roar.max_instances = static_cast<int>(*max_instances);
  auto lambda = ReadDouble(value, "ridge_lambda", "", config.ridge_lambda);
  if (!lambda.ok()) return lambda.status();
  if (!(*lambda > 0.0)) {
    return absl::InvalidArgumentError("ridge_lambda: must be positive");
  }
  config.ridge_lambda = *lambda;
  auto delta = ReadDouble(value, "huber_delta", "", config.roar.huber_delta);
  if (!delta.ok()) return delta.status();
  if (!(*delta > 0.0)) {
    return absl::InvalidArgumentError("huber_delta: must be positive");
  }
  config.roar.huber_delta = *delta;

  auto rankings = ReadStringList(value, "rankings", "", {"signed", "absolute"});
  if (!rankings.ok()) return rankings.status();
  config.roar.rankings.clear();
  for (const std::string& r : *rankings) {
    auto mode = ParseRankingMode(r);
    if (!mode.ok()) return AtPath(mode.status(), "rankings");
    config.roar.rankings.push_back(*mode);
  }
  if (config.roar.rankings.empty()) {
    return absl::InvalidArgumentError("rankings: at least one ranking mode");
  }
  if (value.contains("quantiles")) {
    const json& q = value["quantiles"];
    if (!q.is_array() || q.empty()) {
      return absl::InvalidArgumentError(
          "quantiles: expected a non-empty list of numbers");
    }
    config.roar.quantiles.clear();
    for (size_t i = 0; i < q.size(); ++i) {
      if (!q[i].is_number() || !(q[i].get<double>() > 0.0) ||
          q[i].get<double>() > 1.0) {
        return absl::InvalidArgumentError(
            absl::StrCat("quantiles[", i, "]: must be a number in (0, 1]"));
      }
      config.roar.quantiles.push_back(q[i].get<double>());
    }
  }
  auto methods = ReadMethods(value, "");
  if (!methods.ok()) return methods.status();
  config.methods = *std::move(methods);
  if (!value.contains("dataset")) {
    return absl::InvalidArgumentError("dataset: required");
  }
  auto dataset = DatasetConfigFromJson(value["dataset"], "dataset", base_dir);
  if (!dataset.ok()) return dataset.status();
  config.dataset = *std::move(dataset);
  return config;
}

}  // namespace abc_bench
