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

// abc_bench: decompose | curve | attribute | experiment | roar | selfcheck.
// Exit codes: 0 success, 1 check or compute failure, 2 usage/config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abc_bench/anchored_decomposition.h"
#include "abc_bench/attribution.h"
#include "abc_bench/config.h"
#include "abc_bench/curve_metrics.h"
#include "abc_bench/dataset.h"
#include "abc_bench/experiment.h"
#include "abc_bench/format.h"
#include "abc_bench/job_config.h"
#include "abc_bench/model_spec.h"
#include "abc_bench/parallel.h"
#include "abc_bench/policy.h"
#include "abc_bench/roar.h"
#include "abc_bench/selfcheck.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "json.hpp"

namespace abc_bench {
namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct GlobalFlags {
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool threads_given = false;
};

int Report(const absl::Status& status, int code) {
  std::cerr << "abc_bench: " << status.message() << "\n";
  return code;
}

int Usage(const std::string& message) {
  std::cerr << "abc_bench: " << message << "\n";
  return kUsage;
}

absl::StatusOr<std::vector<double>> ParseNumbers(const std::string& text,
                                                 const std::string& flag) {
  std::vector<double> out;
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    double v;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(part), &v)) {
      return absl::InvalidArgumentError(
          absl::StrCat(flag, ": cannot parse \"", std::string(part), "\""));
    }
    out.push_back(v);
  }
  return out;
}

absl::StatusOr<std::vector<int>> ParseOneBasedList(const std::string& text,
                                                   int n,
                                                   const std::string& flag) {
  std::vector<int> out;
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    int j;
    if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(part), &j) || j < 1 ||
        j > n) {
      return absl::InvalidArgumentError(absl::StrCat(
          flag, ": \"", std::string(part), "\" is not a feature in 1..", n));
    }
    out.push_back(j - 1);
  }
  return out;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipWhitespace())) {
    out.emplace_back(absl::StripAsciiWhitespace(part));
  }
  return out;
}

// Where a single (x, x_ref) pair comes from: inline values or dataset rows,
// optionally with the reference picked by a policy.
struct PairFlags {
  std::string model;
  std::string x;
  std::string x_ref;
  std::string binary;
  std::string data;
  std::string schema;
  int row = 0;
  int ref_row = 0;
  std::string policy;

  void Register(CLI::App* cmd) {
    cmd->add_option("--model", model,
                    "Model spec, e.g. linear:0:1,2, multilinear:3:1=3,2=2,1+2=-1.5, "
                    "logistic:0:1,-1, a JSON object, or @file.json")
        ->required();
    cmd->add_option("--x", x, "Target point, comma-separated");
    cmd->add_option("--xref", x_ref, "Reference point, comma-separated");
    cmd->add_option("--binary", binary,
                    "1-indexed binary features for inline points, e.g. 2,4");
    cmd->add_option("--data", data, "CSV file supplying the points");
    cmd->add_option("--schema", schema, "Schema file for --data (JSON or TOML)");
    cmd->add_option("--row", row, "1-indexed data row used as x");
    cmd->add_option("--ref-row", ref_row, "1-indexed data row used as x'");
    cmd->add_option("--policy", policy,
                    "Reference policy over the data rows: counterfactual, "
                    "one_to_one, average");
  }
};

struct ResolvedPair {
  ModelHandle model;
  Point x;
  Point x_ref;
  std::string reference;
};

// Usage problems come back as InvalidArgument; anything else is a compute
// failure.
absl::StatusOr<ModelHandle> LoadModel(const std::string& spec,
                                      const std::optional<FeatureSpace>& space) {
  if (!spec.empty() && spec.front() == '@') {
    auto value = LoadConfigFile(spec.substr(1));
    if (!value.ok()) return absl::InvalidArgumentError(value.status().message());
    return ModelFromJson(*value, space);
  }
  return ParseModelSpec(spec, space);
}

absl::StatusOr<ResolvedPair> ResolvePair(const PairFlags& f,
                                         const GlobalFlags& g) {
  ResolvedPair out;
  if (f.data.empty()) {
    if (f.x.empty()) return absl::InvalidArgumentError("--x is required without --data");
    if (f.x_ref.empty()) {
      return absl::InvalidArgumentError(
          "--xref is required (or use --data with --ref-row or --policy)");
    }
    if (!f.policy.empty() || f.row || f.ref_row) {
      return absl::InvalidArgumentError("--policy, --row and --ref-row need --data");
    }
    auto x = ParseNumbers(f.x, "--x");
    if (!x.ok()) return x.status();
    auto x_ref = ParseNumbers(f.x_ref, "--xref");
    if (!x_ref.ok()) return x_ref.status();
    if (x->size() != x_ref->size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "--x has ", x->size(), " values but --xref has ", x_ref->size()));
    }
    std::optional<FeatureSpace> space;
    if (!f.binary.empty()) {
      auto binary = ParseOneBasedList(f.binary, x->size(), "--binary");
      if (!binary.ok()) return binary.status();
      std::vector<FeatureKind> kinds(x->size(), FeatureKind::kContinuous);
      for (int j : *binary) kinds[j] = FeatureKind::kBinary;
      auto created = FeatureSpace::Create(kinds);
      if (!created.ok()) return created.status();
      space = *created;
    }
    auto model = LoadModel(f.model, space);
    if (!model.ok()) return absl::InvalidArgumentError(model.status().message());
    out.model = *model;
    out.x = Point(*x);
    out.x_ref = Point(*x_ref);
    if (auto s = ValidatePoint((*model)->space(), out.x); !s.ok()) {
      return absl::InvalidArgumentError(absl::StrCat("--x: ", s.message()));
    }
    if (auto s = ValidatePoint((*model)->space(), out.x_ref); !s.ok()) {
      return absl::InvalidArgumentError(absl::StrCat("--xref: ", s.message()));
    }
    out.reference = "inline";
    return out;
  }

  if (f.schema.empty()) return absl::InvalidArgumentError("--data needs --schema");
  if (!f.x.empty()) return absl::InvalidArgumentError("--x and --data are exclusive");
  auto schema = LoadSchemaFile(f.schema);
  if (!schema.ok()) return absl::InvalidArgumentError(schema.status().message());
  auto ds = LoadCsv(f.data, *schema);
  if (!ds.ok()) return absl::InvalidArgumentError(ds.status().message());
  if (schema->normalize) {
    if (auto s = ds->Normalize(); !s.ok()) return s;
  }
  const int rows = ds->num_rows();
  if (f.row < 1 || f.row > rows) {
    return absl::InvalidArgumentError(
        absl::StrCat("--row must be in 1..", rows, " with --data"));
  }
  auto model = LoadModel(f.model, ds->space());
  if (!model.ok()) return absl::InvalidArgumentError(model.status().message());
  out.model = *model;
  out.x = ds->row(f.row - 1);

  if (!f.x_ref.empty()) {
    auto x_ref = ParseNumbers(f.x_ref, "--xref");
    if (!x_ref.ok()) return x_ref.status();
    out.x_ref = Point(*x_ref);
    if (auto s = ValidatePoint(ds->space(), out.x_ref); !s.ok()) {
      return absl::InvalidArgumentError(absl::StrCat("--xref: ", s.message()));
    }
    out.reference = "inline";
    return out;
  }
  if (f.ref_row != 0) {
    if (f.ref_row < 1 || f.ref_row > rows) {
      return absl::InvalidArgumentError(absl::StrCat("--ref-row must be in 1..", rows));
    }
    out.x_ref = ds->row(f.ref_row - 1);
    out.reference = absl::StrCat("row ", f.ref_row);
    return out;
  }
  if (f.policy.empty()) {
    return absl::InvalidArgumentError(
        "a reference is required: --xref, --ref-row or --policy");
  }
  auto kind = ParsePolicyKind(f.policy);
  if (!kind.ok()) return absl::InvalidArgumentError(kind.status().message());
  std::vector<int> pool(rows);
  std::iota(pool.begin(), pool.end(), 0);
  const int target = f.row - 1;
  switch (*kind) {
    case PolicyKind::kCounterfactual: {
      PolicySpec spec;
      spec.kind = *kind;
      spec.min_diff_features = std::min(spec.min_diff_features, ds->num_features());
      auto ref = SelectCounterfactual(*ds, **model, target, pool, spec);
      if (!ref.ok()) return ref.status();
      out.x_ref = ds->row(*ref);
      out.reference = absl::StrCat("counterfactual row ", *ref + 1);
      break;
    }
    case PolicyKind::kOneToOne: {
      if (rows < 2) return absl::InvalidArgumentError("one_to_one needs two rows");
      std::mt19937_64 rng(DeriveSeed(g.seed, {static_cast<std::uint64_t>(target)}));
      std::uniform_int_distribution<int> pick(0, rows - 2);
      int ref = pick(rng);
      if (ref >= target) ++ref;
      out.x_ref = ds->row(ref);
      out.reference = absl::StrCat("random row ", ref + 1);
      break;
    }
    case PolicyKind::kAverage: {
      auto ref = AverageReference(*ds, pool);
      if (!ref.ok()) return ref.status();
      out.x_ref = *ref;
      out.reference = "average";
      break;
    }
  }
  return out;
}

absl::StatusOr<std::vector<MethodSpec>> ParseMethods(const std::string& text) {
  std::vector<MethodSpec> out;
  std::set<std::string> labels;
  for (const std::string& name : SplitList(text)) {
    auto spec = ParseMethodSpec(name);
    if (!spec.ok()) return spec.status();
    if (!labels.insert(spec->label).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("method \"", spec->label, "\" listed twice"));
    }
    out.push_back(*spec);
  }
  return out;
}

std::ostream* OpenOutput(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path);
  return file ? &file : nullptr;
}

// ---------------------------------------------------------------------------

struct DecomposeFlags {
  PairFlags pair;
  bool shapley = false;
  std::string output;
};

int RunDecompose(const DecomposeFlags& f, const GlobalFlags& g) {
  auto pair = ResolvePair(f.pair, g);
  if (!pair.ok()) {
    return Report(pair.status(), absl::IsInvalidArgument(pair.status()) ? kUsage
                                                                        : kFailure);
  }
  auto d = Decompose(*pair->model, pair->x, pair->x_ref);
  if (!d.ok()) return Report(d.status(), kFailure);
  std::ofstream file;
  std::ostream* out = OpenOutput(f.output, file);
  if (out == nullptr) return Usage(absl::StrCat("cannot write ", f.output));
  if (f.shapley) {
    const std::vector<double> phi = ShapleyFromDividends(*d);
    *out << "feature,name,shapley\n";
    for (int j = 0; j < d->n(); ++j) {
      *out << j + 1 << "," << CsvField(pair->model->space().label(j)) << ","
           << FormatDouble(phi[j]) << "\n";
    }
  } else {
    WriteDeltaCsv(*d, *out);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct CurveFlags {
  PairFlags pair;
  std::string order;
  std::string methods;
  int random_orders = 0;
  std::string mode = "insertion";
  std::string output_dir;
};

struct Curve {
  std::string source;
  TrajectoryReport report;
};

void WriteCurveSummary(const std::vector<Curve>& curves, std::ostream& out) {
  out << "curve,source,mode,order,auc,aul,abc,abc_per_feature\n";
  for (size_t i = 0; i < curves.size(); ++i) {
    const TrajectoryReport& r = curves[i].report;
    out << i << "," << CsvField(curves[i].source) << "," << CurveModeName(r.mode)
        << "," << FormatOrderOneBased(r.ordering.perm, " ") << ","
        << FormatDouble(r.auc) << "," << FormatDouble(r.aul) << ","
        << FormatDouble(r.abc) << "," << FormatDouble(r.abc_per_feature())
        << "\n";
  }
}

void WriteCurveTrajectories(const std::vector<Curve>& curves, std::ostream& out) {
  out << "curve,source,mode,step,feature,value\n";
  for (size_t i = 0; i < curves.size(); ++i) {
    const TrajectoryReport& r = curves[i].report;
    for (int k = 0; k < static_cast<int>(r.values.size()); ++k) {
      out << i << "," << CsvField(curves[i].source) << "," << CurveModeName(r.mode)
          << "," << k << ",";
      if (k > 0) out << r.ordering.perm[k - 1] + 1;
      out << "," << FormatDouble(r.values[k]) << "\n";
    }
  }
}

int RunCurve(const CurveFlags& f, const GlobalFlags& g) {
  std::vector<CurveMode> modes;
  if (f.mode == "insertion" || f.mode == "both") modes.push_back(CurveMode::kInsertion);
  if (f.mode == "deletion" || f.mode == "both") modes.push_back(CurveMode::kDeletion);
  if (modes.empty()) {
    return Usage("--mode must be insertion, deletion or both");
  }
  if (f.random_orders < 0) return Usage("--random-orders must be >= 0");
  auto methods = ParseMethods(f.methods);
  if (!methods.ok()) return Report(methods.status(), kUsage);
  if (f.order.empty() && methods->empty() && f.random_orders == 0) {
    return Usage("nothing to plot: give --order, --methods or --random-orders");
  }
  auto pair = ResolvePair(f.pair, g);
  if (!pair.ok()) {
    return Report(pair.status(), absl::IsInvalidArgument(pair.status()) ? kUsage
                                                                        : kFailure);
  }
  const Model& model = *pair->model;
  const int n = model.num_features();

  // Each entry is an insertion ranking; deletion runs along its reverse.
  std::vector<std::pair<std::string, std::vector<int>>> rankings;
  if (!f.order.empty()) {
    auto perm = ParseOneBasedList(f.order, n, "--order");
    if (!perm.ok()) return Report(perm.status(), kUsage);
    auto checked = MakeOrdering(*perm, "given");
    if (!checked.ok()) return Report(checked.status(), kUsage);
    rankings.emplace_back("given", checked->perm);
  }
  for (size_t m = 0; m < methods->size(); ++m) {
    const MethodSpec& spec = (*methods)[m];
    auto attribution = ComputeAttribution(spec, model, pair->x, pair->x_ref,
                                          DeriveSeed(g.seed, {m}));
    if (!attribution.ok()) {
      return Report(absl::Status(attribution.status().code(),
                                 absl::StrCat(spec.label, ": ",
                                              attribution.status().message())),
                    kFailure);
    }
    rankings.emplace_back(spec.label,
                          InsertionOrderFromScores(attribution->scores, spec.label).perm);
  }
  for (int k = 0; k < f.random_orders; ++k) {
    std::mt19937_64 rng(DeriveSeed(g.seed, {0x72616e64ULL, static_cast<std::uint64_t>(k)}));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    rankings.emplace_back(absl::StrCat("random", k + 1), perm);
  }

  std::vector<Curve> curves;
  for (const auto& [source, perm] : rankings) {
    for (CurveMode mode : modes) {
      absl::StatusOr<TrajectoryReport> report;
      if (mode == CurveMode::kInsertion) {
        report = InsertionCurve(model, pair->x, pair->x_ref, {perm, source});
      } else {
        report = DeletionCurve(model, pair->x, pair->x_ref,
                               {std::vector<int>(perm.rbegin(), perm.rend()), source});
      }
      if (!report.ok()) return Report(report.status(), kFailure);
      curves.push_back({source, *std::move(report)});
    }
  }

  WriteCurveSummary(curves, std::cout);
  std::cout << "\n";
  WriteCurveTrajectories(curves, std::cout);
  if (!f.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(f.output_dir, ec);
    std::ofstream summary(f.output_dir + "/curve_summary.csv");
    std::ofstream trajectories(f.output_dir + "/trajectories.csv");
    if (ec || !summary || !trajectories) {
      return Usage(absl::StrCat("cannot write to ", f.output_dir));
    }
    WriteCurveSummary(curves, summary);
    WriteCurveTrajectories(curves, trajectories);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct AttributeFlags {
  PairFlags pair;
  std::string methods = "shapley";
  std::string format = "csv";
};

int RunAttribute(const AttributeFlags& f, const GlobalFlags& g) {
  if (f.format != "csv" && f.format != "json") {
    return Usage("--format must be csv or json");
  }
  auto methods = ParseMethods(f.methods);
  if (!methods.ok()) return Report(methods.status(), kUsage);
  if (methods->empty()) return Usage("--methods is empty");
  auto pair = ResolvePair(f.pair, g);
  if (!pair.ok()) {
    return Report(pair.status(), absl::IsInvalidArgument(pair.status()) ? kUsage
                                                                        : kFailure);
  }
  const Model& model = *pair->model;
  std::vector<AttributionVector> results;
  for (size_t m = 0; m < methods->size(); ++m) {
    auto a = ComputeAttribution((*methods)[m], model, pair->x, pair->x_ref,
                                DeriveSeed(g.seed, {m}));
    if (!a.ok()) {
      return Report(absl::Status(a.status().code(),
                                 absl::StrCat((*methods)[m].label, ": ",
                                              a.status().message())),
                    kFailure);
    }
    results.push_back(*std::move(a));
  }
  if (f.format == "json") {
    json out = json::array();
    for (const AttributionVector& a : results) {
      json meta = json::object();
      for (const auto& [k, v] : a.metadata) meta[k] = v;
      out.push_back({{"method", a.method},
                     {"scores", a.scores},
                     {"sum", a.sum()},
                     {"insertion_order",
                      FormatOrderOneBased(InsertionOrderFromScores(a.scores, "").perm, " ")},
                     {"metadata", meta}});
    }
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  std::cout << "method,feature,name,score\n";
  for (const AttributionVector& a : results) {
    for (int j = 0; j < static_cast<int>(a.scores.size()); ++j) {
      std::cout << CsvField(a.method) << "," << j + 1 << ","
                << CsvField(model.space().label(j)) << ","
                << FormatDouble(a.scores[j]) << "\n";
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct JobFlags {
  std::string config;
  std::string output;
  std::string methods;
  std::string policy;
  int max_pairs = -1;
  bool curves = false;
  int replicates = 0;
};

// Applies flag overrides to the parsed config before validation.
void ApplyCommonOverrides(json& value, const JobFlags& f, const GlobalFlags& g) {
  if (g.seed_given) value["seed"] = g.seed;
  if (g.threads_given) value["threads"] = g.threads;
  if (!f.output.empty()) value["output_dir"] = f.output;
  if (!f.methods.empty()) {
    value["methods"] = SplitList(f.methods);
    value.erase("differences");
  }
}

absl::StatusOr<json> LoadJob(const JobFlags& f) {
  auto value = LoadConfigFile(f.config);
  if (!value.ok()) return value.status();
  if (!value->is_object()) {
    return absl::InvalidArgumentError(absl::StrCat(f.config, ": top level must be a table"));
  }
  return value;
}

int RunExperimentCommand(const JobFlags& f, const GlobalFlags& g) {
  auto value = LoadJob(f);
  if (!value.ok()) return Report(value.status(), kUsage);
  ApplyCommonOverrides(*value, f, g);
  if (!f.policy.empty()) {
    if ((*value).contains("policy") && (*value)["policy"].is_object()) {
      (*value)["policy"]["name"] = f.policy;
    } else {
      (*value)["policy"] = f.policy;
    }
  }
  if (f.max_pairs >= 0) (*value)["max_pairs"] = f.max_pairs;
  if (f.curves) (*value)["write_curves"] = true;

  auto config = ExperimentConfigFromJson(*value, DirectoryOf(f.config));
  if (!config.ok()) {
    return Report(absl::InvalidArgumentError(
                      absl::StrCat(f.config, ": ", config.status().message())),
                  kUsage);
  }
  auto result = RunExperiment(*config);
  if (!result.ok()) {
    return Report(result.status(), absl::IsInvalidArgument(result.status()) ||
                                           absl::IsNotFound(result.status())
                                       ? kUsage
                                       : kFailure);
  }
  PrintSummary(*result, std::cout);
  if (!config->output_dir.empty()) {
    if (auto s = WriteExperimentOutputs(*result, config->output_dir,
                                        config->write_curves);
        !s.ok()) {
      return Report(s, kFailure);
    }
    std::cout << "wrote " << config->output_dir << "/summary.json\n";
  }
  return kOk;
}

void PrintRoarSummary(const RoarReport& report, std::ostream& out) {
  out << "trainer: " << report.trainer << "\n";
  out << "intact-data loss: " << FormatDouble(report.MeanBaseLoss()) << "\n";
  out << "method,ranking_mode,quantile,mean_loss,standard_error,replicates\n";
  for (const RoarSummaryRow& row : report.Summary()) {
    out << CsvField(row.method) << "," << RankingModeName(row.ranking) << ","
        << FormatDouble(row.quantile) << "," << FormatDouble(row.mean_loss) << ","
        << FormatDouble(row.standard_error) << "," << row.replicates << "\n";
  }
}

int RunRoarCommand(const JobFlags& f, const GlobalFlags& g) {
  auto value = LoadJob(f);
  if (!value.ok()) return Report(value.status(), kUsage);
  ApplyCommonOverrides(*value, f, g);
  if (f.replicates > 0) (*value)["replicates"] = f.replicates;

  auto config = RoarJobConfigFromJson(*value, DirectoryOf(f.config));
  if (!config.ok()) {
    return Report(absl::InvalidArgumentError(
                      absl::StrCat(f.config, ": ", config.status().message())),
                  kUsage);
  }
  auto ds = LoadDataset(config->dataset, config->roar.seed);
  if (!ds.ok()) return Report(ds.status(), kUsage);
  RoarConfig roar = config->roar;
  if (roar.threads <= 0) roar.threads = DefaultThreadCount();
  std::vector<RoarMethod> methods;
  for (const MethodSpec& spec : config->methods) {
    methods.push_back(RoarMethodFromSpec(spec));
  }
  RidgeTrainer trainer(config->ridge_lambda);
  auto report = RoarRun(*ds, trainer, methods, roar);
  if (!report.ok()) return Report(report.status(), kFailure);
  PrintRoarSummary(*report, std::cout);
  if (!config->output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config->output_dir, ec);
    std::ofstream csv(config->output_dir + "/roar.csv");
    std::ofstream summary(config->output_dir + "/roar_summary.json");
    if (ec || !csv || !summary) {
      return Report(absl::PermissionDeniedError(
                        absl::StrCat("cannot write to ", config->output_dir)),
                    kFailure);
    }
    WriteRoarCsv(*report, csv);
    summary << RoarSummaryJson(*report).dump(2) << "\n";
    std::cout << "wrote " << config->output_dir << "/roar_summary.json\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct SelfCheckFlags {
  int models = 25;
  int max_n = 7;
};

int RunSelfCheckCommand(const SelfCheckFlags& f, const GlobalFlags& g) {
  if (f.models < 1) return Usage("--models must be >= 1");
  if (f.max_n < 2 || f.max_n > 7) return Usage("--max-n must be in 2..7");
  SelfCheckOptions options;
  if (g.seed_given) options.seed = g.seed;
  options.models = f.models;
  options.max_n = f.max_n;
  int failed = 0;
  for (const IdentityCheck& check : RunSelfCheck(options)) {
    std::cout << (check.passed ? "PASS  " : "FAIL  ") << check.name << "\n"
              << "      " << check.detail << "\n";
    if (!check.passed) ++failed;
  }
  if (failed > 0) {
    std::cout << failed << " identity check(s) failed\n";
    return kFailure;
  }
  std::cout << "all identity checks passed\n";
  return kOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Insertion/deletion ABC benchmark for feature attributions"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--threads", g.threads,
                 "Worker threads (0 = available parallelism, 1 = serial)")
      ->envname("ABC_BENCH_THREADS")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "Base seed for every random choice");

  DecomposeFlags decompose;
  CLI::App* dec = app.add_subcommand(
      "decompose", "Dump the anchored decomposition (or Shapley values) of a pair");
  dec->fallthrough();
  decompose.pair.Register(dec);
  dec->add_flag("--shapley", decompose.shapley, "Print Shapley values instead of deltas");
  dec->add_option("--output", decompose.output, "Output file (default stdout)");

  CurveFlags curve;
  CLI::App* cur = app.add_subcommand(
      "curve", "Insertion/deletion trajectories and AUC/AUL/ABC for one pair");
  cur->fallthrough();
  curve.pair.Register(cur);
  cur->add_option("--order", curve.order,
                  "Insertion ranking as 1-indexed features, most important first");
  cur->add_option("--methods", curve.methods,
                  "Attribution methods whose rankings are plotted, comma-separated");
  cur->add_option("--random-orders", curve.random_orders,
                  "Number of extra uniformly random orderings");
  cur->add_option("--mode", curve.mode, "insertion, deletion or both")
      ->capture_default_str();
  cur->add_option("--output-dir", curve.output_dir,
                  "Also write curve_summary.csv and trajectories.csv here");

  AttributeFlags attribute;
  CLI::App* att = app.add_subcommand("attribute", "Attribution scores for one pair");
  att->fallthrough();
  attribute.pair.Register(att);
  att->add_option("--methods", attribute.methods,
                  "Comma-separated methods: shapley, ks:exact, ks:sampled[:N], "
                  "ig:cast|ig:interp|ig:jump[:nodes], vanilla_grad, "
                  "input_x_grad, lime[:N], random")
      ->capture_default_str();
  att->add_option("--format", attribute.format, "csv or json")->capture_default_str();

  JobFlags experiment;
  CLI::App* exp = app.add_subcommand("experiment", "Run a multi-method comparison");
  exp->fallthrough();
  exp->add_option("--config", experiment.config, "Experiment config (TOML or JSON)")
      ->required();
  exp->add_option("--output", experiment.output, "Output directory (overrides output_dir)");
  exp->add_option("--methods", experiment.methods, "Methods, comma-separated (overrides methods)");
  exp->add_option("--policy", experiment.policy,
                  "counterfactual, one_to_one or average (overrides policy)");
  exp->add_option("--max-pairs", experiment.max_pairs, "Pairs to evaluate (0 = all)");
  exp->add_flag("--curves", experiment.curves, "Write per-pair trajectory CSVs");

  JobFlags roar;
  CLI::App* roa = app.add_subcommand("roar", "Remove-and-retrain evaluation");
  roa->fallthrough();
  roa->add_option("--config", roar.config, "ROAR config (TOML or JSON)")->required();
  roa->add_option("--output", roar.output, "Output directory (overrides output_dir)");
  roa->add_option("--methods", roar.methods, "Methods, comma-separated (overrides methods)");
  roa->add_option("--replicates", roar.replicates, "Replicates (overrides replicates)");

  SelfCheckFlags selfcheck;
  CLI::App* sc = app.add_subcommand("selfcheck", "Run the oracle identity suite");
  sc->fallthrough();
  sc->add_option("--models", selfcheck.models, "Random models per check")
      ->capture_default_str();
  sc->add_option("--max-n", selfcheck.max_n, "Largest feature count (2..7)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  g.seed_given = app.count("--seed") > 0;
  g.threads_given = app.count("--threads") > 0;

  if (*dec) return RunDecompose(decompose, g);
  if (*cur) return RunCurve(curve, g);
  if (*att) return RunAttribute(attribute, g);
  if (*exp) return RunExperimentCommand(experiment, g);
  if (*roa) return RunRoarCommand(roar, g);
  if (*sc) return RunSelfCheckCommand(selfcheck, g);
  return kUsage;
}

}  // namespace
}  // namespace abc_bench

int main(int argc, char** argv) { return abc_bench::Main(argc, argv); }
