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

#include "abc_bench/experiment.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "abc_bench/format.h"
#include "abc_bench/parallel.h"
#include "absl/strings/str_cat.h"

namespace abc_bench {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool HasMode(std::span<const CurveMode> modes, CurveMode mode) {
  return std::find(modes.begin(), modes.end(), mode) != modes.end();
}

double AbcFor(const PairRecord& r, CurveMode mode) {
  return mode == CurveMode::kInsertion ? r.abc_insertion : r.abc_deletion;
}

void RunCell(const Model& model, const Pair& pair, const MethodSpec& spec,
             const ComparisonOptions& options, std::uint64_t seed,
             PairRecord* record) {
  auto attribution =
      ComputeAttribution(spec, model, pair.target, pair.reference, seed);
  if (!attribution.ok()) {
    record->error = std::string(attribution.status().message());
    return;
  }
  for (double s : attribution->scores) {
    if (!std::isfinite(s)) {
      record->error = "attribution has non-finite scores";
      return;
    }
  }
  if (auto it = attribution->metadata.find("evaluations");
      it != attribution->metadata.end()) {
    record->evaluations = it->second;
  }
  const Ordering insertion =
      InsertionOrderFromScores(attribution->scores, spec.label);
  Ordering deletion = insertion;
  std::reverse(deletion.perm.begin(), deletion.perm.end());
  record->scores = attribution->scores;
  record->insertion_order = insertion.perm;
  record->abc_insertion = record->auc_insertion = kNaN;
  record->abc_deletion = record->auc_deletion = kNaN;
  if (HasMode(options.modes, CurveMode::kInsertion)) {
    auto curve = InsertionCurve(model, pair.target, pair.reference, insertion);
    if (!curve.ok()) {
      record->error = std::string(curve.status().message());
      return;
    }
    record->abc_insertion = curve->abc;
    record->auc_insertion = curve->auc;
    record->aul = curve->aul;
    if (options.keep_curves) record->insertion_values = curve->values;
  }
  if (HasMode(options.modes, CurveMode::kDeletion)) {
    auto curve = DeletionCurve(model, pair.target, pair.reference, deletion);
    if (!curve.ok()) {
      record->error = std::string(curve.status().message());
      return;
    }
    record->abc_deletion = curve->abc;
    record->auc_deletion = curve->auc;
    record->aul = curve->aul;
    if (options.keep_curves) record->deletion_values = curve->values;
  }
  record->ok = true;
}

json NumberOrNull(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string SafeFileName(const std::string& s) {
  std::string out;
  for (char c : s) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                          c == '-'
                      ? c
                      : '_');
  }
  return out;
}

}  // namespace

std::pair<double, double> MeanAndStandardError(std::span<const double> values) {
  if (values.empty()) return {kNaN, kNaN};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return {mean, kNaN};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

double PearsonCorrelation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) return kNaN;
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return kNaN;
  return sab / std::sqrt(saa * sbb);
}

ExperimentResult RunComparison(const Model& model, const PairSet& pairs,
                               std::span<const MethodSpec> methods,
                               const ComparisonOptions& options) {
  ExperimentResult result;
  result.pairs = pairs;
  result.modes = options.modes;
  result.seed = options.seed;
  result.model_description = model.Describe();
  for (const MethodSpec& m : methods) result.methods.push_back(m.label);
  const size_t method_count = methods.size();
  result.records.resize(pairs.pairs.size() * method_count);
  ParallelFor(pairs.pairs.size(), options.threads, [&](size_t p) {
    const Pair& pair = pairs.pairs[p];
    const int differing = CountDifferences(pair.target, pair.reference);
    int differing_binary = 0;
    for (int j : model.space().BinaryIndices()) {
      differing_binary += pair.target[j] != pair.reference[j];
    }
    for (size_t m = 0; m < method_count; ++m) {
      PairRecord& r = result.records[p * method_count + m];
      r.pair_index = static_cast<int>(p);
      r.target_row = pair.target_row;
      r.reference_row = pair.reference_row;
      r.method_index = static_cast<int>(m);
      r.method = methods[m].label;
      r.differing = differing;
      r.differing_binary = differing_binary;
      RunCell(model, pair, methods[m], options,
              DeriveSeed(options.seed, {p, m}), &r);
    }
  });
  result.failures.assign(method_count, 0);
  for (const PairRecord& r : result.records) {
    if (!r.ok) ++result.failures[r.method_index];
  }
  result.table = BuildComparisonTable(result.records, result.methods,
                                      options.modes, options.differences);
  result.asymmetry = ComputeAsymmetryStats(result.records, result.methods,
                                           PolicyKindName(pairs.policy.kind));
  return result;
}

ComparisonTable BuildComparisonTable(
    std::span<const PairRecord> records, std::span<const std::string> methods,
    std::span<const CurveMode> modes,
    std::span<const std::pair<std::string, std::string>> differences) {
  ComparisonTable table;
  for (CurveMode mode : modes) {
    for (const std::string& method : methods) {
      std::vector<double> values;
      std::vector<double> evals;
      for (const PairRecord& r : records) {
        if (r.method != method || !r.ok) continue;
        values.push_back(AbcFor(r, mode));
        if (r.evaluations.has_value()) evals.push_back(*r.evaluations);
      }
      TableRow row;
      row.mode = mode;
      row.method = method;
      std::tie(row.mean, row.standard_error) = MeanAndStandardError(values);
      row.count = static_cast<int>(values.size());
      if (!evals.empty()) {
        row.mean_evaluations =
            std::accumulate(evals.begin(), evals.end(), 0.0) / evals.size();
      }
      table.rows.push_back(std::move(row));
    }
    for (const auto& [first, second] : differences) {
      // Match cells by pair index.
      std::map<int, double> a, b;
      for (const PairRecord& r : records) {
        if (!r.ok) continue;
        if (r.method == first) a[r.pair_index] = AbcFor(r, mode);
        if (r.method == second) b[r.pair_index] = AbcFor(r, mode);
      }
      std::vector<double> da, db, diff;
      for (const auto& [pair, va] : a) {
        auto it = b.find(pair);
        if (it == b.end()) continue;
        da.push_back(va);
        db.push_back(it->second);
        diff.push_back(va - it->second);
      }
      DifferenceRow row;
      row.mode = mode;
      row.first = first;
      row.second = second;
      std::tie(row.mean, row.paired_standard_error) = MeanAndStandardError(diff);
      const auto [ma, sa] = MeanAndStandardError(da);
      const auto [mb, sb] = MeanAndStandardError(db);
      row.mean_first = ma;
      row.mean_second = mb;
      row.unpaired_standard_error = std::sqrt(sa * sa + sb * sb);
      row.count = static_cast<int>(diff.size());
      table.differences.push_back(std::move(row));
    }
  }
  return table;
}

AsymmetryStats ComputeAsymmetryStats(std::span<const PairRecord> records,
                                     std::span<const std::string> methods,
                                     const std::string& policy) {
  AsymmetryStats stats;
  stats.policy = policy;
  std::map<int, const PairRecord*> by_pair;
  for (const PairRecord& r : records) by_pair.emplace(r.pair_index, &r);
  double differing = 0.0, differing_binary = 0.0;
  for (const auto& [_, r] : by_pair) {
    differing += r->differing;
    differing_binary += r->differing_binary;
  }
  stats.pairs = static_cast<int>(by_pair.size());
  stats.mean_differing = stats.pairs ? differing / stats.pairs : kNaN;
  stats.mean_differing_binary = stats.pairs ? differing_binary / stats.pairs : kNaN;
  for (const std::string& method : methods) {
    std::vector<double> ins, del;
    for (const PairRecord& r : records) {
      if (r.method != method || !r.ok) continue;
      if (!std::isfinite(r.abc_insertion) || !std::isfinite(r.abc_deletion)) {
        continue;
      }
      ins.push_back(r.abc_insertion);
      del.push_back(r.abc_deletion);
    }
    stats.correlations.push_back(
        {method, PearsonCorrelation(ins, del), static_cast<int>(ins.size())});
  }
  return stats;
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config) {
  auto ds = LoadDataset(config.dataset, config.seed);
  if (!ds.ok()) return ds.status();
  auto model = BuildModel(config.model, ds->space(), config.dataset.base_dir);
  if (!model.ok()) return model.status();
  if (auto s = ValidatePolicySpec(config.policy, ds->num_features()); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrCat("policy: ", s.message()));
  }
  const int threads = config.threads > 0 ? config.threads : DefaultThreadCount();
  const std::vector<int>& targets = ds->test();
  const std::vector<int>& pool =
      config.policy.kind == PolicyKind::kAverage ? ds->train() : ds->test();
  auto pairs = BuildPairs(*ds, **model, config.policy, targets, pool,
                          config.max_pairs, threads);
  if (!pairs.ok()) return pairs.status();
  if (pairs->pairs.empty()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "the ", PolicyKindName(config.policy.kind),
        " policy produced no pairs (", pairs->failures.size(),
        " targets failed)"));
  }
  ComparisonOptions options;
  options.modes = config.modes;
  options.differences = config.differences;
  options.seed = config.seed;
  options.threads = threads;
  options.keep_curves = config.write_curves;
  return RunComparison(**model, *pairs, config.methods, options);
}

json SummaryJson(const ExperimentResult& result) {
  json out;
  out["model"] = result.model_description;
  out["seed"] = result.seed;
  const PolicySpec& policy = result.pairs.policy;
  json p = {{"name", PolicyKindName(policy.kind)}};
  if (policy.kind == PolicyKind::kCounterfactual) {
    p["min_diff_features"] = policy.min_diff_features;
    p["knn"] = policy.knn;
  } else if (policy.kind == PolicyKind::kOneToOne) {
    p["seed"] = policy.seed;
  }
  out["policy"] = p;
  out["pairs"] = result.pairs.pairs.size();
  out["unpaired_row"] = result.pairs.unpaired_row.has_value()
                            ? json(*result.pairs.unpaired_row + 1)
                            : json(nullptr);
  json policy_failures = json::array();
  for (const auto& [row, reason] : result.pairs.failures) {
    policy_failures.push_back({{"target_row", row + 1}, {"reason", reason}});
  }
  out["policy_failures"] = policy_failures;
  out["methods"] = result.methods;
  json modes = json::array();
  for (CurveMode m : result.modes) modes.push_back(CurveModeName(m));
  out["modes"] = modes;

  json rows = json::array();
  for (const TableRow& r : result.table.rows) {
    json row = {{"mode", CurveModeName(r.mode)},
                {"method", r.method},
                {"mean_abc", NumberOrNull(r.mean)},
                {"standard_error", NumberOrNull(r.standard_error)},
                {"count", r.count}};
    row["mean_evaluations"] = r.mean_evaluations.has_value()
                                  ? json(*r.mean_evaluations)
                                  : json(nullptr);
    rows.push_back(std::move(row));
  }
  out["table"] = rows;
  json diffs = json::array();
  for (const DifferenceRow& d : result.table.differences) {
    diffs.push_back({{"mode", CurveModeName(d.mode)},
                     {"first", d.first},
                     {"second", d.second},
                     {"mean_difference", NumberOrNull(d.mean)},
                     {"paired_standard_error", NumberOrNull(d.paired_standard_error)},
                     {"unpaired_standard_error",
                      NumberOrNull(d.unpaired_standard_error)},
                     {"mean_first", NumberOrNull(d.mean_first)},
                     {"mean_second", NumberOrNull(d.mean_second)},
                     {"count", d.count}});
  }
  out["differences"] = diffs;
  json corr = json::array();
  for (const CorrelationRow& c : result.asymmetry.correlations) {
    corr.push_back({{"method", c.method},
                    {"pearson", NumberOrNull(c.pearson)},
                    {"count", c.count}});
  }
  out["asymmetry"] = {
      {"policy", result.asymmetry.policy},
      {"pairs", result.asymmetry.pairs},
      {"mean_differing_features", NumberOrNull(result.asymmetry.mean_differing)},
      {"mean_differing_binary",
       NumberOrNull(result.asymmetry.mean_differing_binary)},
      {"insertion_deletion_correlation", corr}};
  json failures = json::object();
  for (size_t m = 0; m < result.methods.size(); ++m) {
    failures[result.methods[m]] = result.failures[m];
  }
  out["failures"] = failures;
  return out;
}

void WritePairsCsv(const ExperimentResult& result, std::ostream& out) {
  out << "pair,target_row,reference_row,method,abc_ins,abc_del,auc_ins,"
         "auc_del,aul,differing,insertion_order,status\n";
  for (const PairRecord& r : result.records) {
    out << r.pair_index + 1 << "," << r.target_row + 1 << ",";
    if (r.reference_row.has_value()) {
      out << *r.reference_row + 1;
    } else {
      out << "synthetic";
    }
    out << "," << CsvField(r.method) << ",";
    if (r.ok) {
      out << FormatDouble(r.abc_insertion) << "," << FormatDouble(r.abc_deletion)
          << "," << FormatDouble(r.auc_insertion) << ","
          << FormatDouble(r.auc_deletion) << "," << FormatDouble(r.aul) << ","
          << r.differing << "," << FormatOrderOneBased(r.insertion_order)
          << ",ok\n";
    } else {
      out << ",,,,," << r.differing << ",," << CsvField("error: " + r.error)
          << "\n";
    }
  }
}

absl::Status WriteExperimentOutputs(const ExperimentResult& result,
                                    const std::string& output_dir,
                                    bool write_curves) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", output_dir, ": ", ec.message()));
  }
  auto open = [&](const fs::path& path, std::ofstream* out) -> absl::Status {
    out->open(path, std::ios::binary);
    if (!*out) {
      return absl::PermissionDeniedError(
          absl::StrCat("cannot write ", path.string()));
    }
    return absl::OkStatus();
  };
  {
    std::ofstream out;
    if (auto s = open(fs::path(output_dir) / "summary.json", &out); !s.ok()) {
      return s;
    }
    out << SummaryJson(result).dump(2) << "\n";
  }
  {
    std::ofstream out;
    if (auto s = open(fs::path(output_dir) / "pairs.csv", &out); !s.ok()) return s;
    WritePairsCsv(result, out);
  }
  {
    std::ofstream out;
    if (auto s = open(fs::path(output_dir) / "pair_set.csv", &out); !s.ok()) {
      return s;
    }
    WritePairSetCsv(result.pairs, out);
  }
  if (!write_curves) return absl::OkStatus();
  const fs::path curves = fs::path(output_dir) / "curves";
  fs::create_directories(curves, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create ", curves.string(), ": ", ec.message()));
  }
  for (const PairRecord& r : result.records) {
    if (!r.ok) continue;
    Ordering insertion{r.insertion_order, r.method};
    Ordering deletion{std::vector<int>(r.insertion_order.rbegin(),
                                       r.insertion_order.rend()),
                      r.method};
    const std::string stem =
        absl::StrCat("pair", r.pair_index + 1, "_", SafeFileName(r.method));
    if (!r.insertion_values.empty()) {
      std::ofstream out;
      if (auto s = open(curves / (stem + "_insertion.csv"), &out); !s.ok()) {
        return s;
      }
      WriteTrajectoryCsv(MakeTrajectoryReport(CurveMode::kInsertion, insertion,
                                              r.insertion_values),
                         out);
    }
    if (!r.deletion_values.empty()) {
      std::ofstream out;
      if (auto s = open(curves / (stem + "_deletion.csv"), &out); !s.ok()) {
        return s;
      }
      WriteTrajectoryCsv(MakeTrajectoryReport(CurveMode::kDeletion, deletion,
                                              r.deletion_values),
                         out);
    }
  }
  return absl::OkStatus();
}

void PrintSummary(const ExperimentResult& result, std::ostream& out) {
  out << "model: " << result.model_description << "\n"
      << "policy: " << PolicyKindName(result.pairs.policy.kind)
      << ", pairs: " << result.pairs.pairs.size();
  if (!result.pairs.failures.empty()) {
    out << " (" << result.pairs.failures.size() << " targets without reference)";
  }
  out << "\n\n";
  out << std::left << std::setw(10) << "mode" << std::setw(22) << "method"
      << std::right << std::setw(14) << "mean ABC" << std::setw(14) << "std. err"
      << std::setw(8) << "count" << "\n";
  auto print_number = [&](double v, int width) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(6) << v;
    out << std::setw(width) << (std::isfinite(v) ? s.str() : "nan");
  };
  for (const TableRow& r : result.table.rows) {
    out << std::left << std::setw(10) << CurveModeName(r.mode) << std::setw(22)
        << r.method << std::right;
    print_number(r.mean, 14);
    print_number(r.standard_error, 14);
    out << std::setw(8) << r.count << "\n";
  }
  for (const DifferenceRow& d : result.table.differences) {
    out << std::left << std::setw(10) << CurveModeName(d.mode) << std::setw(22)
        << (d.first + " - " + d.second) << std::right;
    print_number(d.mean, 14);
    print_number(d.paired_standard_error, 14);
    out << std::setw(8) << d.count << "\n";
  }
  out << "\nmean differing features: "
      << FormatDouble(result.asymmetry.mean_differing) << "\n";
  for (const CorrelationRow& c : result.asymmetry.correlations) {
    out << "corr(insertion, deletion) " << c.method << ": "
        << (std::isfinite(c.pearson) ? FormatDouble(c.pearson) : "nan") << "\n";
  }
  for (size_t m = 0; m < result.methods.size(); ++m) {
    if (result.failures[m] > 0) {
      out << "failed cells for " << result.methods[m] << ": "
          << result.failures[m] << "\n";
    }
  }
}

}  // namespace abc_bench
