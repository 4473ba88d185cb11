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

#include "abc_bench/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <filesystem>
#include <numeric>
#include <random>

#include "abc_bench/config.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"

namespace abc_bench {

absl::StatusOr<ColumnRole> ParseColumnRole(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(std::string(name));
  if (lower == "continuous") return ColumnRole::kContinuous;
  if (lower == "binary") return ColumnRole::kBinary;
  if (lower == "target") return ColumnRole::kTarget;
  if (lower == "ignore") return ColumnRole::kIgnore;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown column role \"", std::string(name),
                   "\" (expected continuous, binary, target, ignore)"));
}

std::string ColumnRoleName(ColumnRole role) {
  switch (role) {
    case ColumnRole::kContinuous:
      return "continuous";
    case ColumnRole::kBinary:
      return "binary";
    case ColumnRole::kTarget:
      return "target";
    case ColumnRole::kIgnore:
      return "ignore";
  }
  return "unknown";
}

absl::StatusOr<Schema> SchemaFromJson(const nlohmann::json& value) {
  if (!value.is_object()) {
    return absl::InvalidArgumentError("schema must be an object");
  }
  Schema schema;
  for (const auto& [key, v] : value.items()) {
    if (key == "normalize") {
      if (!v.is_boolean()) {
        return absl::InvalidArgumentError("schema.normalize must be a boolean");
      }
      schema.normalize = v.get<bool>();
    } else if (key == "columns") {
      if (!v.is_object() || v.empty()) {
        return absl::InvalidArgumentError(
            "schema.columns must be a non-empty object of name -> role");
      }
      for (const auto& [column, role] : v.items()) {
        if (!role.is_string()) {
          return absl::InvalidArgumentError(
              absl::StrCat("schema.columns.", column, " must be a string"));
        }
        auto parsed = ParseColumnRole(role.get<std::string>());
        if (!parsed.ok()) {
          return absl::InvalidArgumentError(absl::StrCat(
              "schema.columns.", column, ": ", parsed.status().message()));
        }
        schema.roles[column] = *parsed;
      }
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("schema.", key, ": unknown key"));
    }
  }
  if (schema.roles.empty()) {
    return absl::InvalidArgumentError("schema.columns is required");
  }
  int targets = 0;
  for (const auto& [_, role] : schema.roles) targets += role == ColumnRole::kTarget;
  if (targets > 1) {
    return absl::InvalidArgumentError("schema has more than one target column");
  }
  return schema;
}

absl::StatusOr<Schema> LoadSchemaFile(const std::string& path) {
  nlohmann::json value;
  if (std::filesystem::path(path).extension() == ".toml") {
    auto parsed = LoadConfigFile(path);
    if (!parsed.ok()) return parsed.status();
    value = *std::move(parsed);
  } else {
    std::ifstream in(path);
    if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
    value = nlohmann::json::parse(in, nullptr, false);
    if (value.is_discarded()) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": invalid JSON"));
    }
  }
  auto schema = SchemaFromJson(value);
  if (!schema.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", schema.status().message()));
  }
  return schema;
}

Dataset::Dataset(FeatureSpace space, std::vector<Point> rows,
                 std::vector<double> targets)
    : space_(std::move(space)),
      rows_(std::move(rows)),
      targets_(std::move(targets)) {
  train_.resize(rows_.size());
  std::iota(train_.begin(), train_.end(), 0);
}

absl::StatusOr<Dataset> Dataset::Create(FeatureSpace space,
                                        std::vector<Point> rows,
                                        std::vector<double> targets) {
  if (rows.empty()) return absl::InvalidArgumentError("dataset has no rows");
  if (!targets.empty() && targets.size() != rows.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("got ", targets.size(), " targets for ", rows.size(),
                     " rows"));
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    if (auto s = ValidatePoint(space, rows[i], /*strict_binary=*/true); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", i + 1, ": ", s.message()));
    }
  }
  for (double y : targets) {
    if (!std::isfinite(y)) {
      return absl::InvalidArgumentError("targets must be finite");
    }
  }
  return Dataset(std::move(space), std::move(rows), std::move(targets));
}

absl::Status Dataset::Normalize() {
  if (normalization_.has_value()) {
    return absl::FailedPreconditionError("dataset is already normalized");
  }
  const int n = num_features();
  Normalization norm{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)};
  const double count = static_cast<double>(rows_.size());
  for (int j = 0; j < n; ++j) {
    if (space_.is_binary(j)) continue;
    double mean = 0.0;
    for (const Point& r : rows_) mean += r[j];
    mean /= count;
    double var = 0.0;
    for (const Point& r : rows_) var += (r[j] - mean) * (r[j] - mean);
    const double sd = std::sqrt(var / count);
    norm.mean[j] = mean;
    // A constant column is only centered.
    norm.stddev[j] = sd > 0.0 ? sd : 1.0;
  }
  for (Point& r : rows_) {
    for (int j = 0; j < n; ++j) r[j] = (r[j] - norm.mean[j]) / norm.stddev[j];
  }
  normalization_ = std::move(norm);
  return absl::OkStatus();
}

Point Dataset::Denormalize(const Point& point) const {
  if (!normalization_.has_value()) return point;
  Point out = point;
  for (int j = 0; j < out.size(); ++j) {
    out[j] = out[j] * normalization_->stddev[j] + normalization_->mean[j];
  }
  return out;
}

absl::Status Dataset::Split(double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    return absl::InvalidArgumentError("train_fraction must lie in (0, 1]");
  }
  const int total = num_rows();
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  int train_count = static_cast<int>(std::lround(train_fraction * total));
  if (total >= 2) train_count = std::clamp(train_count, 1, total - 1);
  train_.assign(order.begin(), order.begin() + train_count);
  test_.assign(order.begin() + train_count, order.end());
  return absl::OkStatus();
}

absl::StatusOr<std::vector<std::vector<std::string>>> ReadCsvRecords(
    std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes an empty line from "",
  bool quoted_field = false;
  int line = 1;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    quoted_field = false;
  };
  auto end_record = [&] {
    if (field_started || !record.empty()) {
      end_field();
      records.push_back(std::move(record));
    }
    record.clear();
    field_started = false;
  };
  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || quoted_field) {
          return absl::InvalidArgumentError(
              absl::StrCat("CSV line ", line, ": stray quote inside a field"));
        }
        in_quotes = true;
        quoted_field = true;
        field_started = true;
        break;
      case ',':
        field_started = true;
        end_field();
        break;
      case '\r':
        if (in.peek() != '\n') {
          field.push_back(c);
        }
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        if (quoted_field) {
          return absl::InvalidArgumentError(absl::StrCat(
              "CSV line ", line, ": characters after a closing quote"));
        }
        field_started = true;
        field.push_back(c);
    }
  }
  if (in_quotes) {
    return absl::InvalidArgumentError("CSV ends inside a quoted field");
  }
  end_record();
  return records;
}

bool IsMissingToken(std::string_view token) {
  const std::string t =
      absl::AsciiStrToLower(absl::StripAsciiWhitespace(std::string(token)));
  return t.empty() || t == "na" || t == "n/a" || t == "nan" || t == "?";
}

absl::StatusOr<Dataset> ParseCsv(std::istream& in, const Schema& schema) {
  auto records = ReadCsvRecords(in);
  if (!records.ok()) return records.status();
  if (records->empty()) return absl::InvalidArgumentError("CSV has no header");
  std::vector<std::string> header = (*records)[0];
  for (std::string& h : header) h = std::string(absl::StripAsciiWhitespace(h));

  std::vector<ColumnRole> roles;
  std::vector<FeatureKind> kinds;
  std::vector<std::string> names;
  int target_column = -1;
  for (size_t c = 0; c < header.size(); ++c) {
    auto it = schema.roles.find(header[c]);
    if (it == schema.roles.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "CSV column \"", header[c], "\" is not declared in the schema"));
    }
    roles.push_back(it->second);
    if (it->second == ColumnRole::kContinuous ||
        it->second == ColumnRole::kBinary) {
      kinds.push_back(it->second == ColumnRole::kBinary ? FeatureKind::kBinary
                                                        : FeatureKind::kContinuous);
      names.push_back(header[c]);
    } else if (it->second == ColumnRole::kTarget) {
      target_column = static_cast<int>(c);
    }
  }
  for (const auto& [name, _] : schema.roles) {
    if (std::find(header.begin(), header.end(), name) == header.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("schema column \"", name, "\" is missing from the CSV"));
    }
  }
  auto space = FeatureSpace::Create(kinds, names);
  if (!space.ok()) return space.status();

  std::vector<Point> rows;
  std::vector<double> targets;
  int dropped = 0;
  for (size_t r = 1; r < records->size(); ++r) {
    const auto& record = (*records)[r];
    if (record.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("CSV row ", r, " has ", record.size(),
                       " fields, expected ", header.size()));
    }
    bool missing = false;
    for (size_t c = 0; c < record.size(); ++c) {
      if (roles[c] != ColumnRole::kIgnore && IsMissingToken(record[c])) {
        missing = true;
      }
    }
    if (missing) {
      ++dropped;
      continue;
    }
    std::vector<double> values;
    double target = 0.0;
    for (size_t c = 0; c < record.size(); ++c) {
      if (roles[c] == ColumnRole::kIgnore) continue;
      double v;
      if (!absl::SimpleAtod(absl::StripAsciiWhitespace(record[c]), &v) ||
          !std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("CSV row ", r, ", column \"", header[c],
                         "\": cannot parse \"", record[c], "\""));
      }
      if (roles[c] == ColumnRole::kBinary && v != 0.0 && v != 1.0) {
        return absl::InvalidArgumentError(
            absl::StrCat("CSV row ", r, ", column \"", header[c],
                         "\": binary column holds ", record[c]));
      }
      if (static_cast<int>(c) == target_column) {
        target = v;
      } else {
        values.push_back(v);
      }
    }
    rows.emplace_back(std::move(values));
    if (target_column >= 0) targets.push_back(target);
  }
  if (rows.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "no complete rows remain (dropped ", dropped, ")"));
  }
  auto ds = Dataset::Create(*std::move(space), std::move(rows),
                            std::move(targets));
  if (!ds.ok()) return ds.status();
  ds->set_dropped_rows(dropped);
  if (schema.normalize) {
    if (auto s = ds->Normalize(); !s.ok()) return s;
  }
  return ds;
}

absl::StatusOr<Dataset> LoadCsv(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  auto ds = ParseCsv(in, schema);
  if (!ds.ok()) {
    return absl::Status(ds.status().code(),
                        absl::StrCat(path, ": ", ds.status().message()));
  }
  return ds;
}

}  // namespace abc_bench
