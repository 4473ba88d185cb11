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

// Tabular datasets: CSV ingestion with a column schema, z-score
// normalization and a seeded train/test split.

#ifndef ABC_BENCH_DATASET_H_
#define ABC_BENCH_DATASET_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abc_bench/feature_space.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace abc_bench {

enum class ColumnRole { kContinuous, kBinary, kTarget, kIgnore };

absl::StatusOr<ColumnRole> ParseColumnRole(std::string_view name);
std::string ColumnRoleName(ColumnRole role);

struct Schema {
  // Every CSV header column must appear here. Features keep header order.
  std::map<std::string, ColumnRole> roles;
  // z-score the continuous features after loading.
  bool normalize = false;
};

// {"columns": {"<name>": "continuous|binary|target|ignore", ...},
//  "normalize": true}
absl::StatusOr<Schema> SchemaFromJson(const nlohmann::json& value);
// JSON, or TOML when the file name ends in .toml.
absl::StatusOr<Schema> LoadSchemaFile(const std::string& path);

// Per-feature affine map x_norm = (x - mean) / stddev. Binary features and
// zero-variance columns keep mean 0, stddev 1.
struct Normalization {
  std::vector<double> mean;
  std::vector<double> stddev;
};

class Dataset {
 public:
  // Checks row dimensions, strict binary values and the target count (0 or
  // one per row). All rows start in the training split.
  static absl::StatusOr<Dataset> Create(FeatureSpace space,
                                        std::vector<Point> rows,
                                        std::vector<double> targets = {});

  const FeatureSpace& space() const { return space_; }
  int num_features() const { return space_.size(); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Point>& rows() const { return rows_; }
  const Point& row(int i) const { return rows_[i]; }
  bool has_targets() const { return !targets_.empty(); }
  const std::vector<double>& targets() const { return targets_; }

  const std::vector<int>& train() const { return train_; }
  const std::vector<int>& test() const { return test_; }

  const std::optional<Normalization>& normalization() const {
    return normalization_;
  }
  // Rows dropped for missing values at load time.
  int dropped_rows() const { return dropped_rows_; }
  void set_dropped_rows(int count) { dropped_rows_ = count; }

  // z-scores continuous features with the population standard deviation over
  // all rows. Fails when called twice.
  absl::Status Normalize();
  // Maps a normalized point back to the original units.
  Point Denormalize(const Point& point) const;

  // Shuffles row indices with `seed` and puts round(train_fraction * rows)
  // of them (at least one on each side when rows >= 2) into the training
  // split. Split index lists are kept in shuffled order.
  absl::Status Split(double train_fraction, std::uint64_t seed);

 private:
  Dataset(FeatureSpace space, std::vector<Point> rows,
          std::vector<double> targets);

  FeatureSpace space_;
  std::vector<Point> rows_;
  std::vector<double> targets_;
  std::vector<int> train_;
  std::vector<int> test_;
  std::optional<Normalization> normalization_;
  int dropped_rows_ = 0;
};

// RFC-4180 records: quoted fields may hold commas, doubled quotes and line
// breaks; CRLF and LF line endings are accepted.
absl::StatusOr<std::vector<std::vector<std::string>>> ReadCsvRecords(
    std::istream& in);

// True for the tokens treated as missing: "", "NA", "N/A", "nan", "?"
// (case-insensitive, surrounding blanks ignored).
bool IsMissingToken(std::string_view token);

// Parses a CSV with a header row. Rows with a missing feature or target
// value are dropped and counted; other unparseable cells and binary values
// outside {0, 1} are errors naming the row and column.
absl::StatusOr<Dataset> ParseCsv(std::istream& in, const Schema& schema);
absl::StatusOr<Dataset> LoadCsv(const std::string& path, const Schema& schema);

}  // namespace abc_bench

#endif  // ABC_BENCH_DATASET_H_
