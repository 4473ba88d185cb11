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

// Config files (TOML, or JSON by extension) are read into a JSON tree and
// validated with the key-path aware readers below.

#ifndef ABC_BENCH_CONFIG_H_
#define ABC_BENCH_CONFIG_H_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace abc_bench {

// ".json" files are parsed as JSON, everything else as TOML.
absl::StatusOr<nlohmann::json> LoadConfigFile(const std::string& path);
absl::StatusOr<nlohmann::json> ParseToml(const std::string& text,
                                         const std::string& source);

// "a.b" style path of `key` inside `parent`.
std::string KeyPath(const std::string& parent, const std::string& key);

// Fails on the first key of `object` not in `allowed`, naming its path.
absl::Status RejectUnknownKeys(const nlohmann::json& object,
                               const std::string& path,
                               std::initializer_list<std::string_view> allowed);

absl::Status ExpectObject(const nlohmann::json& value, const std::string& path);

// Optional typed fields: absent keys return `fallback`, wrong types are
// errors naming the key path.
absl::StatusOr<std::int64_t> ReadInt(const nlohmann::json& object,
                                     const std::string& key,
                                     const std::string& path,
                                     std::int64_t fallback);
absl::StatusOr<std::uint64_t> ReadSeed(const nlohmann::json& object,
                                       const std::string& key,
                                       const std::string& path,
                                       std::uint64_t fallback);
absl::StatusOr<double> ReadDouble(const nlohmann::json& object,
                                  const std::string& key,
                                  const std::string& path, double fallback);
absl::StatusOr<bool> ReadBool(const nlohmann::json& object,
                              const std::string& key, const std::string& path,
                              bool fallback);
absl::StatusOr<std::string> ReadString(const nlohmann::json& object,
                                       const std::string& key,
                                       const std::string& path,
                                       const std::string& fallback);
// Accepts a list of strings or one comma-separated string.
absl::StatusOr<std::vector<std::string>> ReadStringList(
    const nlohmann::json& object, const std::string& key,
    const std::string& path, const std::vector<std::string>& fallback);

// `relative` resolved against `base_dir` unless absolute or base is empty.
std::string ResolvePath(const std::string& base_dir,
                        const std::string& relative);
// Directory of a file path ("" for a bare file name).
std::string DirectoryOf(const std::string& path);

}  // namespace abc_bench

#endif  // ABC_BENCH_CONFIG_H_
