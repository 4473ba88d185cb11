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

#include "abc_bench/config.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

#define TOML_EXCEPTIONS 0
#include "toml.hpp"

namespace abc_bench {
namespace {

using nlohmann::json;

absl::StatusOr<json> TomlToJson(const toml::node& node,
                                const std::string& path) {
  if (const auto* table = node.as_table()) {
    json out = json::object();
    for (const auto& [key, value] : *table) {
      const std::string name(key.str());
      auto converted = TomlToJson(value, KeyPath(path, name));
      if (!converted.ok()) return converted.status();
      out[name] = *std::move(converted);
    }
    return out;
  }
  if (const auto* array = node.as_array()) {
    json out = json::array();
    for (size_t i = 0; i < array->size(); ++i) {
      auto converted = TomlToJson(*array->get(i), absl::StrCat(path, "[", i, "]"));
      if (!converted.ok()) return converted.status();
      out.push_back(*std::move(converted));
    }
    return out;
  }
  if (const auto* v = node.as_string()) return json(v->get());
  if (const auto* v = node.as_integer()) return json(v->get());
  if (const auto* v = node.as_floating_point()) return json(v->get());
  if (const auto* v = node.as_boolean()) return json(v->get());
  return absl::InvalidArgumentError(
      absl::StrCat(path, ": dates and times are not supported"));
}

const json* Find(const json& object, const std::string& key) {
  auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

}  // namespace

std::string KeyPath(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : absl::StrCat(parent, ".", key);
}

absl::StatusOr<json> ParseToml(const std::string& text,
                               const std::string& source) {
  toml::parse_result result = toml::parse(text, source);
  if (!result) {
    const auto& err = result.error();
    return absl::InvalidArgumentError(absl::StrCat(
        source, ":", err.source().begin.line, ":", err.source().begin.column,
        ": ", std::string(err.description())));
  }
  return TomlToJson(result.table(), "");
}

absl::StatusOr<json> LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (std::filesystem::path(path).extension() == ".json") {
    json value = json::parse(buffer.str(), nullptr, false);
    if (value.is_discarded()) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": invalid JSON"));
    }
    return value;
  }
  return ParseToml(buffer.str(), path);
}

absl::Status RejectUnknownKeys(const json& object, const std::string& path,
                               std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : object.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || a == key;
    if (!known) {
      std::string list;
      for (std::string_view a : allowed) {
        absl::StrAppend(&list, list.empty() ? "" : ", ", std::string(a));
      }
      return absl::InvalidArgumentError(absl::StrCat(
          KeyPath(path, key), ": unknown key (allowed: ", list, ")"));
    }
  }
  return absl::OkStatus();
}

absl::Status ExpectObject(const json& value, const std::string& path) {
  if (!value.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.empty() ? "config" : path, ": expected a table"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::int64_t> ReadInt(const json& object, const std::string& key,
                                     const std::string& path,
                                     std::int64_t fallback) {
  const json* v = Find(object, key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer()) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, key), ": expected an integer"));
  }
  return v->get<std::int64_t>();
}

absl::StatusOr<std::uint64_t> ReadSeed(const json& object,
                                       const std::string& key,
                                       const std::string& path,
                                       std::uint64_t fallback) {
  const json* v = Find(object, key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() &&
                                  v->get<std::int64_t>() < 0)) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, key), ": expected a non-negative integer"));
  }
  return v->get<std::uint64_t>();
}

absl::StatusOr<double> ReadDouble(const json& object, const std::string& key,
                                  const std::string& path, double fallback) {
  const json* v = Find(object, key);
  if (v == nullptr) return fallback;
  if (!v->is_number()) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, key), ": expected a number"));
  }
  return v->get<double>();
}

absl::StatusOr<bool> ReadBool(const json& object, const std::string& key,
                              const std::string& path, bool fallback) {
  const json* v = Find(object, key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, key), ": expected true or false"));
  }
  return v->get<bool>();
}

absl::StatusOr<std::string> ReadString(const json& object,
                                       const std::string& key,
                                       const std::string& path,
                                       const std::string& fallback) {
  const json* v = Find(object, key);
  if (v == nullptr) return fallback;
  if (!v->is_string()) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, key), ": expected a string"));
  }
  return v->get<std::string>();
}

absl::StatusOr<std::vector<std::string>> ReadStringList(
    const json& object, const std::string& key, const std::string& path,
    const std::vector<std::string>& fallback) {
  const json* v = Find(object, key);
  if (v == nullptr) return fallback;
  std::vector<std::string> out;
  if (v->is_string()) {
    for (absl::string_view part :
         absl::StrSplit(v->get<std::string>(), ',', absl::SkipWhitespace())) {
      out.emplace_back(absl::StripAsciiWhitespace(part));
    }
    return out;
  }
  if (!v->is_array()) {
    return absl::InvalidArgumentError(
        absl::StrCat(KeyPath(path, key), ": expected a list of strings"));
  }
  for (size_t i = 0; i < v->size(); ++i) {
    if (!(*v)[i].is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat(KeyPath(path, key), "[", i, "]: expected a string"));
    }
    out.push_back((*v)[i].get<std::string>());
  }
  return out;
}

std::string ResolvePath(const std::string& base_dir,
                        const std::string& relative) {
  const std::filesystem::path p(relative);
  if (base_dir.empty() || p.is_absolute()) return relative;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::string DirectoryOf(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

}  // namespace abc_bench
