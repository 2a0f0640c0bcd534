/*
 * Copyright 2026 The structdrift Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

// Shared helpers for the canonical JSON files: strict parsing (duplicate
// keys, unknown keys and wrong types are schema violations) and the one
// canonical text form every writer uses.
namespace structdrift::internal {

using Json = nlohmann::ordered_json;

// Parses text, rejecting malformed JSON and duplicate object keys.
Json ParseStrict(std::string_view text, std::string_view what);

// Two-space indented, UTF-8, newline-terminated.
std::string DumpCanonical(const Json& value);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Field access that throws Error(kSchemaViolation) naming the offending path.
class JsonView {
 public:
  JsonView(const Json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const Json& raw() const { return value_; }
  const std::string& path() const { return path_; }

  void RequireObject(std::initializer_list<std::string_view> required,
                     std::initializer_list<std::string_view> optional = {}) const;
  void RequireArray() const;

  JsonView operator[](std::string_view key) const;
  bool Has(std::string_view key) const;
  std::vector<JsonView> Elements() const;

  std::string String() const;
  uint64_t Unsigned() const;
  int64_t Integer() const;
  double Number() const;
  bool Boolean() const;
  bool IsNull() const { return value_.is_null(); }
  std::vector<std::string> StringArray() const;

  [[noreturn]] void Fail(const std::string& message) const;

 private:
  const Json& value_;
  std::string path_;
};

}  // namespace structdrift::internal
