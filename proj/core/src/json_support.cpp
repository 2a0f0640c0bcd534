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

#include "json_support.hpp"

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "structdrift/error.hpp"

namespace structdrift::internal {

Json ParseStrict(std::string_view text, std::string_view what) {
  // One key set per open object; the parser reports keys before values.
  std::vector<std::set<std::string>> open_objects;
  std::string duplicate;
  auto callback = [&](int /*depth*/, Json::parse_event_t event, Json& parsed) {
    switch (event) {
      case Json::parse_event_t::object_start:
        open_objects.emplace_back();
        break;
      case Json::parse_event_t::object_end:
        if (!open_objects.empty()) open_objects.pop_back();
        break;
      case Json::parse_event_t::key:
        if (!open_objects.empty() && !open_objects.back().insert(parsed.get<std::string>()).second &&
            duplicate.empty()) {
          duplicate = parsed.get<std::string>();
        }
        break;
      default:
        break;
    }
    return true;
  };
  try {
    Json value = Json::parse(text.begin(), text.end(), callback);
    if (!duplicate.empty()) {
      throw Error(ErrorCode::kSchemaViolation,
                  std::string(what) + ": duplicate object key '" + duplicate + "'");
    }
    return value;
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string(what) + ": " + e.what(), e.byte);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string(what) + ": " + e.what());
  }
}

std::string DumpCanonical(const Json& value) {
  try {
    return value.dump(2) + "\n";
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kNonCanonical, std::string("cannot serialise: ") + e.what());
  }
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kIo, path.string() + ": file not found or not a regular file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, path.string() + ": cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, path.string() + ": read failure");
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, path.string() + ": cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, path.string() + ": write failure");
}

void JsonView::Fail(const std::string& message) const {
  throw Error(ErrorCode::kSchemaViolation, path_ + ": " + message);
}

void JsonView::RequireObject(std::initializer_list<std::string_view> required,
                             std::initializer_list<std::string_view> optional) const {
  if (!value_.is_object()) Fail("expected an object");
  for (auto key : required) {
    if (!value_.contains(key)) Fail("missing field '" + std::string(key) + "'");
  }
  for (const auto& item : value_.items()) {
    bool known = false;
    for (auto key : required) known = known || key == item.key();
    for (auto key : optional) known = known || key == item.key();
    if (!known) Fail("unknown field '" + item.key() + "'");
  }
}

void JsonView::RequireArray() const {
  if (!value_.is_array()) Fail("expected an array");
}

JsonView JsonView::operator[](std::string_view key) const {
  if (!value_.is_object()) Fail("expected an object");
  auto it = value_.find(key);
  if (it == value_.end()) Fail("missing field '" + std::string(key) + "'");
  return JsonView(*it, path_ + "." + std::string(key));
}

bool JsonView::Has(std::string_view key) const { return value_.is_object() && value_.contains(key); }

std::vector<JsonView> JsonView::Elements() const {
  RequireArray();
  std::vector<JsonView> out;
  out.reserve(value_.size());
  for (size_t i = 0; i < value_.size(); ++i) {
    out.emplace_back(value_[i], path_ + "[" + std::to_string(i) + "]");
  }
  return out;
}

std::string JsonView::String() const {
  if (!value_.is_string()) Fail("expected a string");
  return value_.get<std::string>();
}

uint64_t JsonView::Unsigned() const {
  if (!value_.is_number_unsigned()) Fail("expected a non-negative integer");
  return value_.get<uint64_t>();
}

int64_t JsonView::Integer() const {
  if (value_.is_number_unsigned()) {
    auto v = value_.get<uint64_t>();
    if (v > static_cast<uint64_t>(INT64_MAX)) Fail("integer out of range");
    return static_cast<int64_t>(v);
  }
  if (!value_.is_number_integer()) Fail("expected an integer");
  return value_.get<int64_t>();
}

double JsonView::Number() const {
  if (!value_.is_number()) Fail("expected a number");
  return value_.get<double>();
}

bool JsonView::Boolean() const {
  if (!value_.is_boolean()) Fail("expected a boolean");
  return value_.get<bool>();
}

std::vector<std::string> JsonView::StringArray() const {
  std::vector<std::string> out;
  for (const auto& element : Elements()) out.push_back(element.String());
  return out;
}

}  // namespace structdrift::internal
