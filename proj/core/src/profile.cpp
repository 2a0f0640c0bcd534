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

#include "structdrift/profile.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "structdrift/error.hpp"

namespace structdrift {

namespace {

constexpr std::array<std::pair<Architecture, std::string_view>, 4> kArchNames{{
    {Architecture::kArm32, "arm32"},
    {Architecture::kArm64, "arm64"},
    {Architecture::kX86_32, "x86_32"},
    {Architecture::kX86_64, "x86_64"},
}};

}  // namespace

std::string_view ToString(Architecture arch) {
  for (const auto& [value, name] : kArchNames) {
    if (value == arch) return name;
  }
  return "unknown";
}

std::optional<Architecture> ParseArchitecture(std::string_view text) {
  for (const auto& [value, name] : kArchNames) {
    if (name == text) return value;
  }
  return std::nullopt;
}

bool CanonicalMemberLess(const MemberRecord& a, const MemberRecord& b) {
  if (a.offset != b.offset) return a.offset < b.offset;
  return a.name < b.name;
}

void Canonicalize(StructureRecord& record) {
  std::stable_sort(record.members.begin(), record.members.end(), CanonicalMemberLess);
}

const StructureRecord* Profile::Find(std::string_view name) const {
  auto it = structures.find(std::string(name));
  return it == structures.end() ? nullptr : &it->second;
}

std::vector<std::string> FindInvariantViolations(const StructureRecord& record) {
  std::vector<std::string> out;
  if (record.name.empty()) out.push_back("structure with empty name");
  for (size_t i = 0; i < record.members.size(); ++i) {
    const auto& member = record.members[i];
    if (member.name.empty()) {
      out.push_back(record.name + ": member " + std::to_string(i) + " has an empty name");
    }
    // Zero-sized trailing members (flexible arrays) sit exactly at byte_size.
    if (record.byte_size != 0 && member.offset > record.byte_size) {
      out.push_back(record.name + "." + member.name + ": offset " +
                    std::to_string(member.offset) + " beyond structure size " +
                    std::to_string(record.byte_size));
    }
    if (i > 0 && CanonicalMemberLess(member, record.members[i - 1])) {
      out.push_back(record.name + ": members not sorted by (offset, name) at index " +
                    std::to_string(i));
    }
  }
  return out;
}

std::vector<std::string> FindInvariantViolations(const Profile& profile) {
  std::vector<std::string> out;
  if (profile.meta.platform_version.empty()) out.push_back("empty platform_version");
  for (int v : profile.meta.dwarf_versions_seen) {
    if (v < 2 || v > 5) out.push_back("dwarf version " + std::to_string(v) + " outside 2..5");
  }
  for (const auto& [key, record] : profile.structures) {
    if (key != record.name) {
      out.push_back("catalog key '" + key + "' does not match record name '" + record.name + "'");
    }
    auto nested = FindInvariantViolations(record);
    out.insert(out.end(), nested.begin(), nested.end());
  }
  return out;
}

void Validate(const Profile& profile) {
  auto violations = FindInvariantViolations(profile);
  if (violations.empty()) return;
  std::string message = violations.front();
  if (violations.size() > 1) {
    message += " (+" + std::to_string(violations.size() - 1) + " more)";
  }
  throw Error(ErrorCode::kInvariantViolation, message);
}

}  // namespace structdrift
