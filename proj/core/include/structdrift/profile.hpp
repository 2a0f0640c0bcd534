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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace structdrift {

// Name given to structures and members that carry no DW_AT_name.
inline constexpr std::string_view kUnnamed = "UnNamed";

// Written into ProfileMeta::extraction_tool_version by the extractor.
inline constexpr std::string_view kToolVersion = "structdrift 0.1.0";

enum class Architecture { kArm32, kArm64, kX86_32, kX86_64 };

std::string_view ToString(Architecture arch);
std::optional<Architecture> ParseArchitecture(std::string_view text);

struct MemberRecord {
  std::string name;
  uint64_t offset = 0;

  friend bool operator==(const MemberRecord&, const MemberRecord&) = default;
  friend auto operator<=>(const MemberRecord&, const MemberRecord&) = default;
};

// Canonical member order: (offset, name) ascending.
bool CanonicalMemberLess(const MemberRecord& a, const MemberRecord& b);

struct StructureRecord {
  std::string name;
  uint64_t byte_size = 0;
  std::vector<MemberRecord> members;

  friend bool operator==(const StructureRecord&, const StructureRecord&) = default;
};

// Sorts members into canonical order. Stable, so members that compare equal
// keep their relative order.
void Canonicalize(StructureRecord& record);

struct ProfileMeta {
  std::string platform_version = "unknown";
  Architecture architecture = Architecture::kX86_64;
  std::string build_variant = "eng";
  uint64_t binary_size_bytes = 0;
  std::set<int> dwarf_versions_seen;
  uint64_t raw_type_die_count = 0;
  std::string extraction_tool_version{kToolVersion};

  friend bool operator==(const ProfileMeta&, const ProfileMeta&) = default;
};

// One binary's structure catalog. The map keeps names unique and ordered
// lexicographically (byte order), which is also the on-disk order.
struct Profile {
  ProfileMeta meta;
  std::map<std::string, StructureRecord> structures;

  const StructureRecord* Find(std::string_view name) const;

  friend bool operator==(const Profile&, const Profile&) = default;
};

// Returns a human-readable description of every invariant the profile
// breaks; empty when the profile is valid and canonical.
std::vector<std::string> FindInvariantViolations(const Profile& profile);
std::vector<std::string> FindInvariantViolations(const StructureRecord& record);

// Throws Error(kInvariantViolation) listing the first violations found.
void Validate(const Profile& profile);

}  // namespace structdrift
