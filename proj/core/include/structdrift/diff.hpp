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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "structdrift/profile.hpp"

namespace structdrift {

inline constexpr std::string_view kDiffSchema = "structdrift-diff/1";

struct MemberChange {
  std::string member_name;
  uint64_t old_offset = 0;
  uint64_t new_offset = 0;

  friend bool operator==(const MemberChange&, const MemberChange&) = default;
};

struct StructureDiff {
  std::string name;
  uint64_t old_size = 0;
  uint64_t new_size = 0;
  uint64_t old_member_count = 0;
  uint64_t new_member_count = 0;
  std::vector<MemberRecord> member_additions;
  std::vector<MemberRecord> member_removals;
  std::vector<MemberChange> offset_changes;

  // Members present on both sides.
  uint64_t shared_member_count() const { return old_member_count - member_removals.size(); }
  bool HasChanges() const;

  friend bool operator==(const StructureDiff&, const StructureDiff&) = default;
};

struct DiffReport {
  std::string from_label;
  std::string to_label;
  std::vector<std::string> added_structures;
  std::vector<std::string> removed_structures;
  std::vector<StructureDiff> modified;
  uint64_t unchanged_count = 0;

  friend bool operator==(const DiffReport&, const DiffReport&) = default;
};

struct ChangeCounts {
  uint64_t offset_changes = 0;
  uint64_t member_additions = 0;
  uint64_t member_removals = 0;
  uint64_t structure_removals = 0;
  uint64_t structure_additions = 0;
  // offset_changes + member_additions + member_removals + structure_removals.
  uint64_t total_impact = 0;

  ChangeCounts& operator+=(const ChangeCounts& other);
  friend bool operator==(const ChangeCounts&, const ChangeCounts&) = default;
};

// (name, ordinal among members of that name, in canonical order).
using MemberIdentity = std::pair<std::string, uint64_t>;

// Identity -> offset for every member of the record.
std::map<MemberIdentity, uint64_t> MemberIdentities(const StructureRecord& record);

// Members are matched by (name, ordinal among members of that name) in
// canonical order. Throws Error(kNameMismatch) if the names differ.
StructureDiff DiffStructure(const StructureRecord& old_record, const StructureRecord& new_record);

// With a scope, only the listed names are compared. Output lists are
// sorted by structure name.
DiffReport DiffProfiles(const Profile& old_profile, const Profile& new_profile,
                        const std::optional<std::set<std::string>>& scope = std::nullopt);

ChangeCounts SummarizeDiff(const DiffReport& report);

std::string SerializeDiff(const DiffReport& report);
DiffReport ParseDiff(std::string_view text, std::string_view source = "diff");

}  // namespace structdrift
