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

#include "structdrift/diff.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "json_support.hpp"
#include "structdrift/error.hpp"

namespace structdrift {

using internal::Json;
using internal::JsonView;

namespace {

Json MembersToJson(const std::vector<MemberRecord>& members) {
  Json out = Json::array();
  for (const auto& m : members) {
    Json entry = Json::object();
    entry["name"] = m.name;
    entry["offset"] = m.offset;
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<MemberRecord> MembersFromJson(const JsonView& view) {
  std::vector<MemberRecord> out;
  for (const auto& entry : view.Elements()) {
    entry.RequireObject({"name", "offset"});
    out.push_back({entry["name"].String(), entry["offset"].Unsigned()});
  }
  return out;
}

}  // namespace

std::map<MemberIdentity, uint64_t> MemberIdentities(const StructureRecord& record) {
  std::vector<MemberRecord> members = record.members;
  std::stable_sort(members.begin(), members.end(), CanonicalMemberLess);
  std::map<std::string, uint64_t> seen;
  std::map<MemberIdentity, uint64_t> out;
  for (const auto& m : members) out.emplace(MemberIdentity{m.name, seen[m.name]++}, m.offset);
  return out;
}

bool StructureDiff::HasChanges() const {
  return old_size != new_size || !member_additions.empty() || !member_removals.empty() ||
         !offset_changes.empty();
}

ChangeCounts& ChangeCounts::operator+=(const ChangeCounts& other) {
  offset_changes += other.offset_changes;
  member_additions += other.member_additions;
  member_removals += other.member_removals;
  structure_removals += other.structure_removals;
  structure_additions += other.structure_additions;
  total_impact += other.total_impact;
  return *this;
}

StructureDiff DiffStructure(const StructureRecord& old_record, const StructureRecord& new_record) {
  if (old_record.name != new_record.name) {
    throw Error(ErrorCode::kNameMismatch,
                "cannot diff '" + old_record.name + "' against '" + new_record.name + "'");
  }
  StructureDiff diff;
  diff.name = old_record.name;
  diff.old_size = old_record.byte_size;
  diff.new_size = new_record.byte_size;
  diff.old_member_count = old_record.members.size();
  diff.new_member_count = new_record.members.size();

  auto old_ids = MemberIdentities(old_record);
  auto new_ids = MemberIdentities(new_record);
  for (const auto& [id, offset] : old_ids) {
    auto it = new_ids.find(id);
    if (it == new_ids.end()) {
      diff.member_removals.push_back({id.first, offset});
    } else if (it->second != offset) {
      diff.offset_changes.push_back({id.first, offset, it->second});
    }
  }
  for (const auto& [id, offset] : new_ids) {
    if (!old_ids.contains(id)) diff.member_additions.push_back({id.first, offset});
  }
  std::stable_sort(diff.member_additions.begin(), diff.member_additions.end(), CanonicalMemberLess);
  std::stable_sort(diff.member_removals.begin(), diff.member_removals.end(), CanonicalMemberLess);
  return diff;
}

DiffReport DiffProfiles(const Profile& old_profile, const Profile& new_profile,
                        const std::optional<std::set<std::string>>& scope) {
  DiffReport report;
  report.from_label = old_profile.meta.platform_version;
  report.to_label = new_profile.meta.platform_version;
  auto in_scope = [&](const std::string& name) { return !scope || scope->contains(name); };

  for (const auto& [name, old_record] : old_profile.structures) {
    if (!in_scope(name)) continue;
    const auto* new_record = new_profile.Find(name);
    if (new_record == nullptr) {
      report.removed_structures.push_back(name);
      continue;
    }
    auto diff = DiffStructure(old_record, *new_record);
    if (diff.HasChanges()) {
      report.modified.push_back(std::move(diff));
    } else {
      ++report.unchanged_count;
    }
  }
  for (const auto& [name, record] : new_profile.structures) {
    if (in_scope(name) && old_profile.Find(name) == nullptr) report.added_structures.push_back(name);
  }
  return report;
}

ChangeCounts SummarizeDiff(const DiffReport& report) {
  ChangeCounts counts;
  for (const auto& diff : report.modified) {
    counts.offset_changes += diff.offset_changes.size();
    counts.member_additions += diff.member_additions.size();
    counts.member_removals += diff.member_removals.size();
  }
  counts.structure_removals = report.removed_structures.size();
  counts.structure_additions = report.added_structures.size();
  counts.total_impact = counts.offset_changes + counts.member_additions + counts.member_removals +
                        counts.structure_removals;
  return counts;
}

std::string SerializeDiff(const DiffReport& report) {
  Json root = Json::object();
  root["schema"] = std::string(kDiffSchema);
  root["from"] = report.from_label;
  root["to"] = report.to_label;
  root["added_structures"] = report.added_structures;
  root["removed_structures"] = report.removed_structures;
  Json modified = Json::array();
  for (const auto& diff : report.modified) {
    Json entry = Json::object();
    entry["name"] = diff.name;
    entry["old_size"] = diff.old_size;
    entry["new_size"] = diff.new_size;
    entry["old_member_count"] = diff.old_member_count;
    entry["new_member_count"] = diff.new_member_count;
    entry["member_additions"] = MembersToJson(diff.member_additions);
    entry["member_removals"] = MembersToJson(diff.member_removals);
    Json changes = Json::array();
    for (const auto& change : diff.offset_changes) {
      Json c = Json::object();
      c["member"] = change.member_name;
      c["old"] = change.old_offset;
      c["new"] = change.new_offset;
      changes.push_back(std::move(c));
    }
    entry["offset_changes"] = std::move(changes);
    modified.push_back(std::move(entry));
  }
  root["modified"] = std::move(modified);
  root["unchanged_count"] = report.unchanged_count;
  return internal::DumpCanonical(root);
}

DiffReport ParseDiff(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject(
      {"schema", "from", "to", "added_structures", "removed_structures", "modified", "unchanged_count"});
  if (auto schema = view["schema"].String(); schema != kDiffSchema) {
    view["schema"].Fail("unsupported schema '" + schema + "'");
  }
  DiffReport report;
  report.from_label = view["from"].String();
  report.to_label = view["to"].String();
  report.added_structures = view["added_structures"].StringArray();
  report.removed_structures = view["removed_structures"].StringArray();
  for (const auto& entry : view["modified"].Elements()) {
    entry.RequireObject({"name", "old_size", "new_size", "old_member_count", "new_member_count",
                         "member_additions", "member_removals", "offset_changes"});
    StructureDiff diff;
    diff.name = entry["name"].String();
    diff.old_size = entry["old_size"].Unsigned();
    diff.new_size = entry["new_size"].Unsigned();
    diff.old_member_count = entry["old_member_count"].Unsigned();
    diff.new_member_count = entry["new_member_count"].Unsigned();
    diff.member_additions = MembersFromJson(entry["member_additions"]);
    diff.member_removals = MembersFromJson(entry["member_removals"]);
    for (const auto& change : entry["offset_changes"].Elements()) {
      change.RequireObject({"member", "old", "new"});
      MemberChange c{change["member"].String(), change["old"].Unsigned(), change["new"].Unsigned()};
      if (c.old_offset == c.new_offset) change.Fail("offset change with equal offsets");
      diff.offset_changes.push_back(std::move(c));
    }
    if (diff.member_removals.size() > diff.old_member_count) {
      entry.Fail("more removals than old members");
    }
    report.modified.push_back(std::move(diff));
  }
  report.unchanged_count = view["unchanged_count"].Unsigned();
  return report;
}

}  // namespace structdrift
