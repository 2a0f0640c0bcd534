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

#include "structdrift/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json_support.hpp"
#include "structdrift/error.hpp"
#include "structdrift/extractor.hpp"
#include "structdrift/profile_store.hpp"
#include "structdrift/version.hpp"

namespace structdrift {

using internal::Json;
using internal::JsonView;

namespace {

double Ratio(uint64_t num, uint64_t den) {
  return static_cast<double>(num) / static_cast<double>(std::max<uint64_t>(1, den));
}

double Rate(uint64_t num, uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void RequireTransitions(const ProfileSequence& sequence) {
  if (sequence.size() < 2) {
    throw Error(ErrorCode::kSequenceTooShort,
                "need at least two profiles, got " + std::to_string(sequence.size()));
  }
}

std::vector<Transition> Transitions(const ProfileSequence& sequence) {
  std::vector<Transition> out;
  for (size_t i = 1; i < sequence.size(); ++i) {
    out.push_back({sequence[i - 1].meta.platform_version, sequence[i].meta.platform_version});
  }
  return out;
}

Json ScopeToJson(const ScopeInfo& scope) {
  Json out = Json::object();
  out["name"] = scope.name;
  out["supplementary"] = scope.supplementary;
  return out;
}

ScopeInfo ScopeFromJson(const JsonView& view) {
  view.RequireObject({"name", "supplementary"});
  return {view["name"].String(), view["supplementary"].StringArray()};
}

void CheckSchema(const JsonView& view, std::string_view expected) {
  if (auto schema = view["schema"].String(); schema != expected) {
    view["schema"].Fail("unsupported schema '" + schema + "'");
  }
}

Json CountsToJson(const ChangeCounts& c) {
  Json out = Json::object();
  out["offset_changes"] = c.offset_changes;
  out["member_additions"] = c.member_additions;
  out["member_removals"] = c.member_removals;
  out["structure_removals"] = c.structure_removals;
  out["structure_additions"] = c.structure_additions;
  out["total_impact"] = c.total_impact;
  return out;
}

ChangeCounts CountsFromJson(const JsonView& view) {
  ChangeCounts c;
  c.offset_changes = view["offset_changes"].Unsigned();
  c.member_additions = view["member_additions"].Unsigned();
  c.member_removals = view["member_removals"].Unsigned();
  c.structure_removals = view["structure_removals"].Unsigned();
  c.structure_additions = view["structure_additions"].Unsigned();
  c.total_impact = view["total_impact"].Unsigned();
  if (c.total_impact !=
      c.offset_changes + c.member_additions + c.member_removals + c.structure_removals) {
    view.Fail("total_impact does not equal the sum of its columns");
  }
  return c;
}

bool LooksLikeElf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && magic[0] == 0x7f && magic[1] == 'E' && magic[2] == 'L' &&
         magic[3] == 'F';
}

}  // namespace

ProfileSequence::ProfileSequence(std::vector<Profile> profiles) : profiles_(std::move(profiles)) {
  std::stable_sort(profiles_.begin(), profiles_.end(), [](const Profile& a, const Profile& b) {
    return CompareVersionLabels(a.meta.platform_version, b.meta.platform_version) < 0;
  });
  for (size_t i = 1; i < profiles_.size(); ++i) {
    const auto& prev = profiles_[i - 1].meta;
    const auto& cur = profiles_[i].meta;
    if (CompareVersionLabels(prev.platform_version, cur.platform_version) == 0) {
      throw Error(ErrorCode::kInconsistentSequence,
                  "platform_version '" + cur.platform_version + "' appears more than once");
    }
    if (prev.architecture != cur.architecture) {
      throw Error(ErrorCode::kInconsistentSequence,
                  "sequence mixes architectures " + std::string(ToString(prev.architecture)) +
                      " and " + std::string(ToString(cur.architecture)));
    }
  }
}

std::vector<std::string> ProfileSequence::labels() const {
  std::vector<std::string> out;
  for (const auto& p : profiles_) out.push_back(p.meta.platform_version);
  return out;
}

void ImpactWeights::Check() const {
  for (double w : {offset, churn, size}) {
    if (!std::isfinite(w) || w <= 0) {
      throw Error(ErrorCode::kInvalidArgument, "impact weights must be finite and positive");
    }
  }
}

ImpactFactors ComputeImpactFactors(const StructureDiff& diff) {
  ImpactFactors f;
  f.offset_fraction = Ratio(diff.offset_changes.size(), diff.shared_member_count());
  f.churn_ratio =
      Ratio(diff.member_additions.size() + diff.member_removals.size(), diff.old_member_count);
  uint64_t delta = diff.new_size > diff.old_size ? diff.new_size - diff.old_size
                                                 : diff.old_size - diff.new_size;
  f.size_delta_fraction = Ratio(delta, diff.old_size);
  return f;
}

double CombineImpact(const ImpactFactors& f, const ImpactWeights& w) {
  double score = w.offset * std::clamp(f.offset_fraction, 0.0, 1.0) +
                 w.churn * std::clamp(f.churn_ratio, 0.0, 1.0) +
                 w.size * std::clamp(f.size_delta_fraction, 0.0, 1.0);
  return std::clamp(score, 0.0, 1.0);
}

ImpactScore ComputeImpactScore(const StructureDiff& diff, Transition transition,
                               const ImpactWeights& weights) {
  weights.Check();
  ImpactScore out;
  out.structure = diff.name;
  out.transition = std::move(transition);
  out.factors = ComputeImpactFactors(diff);
  out.score = CombineImpact(out.factors, weights);
  return out;
}

ImpactMatrix ComputeImpactMatrix(const ProfileSequence& sequence,
                                 const std::vector<std::string>& watchlist,
                                 const ImpactWeights& weights, ScopeInfo scope) {
  RequireTransitions(sequence);
  weights.Check();
  ImpactMatrix matrix;
  matrix.scope = std::move(scope);
  matrix.weights = weights;
  matrix.transitions = Transitions(sequence);
  matrix.structures = watchlist;
  for (const auto& name : watchlist) {
    auto& row = matrix.cells.emplace_back();
    for (size_t t = 0; t < matrix.transitions.size(); ++t) {
      const auto* old_record = sequence[t].Find(name);
      const auto* new_record = sequence[t + 1].Find(name);
      if (old_record == nullptr || new_record == nullptr) {
        row.emplace_back();
        continue;
      }
      row.push_back(ComputeImpactScore(DiffStructure(*old_record, *new_record),
                                       matrix.transitions[t], weights));
    }
  }
  return matrix;
}

TimelineReport SizeTimeline(const ProfileSequence& sequence, std::string_view structure) {
  TimelineReport report;
  report.structure = std::string(structure);
  for (const auto& profile : sequence.profiles()) {
    TimelinePoint point{profile.meta.platform_version, std::nullopt};
    if (const auto* record = profile.Find(structure)) point.value = record->byte_size;
    report.points.push_back(std::move(point));
  }
  return report;
}

TimelineReport MemberOffsetTimeline(const ProfileSequence& sequence, std::string_view structure,
                                    std::string_view member, uint64_t ordinal) {
  TimelineReport report;
  report.structure = std::string(structure);
  report.member = std::string(member);
  MemberIdentity id{std::string(member), ordinal};
  for (const auto& profile : sequence.profiles()) {
    TimelinePoint point{profile.meta.platform_version, std::nullopt};
    if (const auto* record = profile.Find(structure)) {
      auto ids = MemberIdentities(*record);
      if (auto it = ids.find(id); it != ids.end()) point.value = it->second;
    }
    report.points.push_back(std::move(point));
  }
  return report;
}

VolatilityStats ComputeVolatility(const ProfileSequence& sequence,
                                  const std::optional<std::vector<std::string>>& watchlist,
                                  ScopeInfo scope) {
  RequireTransitions(sequence);
  std::set<std::string> names;
  if (watchlist) {
    names.insert(watchlist->begin(), watchlist->end());
  } else {
    for (const auto& profile : sequence.profiles()) {
      for (const auto& entry : profile.structures) names.insert(entry.first);
    }
  }

  VolatilityStats stats;
  stats.scope = std::move(scope);
  for (const auto& name : names) {
    std::set<MemberIdentity> surviving;
    std::set<MemberIdentity> moved;
    bool co_present = false;
    for (size_t t = 1; t < sequence.size(); ++t) {
      const auto* old_record = sequence[t - 1].Find(name);
      const auto* new_record = sequence[t].Find(name);
      if (old_record == nullptr || new_record == nullptr) continue;
      co_present = true;
      auto old_ids = MemberIdentities(*old_record);
      auto new_ids = MemberIdentities(*new_record);
      for (const auto& [id, offset] : old_ids) {
        auto it = new_ids.find(id);
        if (it == new_ids.end()) continue;
        surviving.insert(id);
        if (it->second != offset) moved.insert(id);
      }
    }
    if (!co_present) continue;
    StructureVolatility v{surviving.size(), moved.size(), Rate(moved.size(), surviving.size())};
    stats.surviving_members += v.surviving_members;
    stats.members_with_offset_change += v.members_with_offset_change;
    stats.per_structure.emplace(name, v);
  }
  stats.overall_rate = Rate(stats.members_with_offset_change, stats.surviving_members);
  return stats;
}

uint64_t BytesToCentiMegabytes(uint64_t bytes) { return bytes / 10000 + (bytes % 10000 >= 5000); }

BinaryStats ComputeBinaryStats(const Profile& profile, std::string source) {
  BinaryStats stats;
  stats.source = std::move(source);
  stats.platform_version = profile.meta.platform_version;
  stats.architecture = std::string(ToString(profile.meta.architecture));
  stats.binary_size_bytes = profile.meta.binary_size_bytes;
  stats.binary_size_centi_mb = BytesToCentiMegabytes(stats.binary_size_bytes);
  stats.symbol_count = profile.meta.raw_type_die_count;
  stats.unique_name_count = profile.structures.size();
  stats.dwarf_versions = profile.meta.dwarf_versions_seen;
  return stats;
}

BinaryStats ComputeBinaryStats(const std::filesystem::path& source) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(source, ec)) {
    throw Error(ErrorCode::kIo, source.string() + ": file not found or not a regular file");
  }
  if (LooksLikeElf(source)) {
    auto extraction = ExtractProfile(source);
    auto stats = ComputeBinaryStats(extraction.profile, source.string());
    stats.unique_name_count = extraction.meta.unique_name_count;
    return stats;
  }
  return ComputeBinaryStats(ReadProfile(source), source.string());
}

AggregateReport AggregateTransitions(const ProfileSequence& sequence,
                                     const std::optional<std::set<std::string>>& scope,
                                     ScopeInfo info) {
  RequireTransitions(sequence);
  AggregateReport report;
  report.scope = std::move(info);
  for (size_t t = 1; t < sequence.size(); ++t) {
    auto counts = SummarizeDiff(DiffProfiles(sequence[t - 1], sequence[t], scope));
    report.rows.push_back(
        {{sequence[t - 1].meta.platform_version, sequence[t].meta.platform_version}, counts});
    report.total += counts;
  }
  return report;
}

std::string SerializeImpactMatrix(const ImpactMatrix& matrix) {
  Json root = Json::object();
  root["schema"] = std::string(kImpactSchema);
  root["scope"] = ScopeToJson(matrix.scope);
  Json weights = Json::object();
  weights["offset"] = matrix.weights.offset;
  weights["churn"] = matrix.weights.churn;
  weights["size"] = matrix.weights.size;
  root["weights"] = std::move(weights);
  Json transitions = Json::array();
  for (const auto& t : matrix.transitions) {
    Json entry = Json::object();
    entry["from"] = t.from;
    entry["to"] = t.to;
    transitions.push_back(std::move(entry));
  }
  root["transitions"] = std::move(transitions);
  Json rows = Json::array();
  for (size_t s = 0; s < matrix.structures.size(); ++s) {
    Json cells = Json::array();
    for (const auto& cell : matrix.cells[s]) {
      if (!cell) {
        cells.push_back(nullptr);
        continue;
      }
      Json c = Json::object();
      c["score"] = cell->score;
      c["offset_fraction"] = cell->factors.offset_fraction;
      c["churn_ratio"] = cell->factors.churn_ratio;
      c["size_delta_fraction"] = cell->factors.size_delta_fraction;
      cells.push_back(std::move(c));
    }
    Json row = Json::object();
    row["structure"] = matrix.structures[s];
    row["cells"] = std::move(cells);
    rows.push_back(std::move(row));
  }
  root["rows"] = std::move(rows);
  return internal::DumpCanonical(root);
}

ImpactMatrix ParseImpactMatrix(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "scope", "weights", "transitions", "rows"});
  CheckSchema(view, kImpactSchema);
  ImpactMatrix matrix;
  matrix.scope = ScopeFromJson(view["scope"]);
  auto weights = view["weights"];
  weights.RequireObject({"offset", "churn", "size"});
  matrix.weights = {weights["offset"].Number(), weights["churn"].Number(), weights["size"].Number()};
  for (const auto& t : view["transitions"].Elements()) {
    t.RequireObject({"from", "to"});
    matrix.transitions.push_back({t["from"].String(), t["to"].String()});
  }
  for (const auto& row : view["rows"].Elements()) {
    row.RequireObject({"structure", "cells"});
    std::string name = row["structure"].String();
    auto cells = row["cells"].Elements();
    if (cells.size() != matrix.transitions.size()) row.Fail("cell count differs from transitions");
    auto& out = matrix.cells.emplace_back();
    for (size_t t = 0; t < cells.size(); ++t) {
      if (cells[t].IsNull()) {
        out.emplace_back();
        continue;
      }
      cells[t].RequireObject({"score", "offset_fraction", "churn_ratio", "size_delta_fraction"});
      ImpactScore score;
      score.structure = name;
      score.transition = matrix.transitions[t];
      score.score = cells[t]["score"].Number();
      score.factors = {cells[t]["offset_fraction"].Number(), cells[t]["churn_ratio"].Number(),
                       cells[t]["size_delta_fraction"].Number()};
      if (!(score.score >= 0 && score.score <= 1)) cells[t]["score"].Fail("score outside [0,1]");
      out.push_back(std::move(score));
    }
    matrix.structures.push_back(std::move(name));
  }
  return matrix;
}

std::string SerializeAggregate(const AggregateReport& report) {
  Json root = Json::object();
  root["schema"] = std::string(kAggregateSchema);
  root["scope"] = ScopeToJson(report.scope);
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json entry = Json::object();
    entry["from"] = row.transition.from;
    entry["to"] = row.transition.to;
    entry["counts"] = CountsToJson(row.counts);
    rows.push_back(std::move(entry));
  }
  root["rows"] = std::move(rows);
  root["total"] = CountsToJson(report.total);
  return internal::DumpCanonical(root);
}

AggregateReport ParseAggregate(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "scope", "rows", "total"});
  CheckSchema(view, kAggregateSchema);
  AggregateReport report;
  report.scope = ScopeFromJson(view["scope"]);
  ChangeCounts sum;
  for (const auto& row : view["rows"].Elements()) {
    row.RequireObject({"from", "to", "counts"});
    auto counts_view = row["counts"];
    counts_view.RequireObject({"offset_changes", "member_additions", "member_removals",
                               "structure_removals", "structure_additions", "total_impact"});
    TransitionRow out{{row["from"].String(), row["to"].String()}, CountsFromJson(counts_view)};
    sum += out.counts;
    report.rows.push_back(std::move(out));
  }
  auto total = view["total"];
  total.RequireObject({"offset_changes", "member_additions", "member_removals",
                       "structure_removals", "structure_additions", "total_impact"});
  report.total = CountsFromJson(total);
  if (!(report.total == sum)) total.Fail("total row does not equal the column sums");
  return report;
}

std::string SerializeTimeline(const TimelineReport& report) {
  Json root = Json::object();
  root["schema"] = std::string(kTimelineSchema);
  root["structure"] = report.structure;
  root["member"] = report.member ? Json(*report.member) : Json(nullptr);
  Json points = Json::array();
  for (const auto& p : report.points) {
    Json entry = Json::object();
    entry["version"] = p.version;
    entry["value"] = p.value ? Json(*p.value) : Json(nullptr);
    points.push_back(std::move(entry));
  }
  root["points"] = std::move(points);
  return internal::DumpCanonical(root);
}

TimelineReport ParseTimeline(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "structure", "member", "points"});
  CheckSchema(view, kTimelineSchema);
  TimelineReport report;
  report.structure = view["structure"].String();
  if (!view["member"].IsNull()) report.member = view["member"].String();
  for (const auto& p : view["points"].Elements()) {
    p.RequireObject({"version", "value"});
    TimelinePoint point{p["version"].String(), std::nullopt};
    if (!p["value"].IsNull()) point.value = p["value"].Unsigned();
    if (!report.points.empty() &&
        CompareVersionLabels(report.points.back().version, point.version) >= 0) {
      p["version"].Fail("versions must be strictly increasing");
    }
    report.points.push_back(std::move(point));
  }
  return report;
}

std::string SerializeVolatility(const VolatilityStats& stats) {
  Json root = Json::object();
  root["schema"] = std::string(kVolatilitySchema);
  root["scope"] = ScopeToJson(stats.scope);
  Json per = Json::object();
  for (const auto& [name, v] : stats.per_structure) {
    Json entry = Json::object();
    entry["surviving_members"] = v.surviving_members;
    entry["members_with_offset_change"] = v.members_with_offset_change;
    entry["rate"] = v.rate;
    per[name] = std::move(entry);
  }
  root["per_structure"] = std::move(per);
  root["surviving_members"] = stats.surviving_members;
  root["members_with_offset_change"] = stats.members_with_offset_change;
  root["overall_rate"] = stats.overall_rate;
  return internal::DumpCanonical(root);
}

VolatilityStats ParseVolatility(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "scope", "per_structure", "surviving_members",
                      "members_with_offset_change", "overall_rate"});
  CheckSchema(view, kVolatilitySchema);
  VolatilityStats stats;
  stats.scope = ScopeFromJson(view["scope"]);
  auto per = view["per_structure"];
  if (!per.raw().is_object()) per.Fail("expected an object");
  for (const auto& item : per.raw().items()) {
    JsonView entry(item.value(), per.path() + "." + item.key());
    entry.RequireObject({"surviving_members", "members_with_offset_change", "rate"});
    StructureVolatility v{entry["surviving_members"].Unsigned(),
                          entry["members_with_offset_change"].Unsigned(), entry["rate"].Number()};
    if (v.members_with_offset_change > v.surviving_members) {
      entry.Fail("more volatile members than surviving members");
    }
    stats.per_structure.emplace(item.key(), v);
  }
  stats.surviving_members = view["surviving_members"].Unsigned();
  stats.members_with_offset_change = view["members_with_offset_change"].Unsigned();
  stats.overall_rate = view["overall_rate"].Number();
  if (stats.members_with_offset_change > stats.surviving_members) {
    view.Fail("more volatile members than surviving members");
  }
  return stats;
}

std::string SerializeStats(const std::vector<BinaryStats>& stats) {
  Json root = Json::object();
  root["schema"] = std::string(kStatsSchema);
  Json entries = Json::array();
  for (const auto& s : stats) {
    Json entry = Json::object();
    entry["source"] = s.source;
    entry["platform_version"] = s.platform_version;
    entry["architecture"] = s.architecture;
    entry["binary_size_bytes"] = s.binary_size_bytes;
    entry["binary_size_mb"] = s.binary_size_mb();
    entry["symbol_count"] = s.symbol_count;
    entry["unique_name_count"] = s.unique_name_count;
    entry["dwarf_versions"] = Json::array();
    for (int v : s.dwarf_versions) entry["dwarf_versions"].push_back(v);
    entries.push_back(std::move(entry));
  }
  root["entries"] = std::move(entries);
  return internal::DumpCanonical(root);
}

std::vector<BinaryStats> ParseStats(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "entries"});
  CheckSchema(view, kStatsSchema);
  std::vector<BinaryStats> out;
  for (const auto& entry : view["entries"].Elements()) {
    entry.RequireObject({"source", "platform_version", "architecture", "binary_size_bytes",
                         "binary_size_mb", "symbol_count", "unique_name_count", "dwarf_versions"});
    BinaryStats s;
    s.source = entry["source"].String();
    s.platform_version = entry["platform_version"].String();
    s.architecture = entry["architecture"].String();
    s.binary_size_bytes = entry["binary_size_bytes"].Unsigned();
    s.binary_size_centi_mb = BytesToCentiMegabytes(s.binary_size_bytes);
    if (entry["binary_size_mb"].Number() != s.binary_size_mb()) {
      entry["binary_size_mb"].Fail("does not match binary_size_bytes");
    }
    s.symbol_count = entry["symbol_count"].Unsigned();
    s.unique_name_count = entry["unique_name_count"].Unsigned();
    for (const auto& v : entry["dwarf_versions"].Elements()) {
      uint64_t version = v.Unsigned();
      if (version < 2 || version > 5) v.Fail("DWARF version outside 2..5");
      s.dwarf_versions.insert(static_cast<int>(version));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace structdrift
