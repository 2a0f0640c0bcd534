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

#include "structdrift/forensic_watch.hpp"

#include <set>

#include "json_support.hpp"
#include "structdrift/diff.hpp"
#include "structdrift/error.hpp"
#include "structdrift/version.hpp"

namespace structdrift {

namespace internal {
extern const std::string_view kDefaultChainsJson;
extern const std::string_view kDefaultWatchlistJson;
}  // namespace internal

using internal::Json;
using internal::JsonView;

namespace {

template <typename Enum, size_t N>
std::optional<Enum> Lookup(const std::pair<Enum, std::string_view> (&table)[N],
                           std::string_view text) {
  for (const auto& [value, name] : table) {
    if (name == text) return value;
  }
  return std::nullopt;
}

template <typename Enum, size_t N>
std::string_view Name(const std::pair<Enum, std::string_view> (&table)[N], Enum value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "unknown";
}

constexpr std::pair<Capability, std::string_view> kCapabilityNames[] = {
    {Capability::kThreadEnumeration, "thread_enumeration"},
    {Capability::kHeapAnalysis, "heap_analysis"},
    {Capability::kObjectReconstruction, "object_reconstruction"},
    {Capability::kDexRecovery, "dex_recovery"},
};

constexpr std::pair<FailureReason, std::string_view> kReasonNames[] = {
    {FailureReason::kStructureMissing, "structure-missing"},
    {FailureReason::kMemberMissing, "member-missing"},
    {FailureReason::kChainNotApplicable, "chain-not-applicable"},
};

constexpr std::pair<AnnotationKind, std::string_view> kAnnotationNames[] = {
    {AnnotationKind::kBroke, "broke"},
    {AnnotationKind::kRestored, "restored"},
    {AnnotationKind::kOffsetsMoved, "offsets-moved"},
};

template <typename Enum, size_t N>
Enum RequireEnum(const std::pair<Enum, std::string_view> (&table)[N], const JsonView& view) {
  auto text = view.String();
  auto value = Lookup(table, text);
  if (!value) view.Fail("unknown value '" + text + "'");
  return *value;
}

void CheckSchema(const JsonView& view, std::string_view expected) {
  if (auto schema = view["schema"].String(); schema != expected) {
    view["schema"].Fail("unsupported schema '" + schema + "'");
  }
}

Json ChainReportToJson(const ChainReport& r) {
  Json out = Json::object();
  out["chain"] = r.chain_id;
  out["capability"] = std::string(ToString(r.capability));
  out["version"] = r.version;
  out["status"] = r.resolved() ? "resolved" : "broken";
  Json steps = Json::array();
  for (const auto& s : r.resolved_steps) {
    Json step = Json::object();
    step["structure"] = s.structure;
    step["member"] = s.member;
    step["offset"] = s.offset;
    steps.push_back(std::move(step));
  }
  out["resolved_steps"] = std::move(steps);
  if (r.first_failure) {
    Json failure = Json::object();
    failure["step_index"] = r.first_failure->step_index;
    failure["reason"] = std::string(ToString(r.first_failure->reason));
    out["first_failure"] = std::move(failure);
  } else {
    out["first_failure"] = nullptr;
  }
  return out;
}

ChainReport ChainReportFromJson(const JsonView& view) {
  view.RequireObject(
      {"chain", "capability", "version", "status", "resolved_steps", "first_failure"});
  ChainReport r;
  r.chain_id = view["chain"].String();
  r.capability = RequireEnum(kCapabilityNames, view["capability"]);
  r.version = view["version"].String();
  auto status = view["status"].String();
  if (status != "resolved" && status != "broken") view["status"].Fail("unknown status");
  for (const auto& s : view["resolved_steps"].Elements()) {
    s.RequireObject({"structure", "member", "offset"});
    r.resolved_steps.push_back({s["structure"].String(), s["member"].String(), s["offset"].Unsigned()});
  }
  if (!view["first_failure"].IsNull()) {
    auto f = view["first_failure"];
    f.RequireObject({"step_index", "reason"});
    r.first_failure = ChainFailure{f["step_index"].Unsigned(), RequireEnum(kReasonNames, f["reason"])};
    if (r.first_failure->step_index != r.resolved_steps.size()) {
      f.Fail("step_index must equal the number of resolved steps");
    }
  }
  if ((status == "resolved") != r.resolved()) view.Fail("status disagrees with first_failure");
  return r;
}

}  // namespace

std::string_view ToString(Capability capability) { return Name(kCapabilityNames, capability); }
std::optional<Capability> ParseCapability(std::string_view text) {
  return Lookup(kCapabilityNames, text);
}
std::string_view ToString(FailureReason reason) { return Name(kReasonNames, reason); }
std::string_view ToString(AnnotationKind kind) { return Name(kAnnotationNames, kind); }

void CheckWatchlist(const WatchlistSpec& spec) {
  if (spec.structures.empty()) throw Error(ErrorCode::kSchemaViolation, "watchlist is empty");
  std::set<std::string_view> seen;
  for (const auto& name : spec.structures) {
    if (name.empty()) throw Error(ErrorCode::kSchemaViolation, "watchlist has an empty name");
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kSchemaViolation, "watchlist repeats '" + name + "'");
    }
  }
  std::set<std::string_view> extra;
  for (const auto& name : spec.supplementary) {
    if (!seen.contains(name) || !extra.insert(name).second) {
      throw Error(ErrorCode::kSchemaViolation,
                  "supplementary entry '" + name + "' is repeated or not in the watchlist");
    }
  }
}

WatchlistSpec ParseWatchlist(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "name", "structures"}, {"supplementary"});
  CheckSchema(view, kWatchlistSchema);
  WatchlistSpec spec;
  spec.name = view["name"].String();
  spec.structures = view["structures"].StringArray();
  if (view.Has("supplementary")) spec.supplementary = view["supplementary"].StringArray();
  CheckWatchlist(spec);
  return spec;
}

std::string SerializeWatchlist(const WatchlistSpec& spec) {
  CheckWatchlist(spec);
  Json root = Json::object();
  root["schema"] = std::string(kWatchlistSchema);
  root["name"] = spec.name;
  root["structures"] = spec.structures;
  root["supplementary"] = spec.supplementary;
  return internal::DumpCanonical(root);
}

WatchlistSpec DefaultWatchlist() {
  return ParseWatchlist(internal::kDefaultWatchlistJson, "default watchlist");
}

bool VersionRange::Contains(std::string_view version) const {
  if (min && CompareVersionLabels(version, *min) < 0) return false;
  if (max && CompareVersionLabels(version, *max) > 0) return false;
  return true;
}

void CheckChains(const std::vector<ChainSpec>& chains) {
  std::set<std::string_view> ids;
  for (const auto& chain : chains) {
    if (chain.id.empty()) throw Error(ErrorCode::kSchemaViolation, "chain with empty id");
    if (!ids.insert(chain.id).second) {
      throw Error(ErrorCode::kSchemaViolation, "chain id '" + chain.id + "' repeated");
    }
    if (chain.steps.empty()) {
      throw Error(ErrorCode::kSchemaViolation, "chain '" + chain.id + "' has no steps");
    }
    const auto& range = chain.applicable_versions;
    if (range && range->min && range->max && CompareVersionLabels(*range->min, *range->max) > 0) {
      throw Error(ErrorCode::kSchemaViolation,
                  "chain '" + chain.id + "' has min version above max version");
    }
  }
}

std::vector<ChainSpec> ParseChains(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "chains"});
  CheckSchema(view, kChainsSchema);
  std::vector<ChainSpec> chains;
  for (const auto& entry : view["chains"].Elements()) {
    entry.RequireObject({"id", "capability", "steps"}, {"applicable_versions"});
    ChainSpec chain;
    chain.id = entry["id"].String();
    chain.capability = RequireEnum(kCapabilityNames, entry["capability"]);
    if (entry.Has("applicable_versions")) {
      auto range = entry["applicable_versions"];
      range.RequireObject({}, {"min", "max"});
      VersionRange r;
      if (range.Has("min")) r.min = range["min"].String();
      if (range.Has("max")) r.max = range["max"].String();
      chain.applicable_versions = std::move(r);
    }
    for (const auto& step : entry["steps"].Elements()) {
      step.RequireObject({"structure", "member"});
      chain.steps.push_back({step["structure"].String(), step["member"].String()});
    }
    chains.push_back(std::move(chain));
  }
  CheckChains(chains);
  return chains;
}

std::string SerializeChains(const std::vector<ChainSpec>& chains) {
  CheckChains(chains);
  Json list = Json::array();
  for (const auto& chain : chains) {
    Json entry = Json::object();
    entry["id"] = chain.id;
    entry["capability"] = std::string(ToString(chain.capability));
    if (chain.applicable_versions) {
      Json range = Json::object();
      if (chain.applicable_versions->min) range["min"] = *chain.applicable_versions->min;
      if (chain.applicable_versions->max) range["max"] = *chain.applicable_versions->max;
      entry["applicable_versions"] = std::move(range);
    }
    Json steps = Json::array();
    for (const auto& step : chain.steps) {
      Json s = Json::object();
      s["structure"] = step.structure;
      s["member"] = step.member;
      steps.push_back(std::move(s));
    }
    entry["steps"] = std::move(steps);
    list.push_back(std::move(entry));
  }
  Json root = Json::object();
  root["schema"] = std::string(kChainsSchema);
  root["chains"] = std::move(list);
  return internal::DumpCanonical(root);
}

std::vector<ChainSpec> DefaultChains() {
  return ParseChains(internal::kDefaultChainsJson, "default chains");
}

ChainReport ResolveChain(const Profile& profile, const ChainSpec& chain) {
  ChainReport report;
  report.chain_id = chain.id;
  report.capability = chain.capability;
  report.version = profile.meta.platform_version;
  if (chain.applicable_versions && !chain.applicable_versions->Contains(report.version)) {
    report.first_failure = ChainFailure{0, FailureReason::kChainNotApplicable};
    return report;
  }
  for (size_t i = 0; i < chain.steps.size(); ++i) {
    const auto& step = chain.steps[i];
    const auto* record = profile.Find(step.structure);
    if (record == nullptr) {
      report.first_failure = ChainFailure{i, FailureReason::kStructureMissing};
      return report;
    }
    auto ids = MemberIdentities(*record);
    auto it = ids.find(MemberIdentity{step.member, 0});
    if (it == ids.end()) {
      report.first_failure = ChainFailure{i, FailureReason::kMemberMissing};
      return report;
    }
    report.resolved_steps.push_back({step.structure, step.member, it->second});
  }
  return report;
}

bool CapabilityReport::AnyBroken() const {
  for (const auto& row : table) {
    for (const auto& cell : row.second) {
      if (!cell.resolved) return true;
    }
  }
  return false;
}

CapabilityReport AssessCapabilities(const ProfileSequence& sequence,
                                    const std::vector<ChainSpec>& chains) {
  if (sequence.empty()) throw Error(ErrorCode::kSequenceTooShort, "need at least one profile");
  CheckChains(chains);
  CapabilityReport report;
  report.versions = sequence.labels();

  // per_version[v][c] is the report of chains[c] at version v.
  std::vector<std::vector<ChainReport>> per_version;
  for (const auto& profile : sequence.profiles()) {
    auto& row = per_version.emplace_back();
    for (const auto& chain : chains) row.push_back(ResolveChain(profile, chain));
    report.chains.insert(report.chains.end(), row.begin(), row.end());
  }

  for (Capability capability : kAllCapabilities) {
    std::vector<CapabilityCell> cells;
    for (size_t v = 0; v < sequence.size(); ++v) {
      CapabilityCell cell{report.versions[v], false, {}};
      for (size_t c = 0; c < chains.size(); ++c) {
        if (chains[c].capability == capability && per_version[v][c].resolved()) {
          cell.resolving_chains.push_back(chains[c].id);
        }
      }
      cell.resolved = !cell.resolving_chains.empty();
      cells.push_back(std::move(cell));
    }
    for (size_t v = 1; v < cells.size(); ++v) {
      Transition t{report.versions[v - 1], report.versions[v]};
      if (cells[v - 1].resolved != cells[v].resolved) {
        report.annotations.push_back(
            {t, capability, cells[v].resolved ? AnnotationKind::kRestored : AnnotationKind::kBroke,
             std::nullopt});
      }
      for (size_t c = 0; c < chains.size(); ++c) {
        if (chains[c].capability != capability) continue;
        const auto& before = per_version[v - 1][c];
        const auto& after = per_version[v][c];
        if (before.resolved() && after.resolved() && before.resolved_steps != after.resolved_steps) {
          report.annotations.push_back({t, capability, AnnotationKind::kOffsetsMoved, chains[c].id});
        }
      }
    }
    report.table.emplace_back(capability, std::move(cells));
  }
  return report;
}

std::string SerializeCapabilityReport(const CapabilityReport& report) {
  Json root = Json::object();
  root["schema"] = std::string(kCapabilitySchema);
  root["versions"] = report.versions;
  Json table = Json::array();
  for (const auto& [capability, cells] : report.table) {
    Json row = Json::object();
    row["capability"] = std::string(ToString(capability));
    Json cells_json = Json::array();
    for (const auto& cell : cells) {
      Json c = Json::object();
      c["version"] = cell.version;
      c["status"] = cell.resolved ? "resolved" : "broken";
      c["resolving_chains"] = cell.resolving_chains;
      cells_json.push_back(std::move(c));
    }
    row["cells"] = std::move(cells_json);
    table.push_back(std::move(row));
  }
  root["capabilities"] = std::move(table);
  Json chains = Json::array();
  for (const auto& r : report.chains) chains.push_back(ChainReportToJson(r));
  root["chains"] = std::move(chains);
  Json annotations = Json::array();
  for (const auto& a : report.annotations) {
    Json entry = Json::object();
    entry["from"] = a.transition.from;
    entry["to"] = a.transition.to;
    entry["capability"] = std::string(ToString(a.capability));
    entry["kind"] = std::string(ToString(a.kind));
    entry["chain"] = a.chain_id ? Json(*a.chain_id) : Json(nullptr);
    annotations.push_back(std::move(entry));
  }
  root["annotations"] = std::move(annotations);
  return internal::DumpCanonical(root);
}

CapabilityReport ParseCapabilityReport(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "versions", "capabilities", "chains", "annotations"});
  CheckSchema(view, kCapabilitySchema);
  CapabilityReport report;
  report.versions = view["versions"].StringArray();
  for (const auto& row : view["capabilities"].Elements()) {
    row.RequireObject({"capability", "cells"});
    auto capability = RequireEnum(kCapabilityNames, row["capability"]);
    std::vector<CapabilityCell> cells;
    for (const auto& c : row["cells"].Elements()) {
      c.RequireObject({"version", "status", "resolving_chains"});
      auto status = c["status"].String();
      if (status != "resolved" && status != "broken") c["status"].Fail("unknown status");
      CapabilityCell cell{c["version"].String(), status == "resolved",
                          c["resolving_chains"].StringArray()};
      if (cell.resolved == cell.resolving_chains.empty()) {
        c.Fail("status disagrees with resolving_chains");
      }
      cells.push_back(std::move(cell));
    }
    if (cells.size() != report.versions.size()) row.Fail("cell count differs from versions");
    report.table.emplace_back(capability, std::move(cells));
  }
  for (const auto& c : view["chains"].Elements()) report.chains.push_back(ChainReportFromJson(c));
  for (const auto& a : view["annotations"].Elements()) {
    a.RequireObject({"from", "to", "capability", "kind", "chain"});
    CapabilityAnnotation out;
    out.transition = {a["from"].String(), a["to"].String()};
    out.capability = RequireEnum(kCapabilityNames, a["capability"]);
    out.kind = RequireEnum(kAnnotationNames, a["kind"]);
    if (!a["chain"].IsNull()) out.chain_id = a["chain"].String();
    report.annotations.push_back(std::move(out));
  }
  return report;
}

}  // namespace structdrift
