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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "structdrift/analytics.hpp"
#include "structdrift/profile.hpp"

namespace structdrift {

inline constexpr std::string_view kWatchlistSchema = "structdrift-watchlist/1";
inline constexpr std::string_view kChainsSchema = "structdrift-chains/1";
inline constexpr std::string_view kCapabilitySchema = "structdrift-capabilities/1";

struct WatchlistSpec {
  std::string name;
  std::vector<std::string> structures;
  // Entries picked by the toolkit to fill out the list; reports label them.
  std::vector<std::string> supplementary;

  ScopeInfo Scope() const { return {name, supplementary}; }
  friend bool operator==(const WatchlistSpec&, const WatchlistSpec&) = default;
};

// Non-empty, duplicate-free, supplementary a subset of structures.
// Throws Error(kSchemaViolation) otherwise.
void CheckWatchlist(const WatchlistSpec& spec);

WatchlistSpec DefaultWatchlist();
WatchlistSpec ParseWatchlist(std::string_view text, std::string_view source = "watchlist");
std::string SerializeWatchlist(const WatchlistSpec& spec);

enum class Capability { kThreadEnumeration, kHeapAnalysis, kObjectReconstruction, kDexRecovery };
inline constexpr Capability kAllCapabilities[] = {
    Capability::kThreadEnumeration, Capability::kHeapAnalysis, Capability::kObjectReconstruction,
    Capability::kDexRecovery};

std::string_view ToString(Capability capability);
std::optional<Capability> ParseCapability(std::string_view text);

struct ChainStep {
  std::string structure;
  std::string member;

  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

// Inclusive bounds compared with CompareVersionLabels.
struct VersionRange {
  std::optional<std::string> min;
  std::optional<std::string> max;

  bool Contains(std::string_view version) const;
  friend bool operator==(const VersionRange&, const VersionRange&) = default;
};

struct ChainSpec {
  std::string id;
  Capability capability = Capability::kThreadEnumeration;
  std::vector<ChainStep> steps;
  std::optional<VersionRange> applicable_versions;

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

// Throws Error(kSchemaViolation) on an empty chain, an inverted range or
// repeated ids.
void CheckChains(const std::vector<ChainSpec>& chains);

std::vector<ChainSpec> DefaultChains();
std::vector<ChainSpec> ParseChains(std::string_view text, std::string_view source = "chains");
std::string SerializeChains(const std::vector<ChainSpec>& chains);

enum class FailureReason { kStructureMissing, kMemberMissing, kChainNotApplicable };
std::string_view ToString(FailureReason reason);

struct ResolvedStep {
  std::string structure;
  std::string member;
  uint64_t offset = 0;

  friend bool operator==(const ResolvedStep&, const ResolvedStep&) = default;
};

struct ChainFailure {
  uint64_t step_index = 0;
  FailureReason reason = FailureReason::kStructureMissing;

  friend bool operator==(const ChainFailure&, const ChainFailure&) = default;
};

struct ChainReport {
  std::string chain_id;
  Capability capability = Capability::kThreadEnumeration;
  std::string version;
  std::vector<ResolvedStep> resolved_steps;
  std::optional<ChainFailure> first_failure;

  bool resolved() const { return !first_failure.has_value(); }
  friend bool operator==(const ChainReport&, const ChainReport&) = default;
};

// A step resolves to the first member of that name in canonical order.
ChainReport ResolveChain(const Profile& profile, const ChainSpec& chain);

enum class AnnotationKind { kBroke, kRestored, kOffsetsMoved };
std::string_view ToString(AnnotationKind kind);

struct CapabilityAnnotation {
  Transition transition;
  Capability capability = Capability::kThreadEnumeration;
  AnnotationKind kind = AnnotationKind::kBroke;
  // Set for kOffsetsMoved: the chain whose resolved offsets changed.
  std::optional<std::string> chain_id;

  friend bool operator==(const CapabilityAnnotation&, const CapabilityAnnotation&) = default;
};

struct CapabilityCell {
  std::string version;
  bool resolved = false;
  std::vector<std::string> resolving_chains;

  friend bool operator==(const CapabilityCell&, const CapabilityCell&) = default;
};

struct CapabilityReport {
  std::vector<std::string> versions;
  // One row per capability, in kAllCapabilities order, one cell per version.
  std::vector<std::pair<Capability, std::vector<CapabilityCell>>> table;
  std::vector<ChainReport> chains;  // version-major, chain order within
  std::vector<CapabilityAnnotation> annotations;

  bool AnyBroken() const;
  friend bool operator==(const CapabilityReport&, const CapabilityReport&) = default;
};

// A capability is resolved at a version iff at least one applicable chain
// for it resolves there. Annotations mark flips between consecutive
// versions and resolved chains whose offsets moved.
CapabilityReport AssessCapabilities(const ProfileSequence& sequence,
                                    const std::vector<ChainSpec>& chains);

std::string SerializeCapabilityReport(const CapabilityReport& report);
CapabilityReport ParseCapabilityReport(std::string_view text,
                                       std::string_view source = "capabilities");

}  // namespace structdrift
