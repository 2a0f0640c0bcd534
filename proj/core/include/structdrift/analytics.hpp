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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "structdrift/diff.hpp"
#include "structdrift/profile.hpp"

namespace structdrift {

inline constexpr std::string_view kImpactSchema = "structdrift-impact/1";
inline constexpr std::string_view kAggregateSchema = "structdrift-aggregate/1";
inline constexpr std::string_view kTimelineSchema = "structdrift-timeline/1";
inline constexpr std::string_view kVolatilitySchema = "structdrift-volatility/1";
inline constexpr std::string_view kStatsSchema = "structdrift-stats/1";

// Profiles of one architecture in ascending platform_version order.
class ProfileSequence {
 public:
  ProfileSequence() = default;

  // Sorts by version. Throws Error(kInconsistentSequence) on a repeated
  // version or on mixed architectures.
  explicit ProfileSequence(std::vector<Profile> profiles);

  const std::vector<Profile>& profiles() const { return profiles_; }
  const Profile& operator[](size_t i) const { return profiles_[i]; }
  size_t size() const { return profiles_.size(); }
  bool empty() const { return profiles_.empty(); }
  std::vector<std::string> labels() const;

 private:
  std::vector<Profile> profiles_;
};

// The structure set an analysis ran over. `supplementary` lists names that
// were added by the toolkit rather than taken from the reference list.
struct ScopeInfo {
  std::string name = "all";
  std::vector<std::string> supplementary;

  friend bool operator==(const ScopeInfo&, const ScopeInfo&) = default;
};

struct Transition {
  std::string from;
  std::string to;

  std::string Label() const { return from + "-" + to; }
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct ImpactWeights {
  double offset = 0.5;
  double churn = 0.3;
  double size = 0.2;

  // Throws Error(kInvalidArgument) unless every weight is finite and > 0.
  void Check() const;
  friend bool operator==(const ImpactWeights&, const ImpactWeights&) = default;
};

struct ImpactFactors {
  double offset_fraction = 0;
  double churn_ratio = 0;
  double size_delta_fraction = 0;

  friend bool operator==(const ImpactFactors&, const ImpactFactors&) = default;
};

struct ImpactScore {
  std::string structure;
  Transition transition;
  double score = 0;
  ImpactFactors factors;

  friend bool operator==(const ImpactScore&, const ImpactScore&) = default;
};

ImpactFactors ComputeImpactFactors(const StructureDiff& diff);

// clamp(w.offset*offset_fraction + w.churn*min(churn,1) + w.size*min(size,1), 0, 1)
double CombineImpact(const ImpactFactors& factors, const ImpactWeights& weights = {});

ImpactScore ComputeImpactScore(const StructureDiff& diff, Transition transition = {},
                               const ImpactWeights& weights = {});

struct ImpactMatrix {
  ScopeInfo scope;
  ImpactWeights weights;
  std::vector<Transition> transitions;
  std::vector<std::string> structures;
  // cells[s][t]; nullopt when the structure is absent on either side.
  std::vector<std::vector<std::optional<ImpactScore>>> cells;

  friend bool operator==(const ImpactMatrix&, const ImpactMatrix&) = default;
};

// Rows follow the watchlist order. Throws Error(kSequenceTooShort) for
// fewer than two profiles.
ImpactMatrix ComputeImpactMatrix(const ProfileSequence& sequence,
                                 const std::vector<std::string>& watchlist,
                                 const ImpactWeights& weights = {}, ScopeInfo scope = {});

struct TimelinePoint {
  std::string version;
  std::optional<uint64_t> value;

  friend bool operator==(const TimelinePoint&, const TimelinePoint&) = default;
};

struct TimelineReport {
  std::string structure;
  std::optional<std::string> member;
  std::vector<TimelinePoint> points;

  friend bool operator==(const TimelineReport&, const TimelineReport&) = default;
};

TimelineReport SizeTimeline(const ProfileSequence& sequence, std::string_view structure);

// Follows the member identity (name, ordinal among same-named members).
TimelineReport MemberOffsetTimeline(const ProfileSequence& sequence, std::string_view structure,
                                    std::string_view member, uint64_t ordinal = 0);

struct StructureVolatility {
  uint64_t surviving_members = 0;
  uint64_t members_with_offset_change = 0;
  double rate = 0;

  friend bool operator==(const StructureVolatility&, const StructureVolatility&) = default;
};

struct VolatilityStats {
  ScopeInfo scope;
  std::map<std::string, StructureVolatility> per_structure;
  uint64_t surviving_members = 0;
  uint64_t members_with_offset_change = 0;
  double overall_rate = 0;

  friend bool operator==(const VolatilityStats&, const VolatilityStats&) = default;
};

// A member identity survives if it is present on both sides of at least one
// transition, and is volatile if its offset differs across any such
// transition. Each identity is counted once. Without a watchlist every
// structure is considered. Throws Error(kSequenceTooShort) below two profiles.
VolatilityStats ComputeVolatility(const ProfileSequence& sequence,
                                  const std::optional<std::vector<std::string>>& watchlist,
                                  ScopeInfo scope = {});

struct BinaryStats {
  std::string source;
  std::string platform_version;
  std::string architecture;
  uint64_t binary_size_bytes = 0;
  // Size in MB (10^6 bytes), rounded half-up to two decimals, times 100.
  uint64_t binary_size_centi_mb = 0;
  uint64_t symbol_count = 0;  // raw structure/class DIEs
  uint64_t unique_name_count = 0;
  std::set<int> dwarf_versions;

  double binary_size_mb() const { return static_cast<double>(binary_size_centi_mb) / 100.0; }
  friend bool operator==(const BinaryStats&, const BinaryStats&) = default;
};

uint64_t BytesToCentiMegabytes(uint64_t bytes);

BinaryStats ComputeBinaryStats(const Profile& profile, std::string source = {});

// Accepts an ELF binary (extracted on the fly) or a profile file.
BinaryStats ComputeBinaryStats(const std::filesystem::path& source);

struct TransitionRow {
  Transition transition;
  ChangeCounts counts;

  friend bool operator==(const TransitionRow&, const TransitionRow&) = default;
};

struct AggregateReport {
  ScopeInfo scope;
  std::vector<TransitionRow> rows;
  ChangeCounts total;

  friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

// Throws Error(kSequenceTooShort) for fewer than two profiles.
AggregateReport AggregateTransitions(const ProfileSequence& sequence,
                                     const std::optional<std::set<std::string>>& scope,
                                     ScopeInfo info = {});

std::string SerializeImpactMatrix(const ImpactMatrix& matrix);
ImpactMatrix ParseImpactMatrix(std::string_view text, std::string_view source = "impact");
std::string SerializeAggregate(const AggregateReport& report);
AggregateReport ParseAggregate(std::string_view text, std::string_view source = "aggregate");
std::string SerializeTimeline(const TimelineReport& report);
TimelineReport ParseTimeline(std::string_view text, std::string_view source = "timeline");
std::string SerializeVolatility(const VolatilityStats& stats);
VolatilityStats ParseVolatility(std::string_view text, std::string_view source = "volatility");
std::string SerializeStats(const std::vector<BinaryStats>& stats);
std::vector<BinaryStats> ParseStats(std::string_view text, std::string_view source = "stats");

}  // namespace structdrift
