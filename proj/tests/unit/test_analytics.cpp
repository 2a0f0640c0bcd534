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

#include <gtest/gtest.h>

#include <chrono>
#include <functional>
#include <random>

#include "art_like.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "structdrift/analytics.hpp"
#include "structdrift/error.hpp"
#include "structdrift/extractor.hpp"
#include "structdrift/profile_store.hpp"

namespace structdrift {
namespace {

StructureRecord Rec(std::string name, uint64_t size, std::vector<MemberRecord> members) {
  StructureRecord r{std::move(name), size, std::move(members)};
  Canonicalize(r);
  return r;
}

Profile Prof(std::string version, std::vector<StructureRecord> records) {
  Profile p;
  p.meta.platform_version = std::move(version);
  for (auto& r : records) p.structures.emplace(r.name, std::move(r));
  return p;
}

// Written out independently of CombineImpact.
double OracleScore(double offset, double churn, double size) {
  double s = 0.5 * std::min(offset, 1.0) + 0.3 * std::min(churn, 1.0) + 0.2 * std::min(size, 1.0);
  return std::max(0.0, std::min(1.0, s));
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

TEST(ProfileSequence, OrdersNumerically) {
  ProfileSequence seq({Prof("10", {}), Prof("9", {}), Prof("14", {}), Prof("11", {})});
  EXPECT_EQ(seq.labels(), (std::vector<std::string>{"9", "10", "11", "14"}));
}

TEST(ProfileSequence, RejectsDuplicatesAndMixedArchitectures) {
  EXPECT_EQ(CodeOf([] { ProfileSequence({Prof("9", {}), Prof("9", {})}); }),
            ErrorCode::kInconsistentSequence);
  auto arm = Prof("10", {});
  arm.meta.architecture = Architecture::kArm64;
  EXPECT_EQ(CodeOf([&] { ProfileSequence({Prof("9", {}), arm}); }), ErrorCode::kInconsistentSequence);
}

TEST(ImpactScore, IdenticalStructureScoresZero) {
  auto r = Rec("Heap", 64, {{"a", 0}, {"b", 8}});
  auto s = ComputeImpactScore(DiffStructure(r, r));
  EXPECT_EQ(s.score, 0.0);
  EXPECT_EQ(s.factors, ImpactFactors{});
}

TEST(ImpactScore, AllSharedMembersMovedScoresHalf) {
  auto s = ComputeImpactScore(DiffStructure(Rec("T", 32, {{"a", 0}, {"b", 8}, {"c", 16}}),
                                            Rec("T", 32, {{"a", 4}, {"b", 12}, {"c", 20}})));
  EXPECT_DOUBLE_EQ(s.factors.offset_fraction, 1.0);
  EXPECT_DOUBLE_EQ(s.score, 0.5);
}

TEST(ImpactScore, FactorsFollowDefinitions) {
  // 4 old members: one removed, one moved, two additions; size 100 -> 150.
  auto d = DiffStructure(Rec("T", 100, {{"a", 0}, {"b", 8}, {"c", 16}, {"d", 24}}),
                         Rec("T", 150, {{"a", 0}, {"b", 12}, {"c", 16}, {"x", 40}, {"y", 48}}));
  auto s = ComputeImpactScore(d);
  EXPECT_DOUBLE_EQ(s.factors.offset_fraction, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.factors.churn_ratio, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(s.factors.size_delta_fraction, 0.5);
  EXPECT_NEAR(s.score, OracleScore(1.0 / 3.0, 0.75, 0.5), 1e-12);
}

TEST(ImpactScore, LargeGrowthIsCapped) {
  auto s = ComputeImpactScore(DiffStructure(Rec("Thread", 2584, {{"a", 0}}),
                                            Rec("Thread", 6768, {{"a", 0}})));
  EXPECT_NEAR(s.factors.size_delta_fraction, (6768.0 - 2584.0) / 2584.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.score, 0.2);
}

TEST(ImpactScore, EmptyStructuresUseUnitDenominators) {
  auto s = ComputeImpactScore(DiffStructure(Rec("T", 0, {}), Rec("T", 8, {{"a", 0}})));
  EXPECT_DOUBLE_EQ(s.factors.churn_ratio, 1.0);
  EXPECT_DOUBLE_EQ(s.factors.size_delta_fraction, 8.0);
  EXPECT_DOUBLE_EQ(s.score, 0.5);
}

TEST(ImpactProperties, BoundedMonotoneAndZeroOnlyAtOrigin) {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wide(0.0, 5.0);
  std::uniform_real_distribution<double> bump(0.0, 2.0);
  for (int i = 0; i < 10000; ++i) {
    ImpactFactors f{unit(rng), wide(rng), wide(rng)};
    if (i % 10 == 0) f.churn_ratio = 0;
    if (i % 15 == 0) f.size_delta_fraction = 0;
    if (i % 20 == 0) f.offset_fraction = 0;
    double s = CombineImpact(f);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 1.0);
    ASSERT_NEAR(s, OracleScore(f.offset_fraction, f.churn_ratio, f.size_delta_fraction), 1e-12);
    bool all_zero = f.offset_fraction == 0 && f.churn_ratio == 0 && f.size_delta_fraction == 0;
    ASSERT_EQ(s == 0.0, all_zero);

    ImpactFactors g = f;
    g.offset_fraction = std::min(1.0, g.offset_fraction + bump(rng));
    ASSERT_GE(CombineImpact(g), s);
    g = f;
    g.churn_ratio += bump(rng);
    ASSERT_GE(CombineImpact(g), s);
    g = f;
    g.size_delta_fraction += bump(rng);
    ASSERT_GE(CombineImpact(g), s);
  }
  EXPECT_EQ(CombineImpact(ImpactFactors{}), 0.0);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
}

TEST(ImpactProperties, ScoreZeroExactlyForUnchangedStructures) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    auto a = testing::RandomProfile(rng);
    auto b = testing::MutateProfile(rng, a);
    for (const auto& [name, old_r] : a.structures) {
      const auto* new_r = b.Find(name);
      if (new_r == nullptr) continue;
      auto d = DiffStructure(old_r, *new_r);
      auto s = ComputeImpactScore(d);
      EXPECT_EQ(s.score == 0.0, !d.HasChanges());
      EXPECT_GE(s.score, 0.0);
      EXPECT_LE(s.score, 1.0);
    }
  }
}

TEST(ImpactWeights, MustBePositive) {
  EXPECT_THROW((ImpactWeights{0.0, 0.3, 0.2}.Check()), Error);
  EXPECT_THROW((ImpactWeights{0.5, -1, 0.2}.Check()), Error);
  EXPECT_NO_THROW(ImpactWeights{}.Check());
  // Larger weights still clamp into [0, 1].
  EXPECT_EQ(CombineImpact({1, 1, 1}, {1, 1, 1}), 1.0);
}

TEST(ImpactMatrix, IdenticalProfilesGiveZeros) {
  auto p = Prof("9", {Rec("A", 4, {{"x", 0}}), Rec("B", 8, {}), Rec("C", 16, {{"y", 8}})});
  auto q = p;
  q.meta.platform_version = "10";
  auto m = ComputeImpactMatrix(ProfileSequence({p, q}), {"A", "B", "C"});
  ASSERT_EQ(m.cells.size(), 3u);
  for (const auto& row : m.cells) {
    ASSERT_EQ(row.size(), 1u);
    ASSERT_TRUE(row[0]);
    EXPECT_EQ(row[0]->score, 0.0);
  }
}

TEST(ImpactMatrix, SingleChangeGivesOneNonzeroCell) {
  auto v1 = Prof("1", {Rec("A", 16, {{"x", 0}, {"y", 8}}), Rec("B", 8, {{"z", 0}})});
  auto v2 = v1;
  v2.meta.platform_version = "2";
  auto v3 = v2;
  v3.meta.platform_version = "3";
  v3.structures["A"] = Rec("A", 16, {{"x", 0}, {"y", 12}});
  auto m = ComputeImpactMatrix(ProfileSequence({v1, v2, v3}), {"A", "B"});
  int nonzero = 0;
  for (const auto& row : m.cells) {
    for (const auto& cell : row) nonzero += cell && cell->score > 0;
  }
  EXPECT_EQ(nonzero, 1);
  EXPECT_GT(m.cells[0][1]->score, 0.0);
  EXPECT_EQ(m.transitions[1].Label(), "2-3");
}

TEST(ImpactMatrix, AbsentStructuresAreMarkedNotZero) {
  auto seq = ProfileSequence(testing::ArtLikeSequence());
  auto m = ComputeImpactMatrix(seq, {"JitCodeCache", "Object", "Nowhere"});
  EXPECT_FALSE(m.cells[0][0].has_value());  // JitCodeCache 9-10
  EXPECT_TRUE(m.cells[0][1].has_value());
  EXPECT_TRUE(m.cells[1][2].has_value());   // Object 11-12
  EXPECT_FALSE(m.cells[1][3].has_value());  // Object 12-13
  for (const auto& cell : m.cells[2]) EXPECT_FALSE(cell.has_value());
  EXPECT_EQ(CodeOf([&] { ComputeImpactMatrix(ProfileSequence({seq[0]}), {"Runtime"}); }),
            ErrorCode::kSequenceTooShort);
}

std::vector<std::optional<uint64_t>> Values(const TimelineReport& r) {
  std::vector<std::optional<uint64_t>> out;
  for (const auto& p : r.points) out.push_back(p.value);
  return out;
}

using Opt = std::vector<std::optional<uint64_t>>;

TEST(Timeline, MemberOffsetsAcrossVersions) {
  auto seq = ProfileSequence(testing::ArtLikeSequence());
  EXPECT_EQ(Values(MemberOffsetTimeline(seq, "Runtime", "thread_list_")),
            (Opt{512, 464, 456, 480, 576, 584}));
  EXPECT_EQ(Values(MemberOffsetTimeline(seq, "Runtime", "heap_")), (Opt{448, 400, 392, 416, 512, 512}));
  auto region = Values(MemberOffsetTimeline(seq, "Heap", "region_space_"));
  EXPECT_EQ(region.front(), 728u);
  EXPECT_EQ(region.back(), 840u);
  auto park = Values(MemberOffsetTimeline(seq, "tls_32bit_sized_values", "park_state_"));
  EXPECT_EQ(park[0], std::nullopt);
  EXPECT_EQ(park[1], 60u);
  EXPECT_EQ(park[5], 44u);
  auto labels = MemberOffsetTimeline(seq, "Runtime", "heap_");
  EXPECT_EQ(labels.points.front().version, "9");
  EXPECT_EQ(labels.points.back().version, "14");
}

TEST(Timeline, SizesAndAbsence) {
  auto seq = ProfileSequence(testing::ArtLikeSequence());
  auto thread = Values(SizeTimeline(seq, "Thread"));
  EXPECT_EQ(thread[0], 2584u);
  EXPECT_EQ(thread[1], 6768u);
  for (const auto& v : Values(SizeTimeline(seq, "NoSuchStructure"))) EXPECT_FALSE(v.has_value());
  auto obj = Values(SizeTimeline(seq, "Object"));
  EXPECT_EQ(obj, (Opt{8, 8, 8, 8, std::nullopt, std::nullopt}));
}

TEST(Timeline, ConstantSizeFixture) {
  auto p = Prof("1", {Rec("Fixed", 24, {{"a", 0}})});
  auto q = p;
  q.meta.platform_version = "2";
  auto r = q;
  r.meta.platform_version = "3";
  EXPECT_EQ(Values(SizeTimeline(ProfileSequence({p, q, r}), "Fixed")), (Opt{24, 24, 24}));
}

TEST(Timeline, AgreesWithDiffs) {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<Profile> profiles{testing::RandomProfile(rng, {}, "1")};
    for (int v = 2; v <= 4; ++v) {
      profiles.push_back(testing::MutateProfile(rng, profiles.back(), {}, std::to_string(v)));
    }
    ProfileSequence seq(profiles);
    for (size_t v = 1; v < seq.size(); ++v) {
      auto diff = DiffProfiles(seq[v - 1], seq[v]);
      for (const auto& [name, record] : seq[v - 1].structures) {
        std::set<std::string> names;
        bool unique = true;
        for (const auto& m : record.members) unique &= names.insert(m.name).second;
        if (!unique || seq[v].Find(name) == nullptr) continue;
        for (const auto& member : names) {
          auto tl = MemberOffsetTimeline(seq, name, member);
          auto before = tl.points[v - 1].value;
          auto after = tl.points[v].value;
          bool moved = false;
          for (const auto& d : diff.modified) {
            if (d.name != name) continue;
            for (const auto& c : d.offset_changes) {
              if (c.member_name == member && before && after && c.old_offset == *before &&
                  c.new_offset == *after) {
                moved = true;
              }
            }
          }
          bool changed = before && after && *before != *after;
          EXPECT_EQ(changed, moved) << name << "." << member << " at " << v;
        }
      }
    }
  }
}

TEST(Volatility, StableSequenceIsZero) {
  auto p = Prof("1", {Rec("A", 16, {{"x", 0}, {"y", 8}})});
  auto q = p;
  q.meta.platform_version = "2";
  auto stats = ComputeVolatility(ProfileSequence({p, q}), std::nullopt);
  EXPECT_EQ(stats.overall_rate, 0.0);
  EXPECT_EQ(stats.surviving_members, 2u);
}

TEST(Volatility, OneOfTwoMoves) {
  auto p = Prof("1", {Rec("A", 16, {{"x", 0}, {"y", 8}})});
  auto q = Prof("2", {Rec("A", 16, {{"x", 0}, {"y", 12}})});
  auto stats = ComputeVolatility(ProfileSequence({p, q}), std::nullopt);
  EXPECT_DOUBLE_EQ(stats.overall_rate, 0.5);
  EXPECT_DOUBLE_EQ(stats.per_structure.at("A").rate, 0.5);
}

TEST(Volatility, MembersCountOnceAcrossTheSequence) {
  // y moves twice, x never; z appears only at the end; w disappears.
  auto v1 = Prof("1", {Rec("A", 32, {{"w", 20}, {"x", 0}, {"y", 8}})});
  auto v2 = Prof("2", {Rec("A", 32, {{"x", 0}, {"y", 12}})});
  auto v3 = Prof("3", {Rec("A", 32, {{"x", 0}, {"y", 16}, {"z", 24}})});
  auto stats = ComputeVolatility(ProfileSequence({v1, v2, v3}), std::nullopt);
  EXPECT_EQ(stats.per_structure.at("A").surviving_members, 2u);
  EXPECT_EQ(stats.per_structure.at("A").members_with_offset_change, 1u);
}

TEST(Volatility, OverallRateIsPooled) {
  auto p = Prof("1", {Rec("A", 16, {{"a", 0}, {"b", 8}}),
                      Rec("B", 64, {{"c", 0}, {"d", 8}, {"e", 16}, {"f", 24}, {"g", 32},
                                    {"h", 40}, {"i", 48}, {"j", 56}})});
  auto q = p;
  q.meta.platform_version = "2";
  q.structures["A"] = Rec("A", 16, {{"a", 0}, {"b", 12}});
  auto stats = ComputeVolatility(ProfileSequence({p, q}), std::nullopt);
  EXPECT_DOUBLE_EQ(stats.overall_rate, 0.1);
  EXPECT_DOUBLE_EQ(stats.per_structure.at("A").rate, 0.5);
  EXPECT_DOUBLE_EQ(stats.per_structure.at("B").rate, 0.0);
}

TEST(Volatility, WatchlistRestrictsScope) {
  auto seq = ProfileSequence(testing::ArtLikeSequence());
  auto stats = ComputeVolatility(seq, std::vector<std::string>{"Runtime", "Missing"});
  EXPECT_EQ(stats.per_structure.size(), 1u);
  EXPECT_EQ(stats.per_structure.at("Runtime").surviving_members, 4u);
  EXPECT_EQ(stats.per_structure.at("Runtime").members_with_offset_change, 3u);
  EXPECT_DOUBLE_EQ(stats.overall_rate, 0.75);
  EXPECT_EQ(CodeOf([&] { ComputeVolatility(ProfileSequence({seq[0]}), std::nullopt); }),
            ErrorCode::kSequenceTooShort);
}

TEST(Volatility, RatesStayBoundedAndPooledWithinRange) {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Profile> profiles{testing::RandomProfile(rng, {}, "1")};
    for (int v = 2; v <= 4; ++v) {
      profiles.push_back(testing::MutateProfile(rng, profiles.back(), {}, std::to_string(v)));
    }
    auto stats = ComputeVolatility(ProfileSequence(profiles), std::nullopt);
    double lo = 1;
    double hi = 0;
    bool all_nonzero = !stats.per_structure.empty();
    for (const auto& [name, v] : stats.per_structure) {
      EXPECT_GE(v.rate, 0.0);
      EXPECT_LE(v.rate, 1.0);
      lo = std::min(lo, v.rate);
      hi = std::max(hi, v.rate);
      all_nonzero &= v.surviving_members > 0;
    }
    EXPECT_GE(stats.overall_rate, 0.0);
    EXPECT_LE(stats.overall_rate, 1.0);
    if (all_nonzero) {
      EXPECT_GE(stats.overall_rate, lo - 1e-12);
      EXPECT_LE(stats.overall_rate, hi + 1e-12);
    }
  }
}

TEST(BinaryStats, MegabytesAreDecimalAndRounded) {
  EXPECT_EQ(BytesToCentiMegabytes(92'520'000), 9252u);
  EXPECT_EQ(BytesToCentiMegabytes(89'760'000), 8976u);
  EXPECT_EQ(BytesToCentiMegabytes(89'755'000), 8976u);
  EXPECT_EQ(BytesToCentiMegabytes(89'754'999), 8975u);
  EXPECT_EQ(BytesToCentiMegabytes(0), 0u);
  Profile p;
  p.meta.binary_size_bytes = 92'520'000;
  p.meta.raw_type_die_count = 17'275;
  auto s = ComputeBinaryStats(p);
  EXPECT_DOUBLE_EQ(s.binary_size_mb(), 92.52);
  EXPECT_EQ(s.symbol_count, 17'275u);
}

TEST(BinaryStats, FromBinaryAndFromProfileAgree) {
  auto binary = testing::FixturePath("simple3.x86_64.clang.dwarf5.so");
  auto from_elf = ComputeBinaryStats(binary);
  EXPECT_EQ(from_elf.symbol_count, 3u);
  EXPECT_EQ(from_elf.unique_name_count, 3u);
  EXPECT_EQ(from_elf.binary_size_bytes, std::filesystem::file_size(binary));
  EXPECT_EQ(from_elf.dwarf_versions, std::set<int>{5});

  testing::TempDir dir;
  auto path = dir.path() / "simple3.profile.json";
  WriteProfile(ExtractProfile(binary).profile, path);
  auto from_profile = ComputeBinaryStats(path);
  EXPECT_EQ(from_profile.symbol_count, from_elf.symbol_count);
  EXPECT_EQ(from_profile.binary_size_centi_mb, from_elf.binary_size_centi_mb);
  EXPECT_EQ(CodeOf([&] { ComputeBinaryStats(dir.path() / "missing"); }), ErrorCode::kIo);
  EXPECT_EQ(CodeOf([] { ComputeBinaryStats(testing::FixturePath("layouts.x86_64.stripped.so")); }),
            ErrorCode::kNoDebugInfo);
}

struct Injection {
  uint64_t offsets, additions, removals, structure_removals, structure_additions;
};

// Builds a sequence whose transition t changes exactly as injections[t]
// says. Each transition edits its own structure "T<t>" and drops its own
// "G<t>_<k>" structures.
std::vector<Profile> InjectedSequence(const std::vector<Injection>& injections) {
  std::vector<Profile> out;
  for (size_t v = 0; v <= injections.size(); ++v) {
    Profile p;
    p.meta.platform_version = std::to_string(v + 1);
    for (size_t t = 0; t < injections.size(); ++t) {
      const auto& inj = injections[t];
      bool after = v > t;
      StructureRecord r;
      r.name = "T" + std::to_string(t);
      r.byte_size = 100000;
      for (uint64_t k = 0; k < inj.offsets; ++k) {
        r.members.push_back({"mv" + std::to_string(k), k * 16 + (after ? 8 : 0)});
      }
      for (uint64_t k = 0; k < inj.removals && !after; ++k) {
        r.members.push_back({"rm" + std::to_string(k), 50000 + k});
      }
      for (uint64_t k = 0; k < inj.additions && after; ++k) {
        r.members.push_back({"ad" + std::to_string(k), 60000 + k});
      }
      Canonicalize(r);
      p.structures.emplace(r.name, std::move(r));
      for (uint64_t k = 0; k < inj.structure_removals && !after; ++k) {
        std::string name = "G" + std::to_string(t) + "_" + std::to_string(k);
        p.structures.emplace(name, StructureRecord{name, 4, {}});
      }
      for (uint64_t k = 0; k < inj.structure_additions && after; ++k) {
        std::string name = "N" + std::to_string(t) + "_" + std::to_string(k);
        p.structures.emplace(name, StructureRecord{name, 4, {}});
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

TEST(Aggregate, IdenticalSequenceIsAllZero) {
  auto p = Prof("1", {Rec("A", 8, {{"a", 0}})});
  auto q = p;
  q.meta.platform_version = "2";
  auto r = q;
  r.meta.platform_version = "3";
  auto report = AggregateTransitions(ProfileSequence({p, q, r}), std::nullopt);
  ASSERT_EQ(report.rows.size(), 2u);
  for (const auto& row : report.rows) EXPECT_EQ(row.counts, ChangeCounts{});
  EXPECT_EQ(report.total, ChangeCounts{});
}

TEST(Aggregate, RowsEqualInjectedCounts) {
  const std::vector<Injection> injections = {
      {312, 24, 19, 1, 2}, {156, 15, 4, 0, 1}, {98, 8, 3, 0, 0}, {187, 10, 4, 3, 0}, {203, 11, 9, 0, 5}};
  auto report = AggregateTransitions(ProfileSequence(InjectedSequence(injections)), std::nullopt);
  ASSERT_EQ(report.rows.size(), injections.size());
  ChangeCounts sum;
  for (size_t t = 0; t < injections.size(); ++t) {
    const auto& c = report.rows[t].counts;
    const auto& inj = injections[t];
    EXPECT_EQ(c.offset_changes, inj.offsets);
    EXPECT_EQ(c.member_additions, inj.additions);
    EXPECT_EQ(c.member_removals, inj.removals);
    EXPECT_EQ(c.structure_removals, inj.structure_removals);
    EXPECT_EQ(c.structure_additions, inj.structure_additions);
    EXPECT_EQ(c.total_impact, inj.offsets + inj.additions + inj.removals + inj.structure_removals);
    sum += c;
  }
  EXPECT_EQ(report.total, sum);
  EXPECT_EQ(report.rows[0].counts.total_impact, 356u);
  EXPECT_EQ(report.total.offset_changes, 956u);
  EXPECT_EQ(report.total.member_additions, 68u);
  EXPECT_EQ(report.total.member_removals, 39u);
  EXPECT_EQ(report.total.structure_removals, 4u);
  EXPECT_EQ(report.total.total_impact, 1067u);
  EXPECT_EQ(report.rows[0].transition.Label(), "1-2");
}

TEST(Aggregate, ScopeAndShortSequences) {
  auto seq = ProfileSequence(testing::ArtLikeSequence());
  auto scoped = AggregateTransitions(seq, std::set<std::string>{"Object", "Class"});
  EXPECT_EQ(scoped.rows[3].counts.structure_removals, 2u);
  EXPECT_EQ(scoped.total.structure_removals, 2u);
  EXPECT_EQ(CodeOf([&] { AggregateTransitions(ProfileSequence({seq[0]}), std::nullopt); }),
            ErrorCode::kSequenceTooShort);
}

TEST(AnalyticsJson, ReportsRoundTrip) {
  auto seq = ProfileSequence(testing::ArtLikeSequence());
  ScopeInfo scope{"custom", {"Heap"}};
  auto matrix = ComputeImpactMatrix(seq, {"Runtime", "Heap", "JitCodeCache"}, {}, scope);
  auto text = SerializeImpactMatrix(matrix);
  EXPECT_EQ(ParseImpactMatrix(text), matrix);
  EXPECT_EQ(SerializeImpactMatrix(ParseImpactMatrix(text)), text);

  auto aggregate = AggregateTransitions(seq, std::nullopt, scope);
  EXPECT_EQ(ParseAggregate(SerializeAggregate(aggregate)), aggregate);

  auto timeline = MemberOffsetTimeline(seq, "Runtime", "thread_list_");
  EXPECT_EQ(ParseTimeline(SerializeTimeline(timeline)), timeline);
  auto sizes = SizeTimeline(seq, "Object");
  EXPECT_EQ(ParseTimeline(SerializeTimeline(sizes)), sizes);

  auto volatility = ComputeVolatility(seq, std::nullopt, scope);
  EXPECT_EQ(ParseVolatility(SerializeVolatility(volatility)), volatility);

  std::vector<BinaryStats> stats;
  for (const auto& p : seq.profiles()) stats.push_back(ComputeBinaryStats(p, "p" + p.meta.platform_version));
  stats[0].binary_size_bytes = 92'520'000;
  stats[0].binary_size_centi_mb = BytesToCentiMegabytes(92'520'000);
  EXPECT_EQ(ParseStats(SerializeStats(stats)), stats);
}

TEST(AnalyticsJson, RejectsInconsistentReports) {
  auto seq = ProfileSequence(testing::ArtLikeSequence());
  auto text = SerializeAggregate(AggregateTransitions(seq, std::nullopt));
  auto at = text.find("\"total_impact\": ");
  ASSERT_NE(at, std::string::npos);
  text.insert(at + 16, "1");
  EXPECT_THROW(ParseAggregate(text), Error);
  EXPECT_THROW(ParseTimeline("{}"), Error);
  EXPECT_THROW(ParseVolatility("[1,2]"), Error);
  EXPECT_THROW(ParseImpactMatrix("{\"schema\": 3}"), Error);
}

}  // namespace
}  // namespace structdrift
