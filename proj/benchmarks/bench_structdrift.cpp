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

#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>

#include "structdrift/analytics.hpp"
#include "structdrift/diff.hpp"
#include "structdrift/extractor.hpp"
#include "structdrift/profile_store.hpp"

namespace structdrift {
namespace {

std::filesystem::path Fixture(const char* name) {
  return std::filesystem::path(STRUCTDRIFT_FIXTURE_DIR) / name;
}

// Deterministic profile with `structures` records of `members` fields.
// shift > 0 moves every third member and renames every seventh.
Profile Synthetic(int structures, int members, int shift, std::string version) {
  Profile p;
  p.meta.platform_version = std::move(version);
  for (int s = 0; s < structures; ++s) {
    StructureRecord r;
    r.name = "S" + std::to_string(s);
    r.byte_size = static_cast<uint64_t>(members) * 16 + 16;
    for (int m = 0; m < members; ++m) {
      std::string name = "m" + std::to_string(m);
      if (shift > 0 && m % 7 == 0) name += "_v" + std::to_string(shift);
      uint64_t offset = static_cast<uint64_t>(m) * 16 + (shift > 0 && m % 3 == 0 ? 8 : 0);
      r.members.push_back({name, offset});
    }
    Canonicalize(r);
    p.structures.emplace(r.name, std::move(r));
  }
  return p;
}

void BM_ExtractFixture(benchmark::State& state) {
  auto path = Fixture("layouts.x86_64.clang.dwarf5.so");
  for (auto _ : state) benchmark::DoNotOptimize(ExtractProfile(path));
}
BENCHMARK(BM_ExtractFixture);

void BM_ExtractCompressed(benchmark::State& state) {
  auto path = Fixture("layouts.x86_64.zlib.so");
  for (auto _ : state) benchmark::DoNotOptimize(ExtractProfile(path));
}
BENCHMARK(BM_ExtractCompressed);

void BM_DiffProfiles(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  auto a = Synthetic(n, 64, 0, "1");
  auto b = Synthetic(n, 64, 1, "2");
  for (auto _ : state) benchmark::DoNotOptimize(DiffProfiles(a, b));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_DiffProfiles)->Arg(34)->Arg(1000)->Arg(10000);

void BM_SerializeProfile(benchmark::State& state) {
  auto p = Synthetic(static_cast<int>(state.range(0)), 32, 0, "1");
  for (auto _ : state) benchmark::DoNotOptimize(SerializeProfile(p));
}
BENCHMARK(BM_SerializeProfile)->Arg(100)->Arg(5000);

void BM_ParseProfile(benchmark::State& state) {
  auto text = SerializeProfile(Synthetic(static_cast<int>(state.range(0)), 32, 0, "1"));
  for (auto _ : state) benchmark::DoNotOptimize(ParseProfile(text));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseProfile)->Arg(100)->Arg(5000);

void BM_AggregateSixVersions(benchmark::State& state) {
  std::vector<Profile> profiles;
  for (int v = 0; v < 6; ++v) profiles.push_back(Synthetic(2000, 48, v, std::to_string(9 + v)));
  ProfileSequence seq(std::move(profiles));
  for (auto _ : state) benchmark::DoNotOptimize(AggregateTransitions(seq, std::nullopt));
}
BENCHMARK(BM_AggregateSixVersions);

}  // namespace
}  // namespace structdrift

BENCHMARK_MAIN();
