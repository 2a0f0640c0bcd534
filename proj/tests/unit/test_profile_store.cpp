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

#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "json.hpp"
#include "structdrift/error.hpp"
#include "structdrift/extractor.hpp"
#include "structdrift/profile_store.hpp"

namespace structdrift {
namespace {

using testing::FixturePath;
using testing::TempDir;

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

ErrorCode ParseCode(const std::string& text) {
  try {
    ParseProfile(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;  // sentinel: parsed fine
}

Profile SmallProfile(std::string version = "9", Architecture arch = Architecture::kX86_64) {
  Profile p;
  p.meta.platform_version = std::move(version);
  p.meta.architecture = arch;
  p.meta.dwarf_versions_seen = {4};
  p.meta.raw_type_die_count = 2;
  p.structures["Heap"] = {"Heap", 16, {{"region_space_", 8}}};
  p.structures["Runtime"] = {"Runtime", 32, {{"heap_", 0}, {"thread_list_", 8}}};
  return p;
}

std::vector<std::string> FixtureProfiles() {
  std::vector<std::string> out;
  for (const char* f : {"layouts.x86_64.clang.dwarf5.so", "layouts.i386.clang.dwarf4.so",
                        "layouts.arm32.clang.dwarf5.so", "simple3.x86_64.clang.dwarf5.so",
                        "multi_cu.x86_64.clang.dwarf4.so", "layouts.x86_64.gcc.dwarf2.so"}) {
    out.push_back(SerializeProfile(ExtractProfile(FixturePath(f)).profile));
  }
  return out;
}

TEST(ProfileStore, RoundTripsGeneratedProfiles) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Profile p = i % 2 ? testing::RandomWideProfile(rng) : testing::RandomProfile(rng);
    std::string text = SerializeProfile(p);
    Profile back = ParseProfile(text);
    EXPECT_EQ(back, p) << text;
    EXPECT_EQ(SerializeProfile(back), text);
  }
}

TEST(ProfileStore, CanonicalFilesAreByteStable) {
  for (const auto& text : FixtureProfiles()) {
    EXPECT_EQ(SerializeProfile(ParseProfile(text)), text);
    EXPECT_EQ(text.back(), '\n');
  }
}

TEST(ProfileStore, CheckedInProfilesAreCanonicalAndCurrent) {
  size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(FixturePath("profiles"))) {
    ++seen;
    auto text = testing::ReadAll(entry.path());
    auto profile = ReadProfile(entry.path());
    EXPECT_EQ(SerializeProfile(profile), text) << entry.path();
    std::string stem = entry.path().filename().string();
    stem = stem.substr(0, stem.size() - kProfileSuffix.size());
    ExtractionHints hints;
    if (stem.find("ppc64be") != std::string::npos) hints.architecture = Architecture::kArm64;
    auto fresh = ExtractProfile(FixturePath(stem + ".so"), hints).profile;
    EXPECT_EQ(fresh.structures, profile.structures) << stem;
    EXPECT_EQ(fresh.meta.raw_type_die_count, profile.meta.raw_type_die_count) << stem;
  }
  EXPECT_GE(seen, 10u);
}

TEST(ProfileStore, WriteThenReadThroughFiles) {
  TempDir dir;
  auto path = dir.path() / "p.profile.json";
  Profile p = SmallProfile();
  WriteProfile(p, path);
  EXPECT_EQ(ReadProfile(path), p);
  EXPECT_EQ(testing::ReadAll(path), SerializeProfile(p));
}

TEST(ProfileStore, StructureCountMatchesFixture) {
  TempDir dir;
  auto path = dir.path() / "simple3.profile.json";
  WriteProfile(ExtractProfile(FixturePath("simple3.x86_64.clang.dwarf5.so")).profile, path);
  auto json = nlohmann::json::parse(testing::ReadAll(path));
  EXPECT_EQ(json["structures"].size(), 3u);
  EXPECT_EQ(json["schema"], "structdrift-profile/1");
}

TEST(ProfileStore, RejectsNonCanonicalBeforeWriting) {
  TempDir dir;
  auto path = dir.path() / "bad.profile.json";
  Profile p = SmallProfile();
  std::swap(p.structures["Runtime"].members[0], p.structures["Runtime"].members[1]);
  try {
    WriteProfile(p, path);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonCanonical);
  }
  EXPECT_FALSE(std::filesystem::exists(path));
}

TEST(ProfileStore, WriteFailsWithoutDestinationDirectory) {
  TempDir dir;
  try {
    WriteProfile(SmallProfile(), dir.path() / "missing" / "p.profile.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(ProfileStore, UnreadableFileIsIoError) {
  try {
    ReadProfile(FixturePath("nope.profile.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(ProfileStore, SchemaViolations) {
  const std::string good = SerializeProfile(SmallProfile());
  auto replaced = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return s.replace(at, from.size(), to);
  };
  EXPECT_EQ(ParseCode(replaced("\"Heap\": {", "\"Runtime\": {\"size\": 1, \"members\": []},\n\"Heap\": {")),
            ErrorCode::kSchemaViolation);  // duplicate key (also out of order)
  EXPECT_EQ(ParseCode(replaced("\"size\": 16", "\"size\": \"16\"")), ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(replaced("\"size\": 16", "\"size\": -16")), ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(replaced("\"size\": 16", "\"size\": 16.5")), ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(replaced("\"size\": 16,", "")), ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(replaced("\"size\": 16", "\"size\": 16, \"extra\": 1")),
            ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(replaced("structdrift-profile/1", "structdrift-profile/2")),
            ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(replaced("\"x86_64\"", "\"mips\"")), ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(replaced("\"build_variant\": \"eng\",", "")), ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(good.substr(0, good.size() / 2)), ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode("[]"), ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(""), ErrorCode::kSchemaViolation);
  EXPECT_EQ(ParseCode(good), ErrorCode::kIo);
}

TEST(ProfileStore, DuplicateStructureKeyIsSchemaViolation) {
  std::string text =
      "{\"schema\": \"structdrift-profile/1\", \"meta\": {\"platform_version\": \"9\", "
      "\"architecture\": \"arm64\", \"build_variant\": \"eng\", \"binary_size_bytes\": 1, "
      "\"dwarf_versions_seen\": [4], \"raw_type_die_count\": 1, \"extraction_tool_version\": \"t\"}, "
      "\"structures\": {\"A\": {\"size\": 4, \"members\": []}, \"A\": {\"size\": 4, \"members\": []}}}";
  try {
    ParseProfile(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaViolation);
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos) << e.what();
  }
}

TEST(ProfileStore, InvariantMutationsAreRejected) {
  const std::string good = SerializeProfile(SmallProfile());
  auto mutate = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    auto at = s.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return ParseCode(s.replace(at, from.size(), to));
  };
  // members out of (offset, name) order
  EXPECT_EQ(mutate("\"offset\": 0", "\"offset\": 16"), ErrorCode::kInvariantViolation);
  // offset beyond the structure size
  EXPECT_EQ(mutate("\"offset\": 8", "\"offset\": 99"), ErrorCode::kInvariantViolation);
  // structure keys out of lexicographic order
  EXPECT_EQ(mutate("\"Heap\"", "\"Zeta\""), ErrorCode::kInvariantViolation);
  // DWARF version outside 2..5
  EXPECT_EQ(mutate("[\n      4\n    ]", "[\n      7\n    ]"), ErrorCode::kInvariantViolation);
  EXPECT_EQ(mutate("[\n      4\n    ]", "[\n      4, 4\n    ]"), ErrorCode::kInvariantViolation);
  // empty names
  EXPECT_EQ(mutate("\"region_space_\"", "\"\""), ErrorCode::kInvariantViolation);
  EXPECT_EQ(mutate("\"platform_version\": \"9\"", "\"platform_version\": \"\""),
            ErrorCode::kInvariantViolation);
}

TEST(ProfileStore, FuzzedFilesYieldSchemaErrors) {
  std::mt19937_64 rng(99);
  auto corpus = FixtureProfiles();
  for (int i = 0; i < 3000; ++i) {
    std::string text = corpus[static_cast<size_t>(i) % corpus.size()];
    int mode = i % 4;
    if (mode == 0) {
      text.resize(std::uniform_int_distribution<size_t>(0, text.size() - 1)(rng));
    } else if (mode == 1) {
      int flips = std::uniform_int_distribution<int>(1, 8)(rng);
      for (int f = 0; f < flips; ++f) {
        text[std::uniform_int_distribution<size_t>(0, text.size() - 1)(rng)] =
            static_cast<char>(rng());
      }
    } else if (mode == 2) {
      const char* tokens[] = {"{", "}", "[", "]", ",", ":", "\"", "null", "-1", "1e999", "\\u0000"};
      size_t at = std::uniform_int_distribution<size_t>(0, text.size())(rng);
      text.insert(at, tokens[rng() % std::size(tokens)]);
    } else {
      text.assign(std::uniform_int_distribution<size_t>(0, 256)(rng), '\0');
      for (char& c : text) c = static_cast<char>(rng());
    }
    try {
      ParseProfile(text);
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == ErrorCode::kSchemaViolation ||
                  e.code() == ErrorCode::kInvariantViolation)
          << ToString(e.code()) << ": " << e.what();
    } catch (const std::exception& e) {
      ADD_FAILURE() << "foreign exception: " << e.what();
    }
  }
}

TEST(Repository, EmptyDirectoryGivesEmptyCatalog) {
  TempDir dir;
  auto index = IndexRepository(dir.path());
  EXPECT_TRUE(index.entries.empty());
  EXPECT_TRUE(index.skipped.empty());
}

TEST(Repository, MissingRootIsAnError) {
  TempDir dir;
  try {
    IndexRepository(dir.path() / "absent");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRootMissing);
  }
}

TEST(Repository, IndexesFullGrid) {
  TempDir dir;
  const Architecture archs[] = {Architecture::kArm32, Architecture::kArm64, Architecture::kX86_32,
                                Architecture::kX86_64};
  for (int v = 9; v <= 14; ++v) {
    for (auto arch : archs) {
      auto p = SmallProfile(std::to_string(v), arch);
      WriteText(RepositoryPath(dir.path(), p.meta, "libart"), SerializeProfile(p));
    }
  }
  WriteText(dir.path() / "README.txt", "not a profile");
  WriteText(dir.path() / "9" / "x86_64" / "notes.json", "{}");
  auto index = IndexRepository(dir.path());
  EXPECT_EQ(index.entries.size(), 24u);
  EXPECT_TRUE(index.skipped.empty());
  std::vector<std::string> versions;
  for (const auto& path : index.Sequence(Architecture::kX86_64)) {
    versions.push_back(ReadProfile(path).meta.platform_version);
  }
  EXPECT_EQ(versions, (std::vector<std::string>{"9", "10", "11", "12", "13", "14"}));
  EXPECT_EQ(index.Architectures().size(), 4u);
  EXPECT_EQ(ParseIndex(SerializeIndex(index)), index);
}

TEST(Repository, CorruptAndMisplacedFilesAreSkipped) {
  TempDir dir;
  for (int v = 9; v <= 11; ++v) {
    auto p = SmallProfile(std::to_string(v));
    WriteText(RepositoryPath(dir.path(), p.meta, "libart"), SerializeProfile(p));
  }
  WriteText(dir.path() / "12" / "x86_64" / "libart.profile.json", "{ not json");
  auto index = IndexRepository(dir.path());
  EXPECT_EQ(index.entries.size(), 3u);
  ASSERT_EQ(index.skipped.size(), 1u);
  EXPECT_EQ(index.skipped[0].path.filename(), "libart.profile.json");

  auto misplaced = SmallProfile("13");
  WriteText(dir.path() / "14" / "x86_64" / "libart.profile.json", SerializeProfile(misplaced));
  WriteText(dir.path() / "9" / "x86_64" / "copy.profile.json",
            SerializeProfile(SmallProfile("9")));
  WriteText(dir.path() / "9" / "sparc" / "libart.profile.json", SerializeProfile(SmallProfile("9")));
  index = IndexRepository(dir.path());
  EXPECT_EQ(index.entries.size(), 3u);
  EXPECT_EQ(index.skipped.size(), 4u);
}

TEST(Repository, PathLayout) {
  ProfileMeta meta;
  meta.platform_version = "13";
  meta.architecture = Architecture::kArm64;
  EXPECT_EQ(RepositoryPath("/r", meta, "libart"),
            std::filesystem::path("/r/13/arm64/libart.profile.json"));
  meta.platform_version = "../evil";
  EXPECT_THROW(RepositoryPath("/r", meta, "libart"), Error);
}

}  // namespace
}  // namespace structdrift
