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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "structdrift/profile.hpp"

namespace structdrift {

inline constexpr std::string_view kProfileSchema = "structdrift-profile/1";
inline constexpr std::string_view kProfileSuffix = ".profile.json";
inline constexpr std::string_view kIndexSchema = "structdrift-index/1";

// Canonical text of a profile. Throws Error(kNonCanonical) if the profile
// breaks an invariant (unsorted members, key/name mismatch, ...).
std::string SerializeProfile(const Profile& profile);

// Strict inverse of SerializeProfile. Malformed JSON, missing or unknown
// fields, wrong types and duplicate keys raise kSchemaViolation; structural
// invariant violations (unsorted catalog or members, offsets beyond the
// structure) raise kInvariantViolation.
Profile ParseProfile(std::string_view text, std::string_view source = "profile");

void WriteProfile(const Profile& profile, const std::filesystem::path& destination);
Profile ReadProfile(const std::filesystem::path& source);

struct RepositoryKey {
  std::string platform_version;
  Architecture architecture = Architecture::kX86_64;

  friend bool operator==(const RepositoryKey&, const RepositoryKey&) = default;
};

// Version-aware ("9" < "10"), then architecture.
struct RepositoryKeyLess {
  bool operator()(const RepositoryKey& a, const RepositoryKey& b) const;
};

struct SkippedEntry {
  std::filesystem::path path;
  std::string reason;

  friend bool operator==(const SkippedEntry&, const SkippedEntry&) = default;
};

struct RepositoryIndex {
  std::map<RepositoryKey, std::filesystem::path, RepositoryKeyLess> entries;
  std::vector<SkippedEntry> skipped;

  // Paths for one architecture in ascending version order.
  std::vector<std::filesystem::path> Sequence(Architecture arch) const;
  std::vector<Architecture> Architectures() const;

  friend bool operator==(const RepositoryIndex&, const RepositoryIndex&) = default;
};

// Scans <root>/<platform_version>/<architecture>/<stem>.profile.json.
// Files that fail to load, whose meta disagrees with their directory, or
// that duplicate an earlier (version, architecture) are reported in
// `skipped`. Throws Error(kRootMissing) if root is not a directory.
RepositoryIndex IndexRepository(const std::filesystem::path& root);

std::string SerializeIndex(const RepositoryIndex& index);
RepositoryIndex ParseIndex(std::string_view text, std::string_view source = "index");

// Where a profile belongs inside a repository.
std::filesystem::path RepositoryPath(const std::filesystem::path& root, const ProfileMeta& meta,
                                     std::string_view binary_stem);

}  // namespace structdrift
