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

#include "structdrift/profile_store.hpp"

#include <algorithm>
#include <set>

#include "json_support.hpp"
#include "structdrift/error.hpp"
#include "structdrift/version.hpp"

namespace structdrift {

using internal::Json;
using internal::JsonView;

namespace {

Json ProfileToJson(const Profile& profile) {
  const auto& m = profile.meta;
  Json meta = Json::object();
  meta["platform_version"] = m.platform_version;
  meta["architecture"] = std::string(ToString(m.architecture));
  meta["build_variant"] = m.build_variant;
  meta["binary_size_bytes"] = m.binary_size_bytes;
  meta["dwarf_versions_seen"] = Json::array();
  for (int v : m.dwarf_versions_seen) meta["dwarf_versions_seen"].push_back(v);
  meta["raw_type_die_count"] = m.raw_type_die_count;
  meta["extraction_tool_version"] = m.extraction_tool_version;

  Json structures = Json::object();
  for (const auto& [name, record] : profile.structures) {
    Json members = Json::array();
    for (const auto& member : record.members) {
      Json entry = Json::object();
      entry["name"] = member.name;
      entry["offset"] = member.offset;
      members.push_back(std::move(entry));
    }
    Json body = Json::object();
    body["size"] = record.byte_size;
    body["members"] = std::move(members);
    structures[name] = std::move(body);
  }

  Json root = Json::object();
  root["schema"] = std::string(kProfileSchema);
  root["meta"] = std::move(meta);
  root["structures"] = std::move(structures);
  return root;
}

ProfileMeta MetaFromJson(const JsonView& view) {
  view.RequireObject({"platform_version", "architecture", "build_variant", "binary_size_bytes",
                      "dwarf_versions_seen", "raw_type_die_count", "extraction_tool_version"});
  ProfileMeta meta;
  meta.platform_version = view["platform_version"].String();
  auto arch_view = view["architecture"];
  auto arch = ParseArchitecture(arch_view.String());
  if (!arch) arch_view.Fail("unknown architecture '" + arch_view.String() + "'");
  meta.architecture = *arch;
  meta.build_variant = view["build_variant"].String();
  meta.binary_size_bytes = view["binary_size_bytes"].Unsigned();
  int previous = 0;
  for (const auto& element : view["dwarf_versions_seen"].Elements()) {
    uint64_t v = element.Unsigned();
    if (v < 2 || v > 5) {
      throw Error(ErrorCode::kInvariantViolation,
                  element.path() + ": DWARF version " + std::to_string(v) + " outside 2..5");
    }
    if (static_cast<int>(v) <= previous) {
      throw Error(ErrorCode::kInvariantViolation,
                  element.path() + ": dwarf_versions_seen must be ascending and unique");
    }
    previous = static_cast<int>(v);
    meta.dwarf_versions_seen.insert(previous);
  }
  meta.raw_type_die_count = view["raw_type_die_count"].Unsigned();
  meta.extraction_tool_version = view["extraction_tool_version"].String();
  return meta;
}

}  // namespace

std::string SerializeProfile(const Profile& profile) {
  auto violations = FindInvariantViolations(profile);
  if (!violations.empty()) {
    throw Error(ErrorCode::kNonCanonical, violations.front());
  }
  return internal::DumpCanonical(ProfileToJson(profile));
}

Profile ParseProfile(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "meta", "structures"});
  if (auto schema = view["schema"].String(); schema != kProfileSchema) {
    view["schema"].Fail("unsupported schema '" + schema + "'");
  }

  Profile profile;
  profile.meta = MetaFromJson(view["meta"]);

  auto structures = view["structures"];
  if (!structures.raw().is_object()) structures.Fail("expected an object");
  const std::string* previous = nullptr;
  for (const auto& item : structures.raw().items()) {
    const std::string& name = item.key();
    if (previous != nullptr && !(*previous < name)) {
      throw Error(ErrorCode::kInvariantViolation,
                  structures.path() + ": structure names not in lexicographic order at '" + name +
                      "'");
    }
    previous = &item.key();
    JsonView body(item.value(), structures.path() + "." + name);
    body.RequireObject({"size", "members"});
    StructureRecord record;
    record.name = name;
    record.byte_size = body["size"].Unsigned();
    for (const auto& member : body["members"].Elements()) {
      member.RequireObject({"name", "offset"});
      record.members.push_back({member["name"].String(), member["offset"].Unsigned()});
    }
    profile.structures.emplace(name, std::move(record));
  }
  Validate(profile);
  return profile;
}

void WriteProfile(const Profile& profile, const std::filesystem::path& destination) {
  auto text = SerializeProfile(profile);
  internal::WriteTextFile(destination, text);
}

Profile ReadProfile(const std::filesystem::path& source) {
  return ParseProfile(internal::ReadTextFile(source), source.string());
}

bool RepositoryKeyLess::operator()(const RepositoryKey& a, const RepositoryKey& b) const {
  if (int c = CompareVersionLabels(a.platform_version, b.platform_version); c != 0) return c < 0;
  return a.architecture < b.architecture;
}

std::vector<std::filesystem::path> RepositoryIndex::Sequence(Architecture arch) const {
  std::vector<std::filesystem::path> out;
  for (const auto& [key, path] : entries) {
    if (key.architecture == arch) out.push_back(path);
  }
  return out;
}

std::vector<Architecture> RepositoryIndex::Architectures() const {
  std::set<Architecture> seen;
  for (const auto& entry : entries) seen.insert(entry.first.architecture);
  return {seen.begin(), seen.end()};
}

RepositoryIndex IndexRepository(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kRootMissing, root.string() + ": repository root is not a directory");
  }
  auto sorted_children = [](const fs::path& dir) {
    std::vector<fs::directory_entry> out;
    std::error_code iter_ec;
    for (const auto& entry : fs::directory_iterator(dir, iter_ec)) out.push_back(entry);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.path().filename() < b.path().filename(); });
    return out;
  };

  RepositoryIndex index;
  for (const auto& version_dir : sorted_children(root)) {
    if (!version_dir.is_directory(ec)) continue;
    std::string version = version_dir.path().filename().string();
    for (const auto& arch_dir : sorted_children(version_dir.path())) {
      if (!arch_dir.is_directory(ec)) continue;
      std::string arch_name = arch_dir.path().filename().string();
      auto arch = ParseArchitecture(arch_name);
      for (const auto& file : sorted_children(arch_dir.path())) {
        std::string filename = file.path().filename().string();
        if (!file.is_regular_file(ec) || !filename.ends_with(kProfileSuffix)) continue;
        if (!arch) {
          index.skipped.push_back({file.path(), "unknown architecture directory '" + arch_name + "'"});
          continue;
        }
        ProfileMeta meta;
        try {
          meta = ReadProfile(file.path()).meta;
        } catch (const Error& e) {
          index.skipped.push_back({file.path(), e.what()});
          continue;
        }
        if (meta.platform_version != version || meta.architecture != *arch) {
          index.skipped.push_back(
              {file.path(), "meta (" + meta.platform_version + ", " +
                                std::string(ToString(meta.architecture)) +
                                ") does not match its directory"});
          continue;
        }
        RepositoryKey key{version, *arch};
        if (index.entries.contains(key)) {
          index.skipped.push_back({file.path(), "duplicate profile for (" + version + ", " +
                                                    arch_name + "); kept " +
                                                    index.entries[key].string()});
          continue;
        }
        index.entries.emplace(std::move(key), file.path());
      }
    }
  }
  return index;
}

std::string SerializeIndex(const RepositoryIndex& index) {
  Json entries = Json::array();
  for (const auto& [key, path] : index.entries) {
    Json entry = Json::object();
    entry["platform_version"] = key.platform_version;
    entry["architecture"] = std::string(ToString(key.architecture));
    entry["path"] = path.string();
    entries.push_back(std::move(entry));
  }
  Json skipped = Json::array();
  for (const auto& s : index.skipped) {
    Json entry = Json::object();
    entry["path"] = s.path.string();
    entry["reason"] = s.reason;
    skipped.push_back(std::move(entry));
  }
  Json root = Json::object();
  root["schema"] = std::string(kIndexSchema);
  root["entries"] = std::move(entries);
  root["skipped"] = std::move(skipped);
  return internal::DumpCanonical(root);
}

RepositoryIndex ParseIndex(std::string_view text, std::string_view source) {
  Json root = internal::ParseStrict(text, source);
  JsonView view(root, std::string(source));
  view.RequireObject({"schema", "entries", "skipped"});
  if (auto schema = view["schema"].String(); schema != kIndexSchema) {
    view["schema"].Fail("unsupported schema '" + schema + "'");
  }
  RepositoryIndex index;
  for (const auto& entry : view["entries"].Elements()) {
    entry.RequireObject({"platform_version", "architecture", "path"});
    auto arch = ParseArchitecture(entry["architecture"].String());
    if (!arch) entry["architecture"].Fail("unknown architecture");
    RepositoryKey key{entry["platform_version"].String(), *arch};
    if (!index.entries.emplace(key, entry["path"].String()).second) entry.Fail("duplicate entry");
  }
  for (const auto& s : view["skipped"].Elements()) {
    s.RequireObject({"path", "reason"});
    index.skipped.push_back({s["path"].String(), s["reason"].String()});
  }
  return index;
}

std::filesystem::path RepositoryPath(const std::filesystem::path& root, const ProfileMeta& meta,
                                     std::string_view binary_stem) {
  if (meta.platform_version.empty() || meta.platform_version == "." ||
      meta.platform_version == ".." ||
      meta.platform_version.find_first_of("/\\") != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "platform_version '" + meta.platform_version + "' is not usable as a directory name");
  }
  return root / meta.platform_version / std::string(ToString(meta.architecture)) /
         (std::string(binary_stem) + std::string(kProfileSuffix));
}

}  // namespace structdrift
