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
#include <vector>

#include "structdrift/elf_file.hpp"
#include "structdrift/profile.hpp"

namespace structdrift {

struct RawMemberEntry {
  std::string name;  // kUnnamed when the DIE has no name
  uint64_t offset = 0;

  friend bool operator==(const RawMemberEntry&, const RawMemberEntry&) = default;
};

// One class/structure DIE as found in the debug info, before merging.
struct RawTypeEntry {
  std::string name;  // kUnnamed when the DIE has no name
  std::optional<uint64_t> byte_size;
  std::vector<RawMemberEntry> members;
  uint64_t origin_unit = 0;
  bool is_declaration_only = false;
};

struct ExtractionMeta {
  std::filesystem::path binary_path;
  uint64_t binary_size_bytes = 0;
  std::set<int> dwarf_versions_seen;
  uint64_t compilation_unit_count = 0;
  // Every DW_TAG_class_type / DW_TAG_structure_type DIE, declarations included.
  uint64_t raw_type_die_count = 0;
  // Distinct structure names retained in the catalog.
  uint64_t unique_name_count = 0;
  // Members whose data-member-location used an expression other than a
  // constant or DW_OP_plus_uconst (location lists, complex expressions).
  uint64_t unresolved_member_locations = 0;
  std::vector<std::string> merge_conflicts;
};

struct ExtractionHints {
  std::string platform_version = "unknown";
  std::optional<Architecture> architecture;  // defaults to the ELF e_machine
  std::string build_variant = "eng";
};

struct Extraction {
  Profile profile;
  ExtractionMeta meta;
};

struct MergeResult {
  std::map<std::string, StructureRecord> catalog;
  std::vector<std::string> conflicts;  // sorted, each name once
};

// Reconciles repeated definitions of the same name (one per compilation
// unit in large binaries). Identical complete definitions collapse silently.
// Differing ones keep the definition with the most members, then the larger
// byte size, then the earliest unit, and the name is reported as a conflict.
// Declarations never win, and names that are only ever declared are dropped.
//
// DefinitionMerger is the incremental form used while walking the DIEs;
// MergeDuplicateDefinitions is the batch form.
class DefinitionMerger {
 public:
  void Add(RawTypeEntry entry);
  MergeResult Finish() &&;

 private:
  struct Layout {
    uint64_t byte_size = 0;
    std::vector<MemberRecord> members;
    friend auto operator<=>(const Layout&, const Layout&) = default;
  };
  // name -> distinct layout -> earliest origin unit
  std::map<std::string, std::map<Layout, uint64_t>> groups_;
};

MergeResult MergeDuplicateDefinitions(std::vector<RawTypeEntry> entries);

// DWARF versions declared by the unit headers of .debug_info/.debug_types.
// Empty iff the binary has no debug info.
std::set<int> DetectDwarfVersions(const std::filesystem::path& binary);
std::set<int> DetectDwarfVersions(const ElfFile& elf);

// Walks every unit and collects one Profile of all class/structure layouts.
// Throws Error with kIo, kNotElf, kMalformedElf, kNoDebugInfo,
// kMalformedDwarf (with the section offset of the failure) or
// kUnsupportedArchitecture (unknown e_machine and no architecture hint).
Extraction ExtractProfile(const std::filesystem::path& binary, const ExtractionHints& hints = {});
Extraction ExtractProfile(const ElfFile& elf, const ExtractionHints& hints = {});

// Raw DIE-level view used by ExtractProfile, exposed for inspection tools.
std::vector<RawTypeEntry> CollectRawTypes(const ElfFile& elf);

}  // namespace structdrift
