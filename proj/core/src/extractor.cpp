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

#include "structdrift/extractor.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "dwarf_format.hpp"
#include "structdrift/error.hpp"

namespace structdrift {

using internal::ByteReader;
namespace dw = internal::dwarf;

namespace {

constexpr uint64_t kMaxMemberOffset = uint64_t{1} << 32;
constexpr int kMaxSpecificationHops = 8;

// Replaces bytes that are not well-formed UTF-8 with U+FFFD so that names
// survive a JSON round trip unchanged.
std::string SanitizeUtf8(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  size_t i = 0;
  while (i < in.size()) {
    auto c = static_cast<unsigned char>(in[i]);
    size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xe ? 3 : (c >> 3) == 0x1e ? 4 : 0;
    bool ok = len != 0 && i + len <= in.size();
    for (size_t k = 1; ok && k < len; ++k) {
      ok = (static_cast<unsigned char>(in[i + k]) & 0xc0) == 0x80;
    }
    if (ok && len > 1) {
      uint32_t cp = c & (0xff >> (len + 1));
      for (size_t k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(in[i + k]) & 0x3f);
      static constexpr uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
      ok = cp >= kMin[len] && cp <= 0x10ffff && !(cp >= 0xd800 && cp <= 0xdfff);
    }
    if (c == 0) ok = false;
    if (ok) {
      out.append(in.substr(i, len));
      i += len;
    } else {
      out.append("\xef\xbf\xbd");
      ++i;
    }
  }
  return out;
}

// Attributes of interest on a type or member DIE.
struct DieAttrs {
  std::optional<std::string_view> name;
  std::optional<dw::FormValue> byte_size;
  bool declaration = false;
  std::optional<dw::FormValue> specification;
  std::optional<dw::FormValue> member_location;
  std::optional<dw::FormValue> bit_offset;
  std::optional<dw::FormValue> bit_size;
  std::optional<dw::FormValue> data_bit_offset;
};

enum class LocationStatus { kResolved, kAbsent, kUnresolvable };

struct Location {
  LocationStatus status = LocationStatus::kAbsent;
  uint64_t offset = 0;
};

std::optional<uint64_t> EvaluateLocationExpression(std::span<const uint8_t> expr, bool little_endian) {
  ByteReader r(expr, little_endian, ErrorCode::kMalformedDwarf, "location expression");
  try {
    uint8_t op = r.U8();
    if (op == dw::kOpPlusUconst) {
      uint64_t value = r.Uleb();
      if (r.at_end()) return value;
    } else if (op == dw::kOpConstu) {
      uint64_t value = r.Uleb();
      if (!r.at_end() && r.U8() == dw::kOpPlus && r.at_end()) return value;
    }
  } catch (const Error&) {
    // Truncated expressions are simply unresolvable.
  }
  return std::nullopt;
}

Location ResolveMemberLocation(const DieAttrs& a, uint16_t version, bool little_endian) {
  Location loc;
  if (a.member_location) {
    std::optional<uint64_t> base;
    if (a.member_location->kind == dw::ValueKind::kBlock) {
      base = EvaluateLocationExpression(a.member_location->block, little_endian);
    } else {
      base = dw::AsUnsignedConstant(*a.member_location, version);
    }
    if (!base || *base >= kMaxMemberOffset) return {LocationStatus::kUnresolvable, 0};
    loc = {LocationStatus::kResolved, *base};
    // Pre-DWARF-4 style bitfield: DW_AT_bit_offset counts from the most
    // significant bit of the storage unit at data_member_location.
    if (a.bit_offset) {
      auto bit_offset = dw::AsSignedConstant(*a.bit_offset, version);
      uint64_t bit_size = 0;
      uint64_t storage = 0;
      if (a.bit_size) bit_size = dw::AsUnsignedConstant(*a.bit_size, version).value_or(0);
      if (a.byte_size) storage = dw::AsUnsignedConstant(*a.byte_size, version).value_or(0);
      if (bit_offset && bit_size != 0 && storage != 0 && storage <= 16 && bit_size <= 128) {
        int64_t first_bit = static_cast<int64_t>(*base) * 8;
        if (little_endian) {
          first_bit += static_cast<int64_t>(storage) * 8 - *bit_offset - static_cast<int64_t>(bit_size);
        } else {
          first_bit += *bit_offset;
        }
        if (first_bit >= 0) loc.offset = static_cast<uint64_t>(first_bit) / 8;
      }
    }
    return loc;
  }
  if (a.data_bit_offset) {
    auto bits = dw::AsUnsignedConstant(*a.data_bit_offset, version);
    if (!bits || *bits / 8 >= kMaxMemberOffset) return {LocationStatus::kUnresolvable, 0};
    return {LocationStatus::kResolved, *bits / 8};
  }
  return loc;
}

class TypeWalker {
 public:
  using Sink = std::function<void(RawTypeEntry)>;

  TypeWalker(const dw::DwarfSections& sections, Sink sink)
      : sections_(sections), sink_(std::move(sink)) {}

  void Run() {
    for (auto id : {dw::SectionId::kInfo, dw::SectionId::kTypes}) {
      auto bytes = sections_.unit_bytes(id);
      ByteReader r(bytes, sections_.little_endian, ErrorCode::kMalformedDwarf,
                   dw::DwarfSections::Name(id));
      while (!r.at_end()) {
        auto header = dw::ReadUnitHeader(r, id);
        WalkUnit(header, bytes);
        r.Seek(header.end);
      }
    }
    ResolvePending();
  }

  const std::set<int>& versions() const { return versions_; }
  uint64_t unit_count() const { return unit_count_; }
  uint64_t raw_type_count() const { return raw_type_count_; }
  uint64_t unresolved_members() const { return unresolved_members_; }

 private:
  struct UnitInfo {
    dw::UnitHeader header;
    uint64_t str_offsets_base = 0;
  };

  struct Pending {
    RawTypeEntry entry;
    dw::FormValue specification;
  };

  const dw::AbbrevTable& Abbrevs(uint64_t offset) {
    auto it = abbrev_cache_.find(offset);
    if (it != abbrev_cache_.end()) return it->second;
    if (!sections_.abbrev) {
      throw Error(ErrorCode::kMalformedDwarf, "missing .debug_abbrev section", offset);
    }
    auto table = dw::AbbrevTable::Parse(sections_.abbrev->bytes(), offset, sections_.little_endian);
    return abbrev_cache_.emplace(offset, std::move(table)).first->second;
  }

  static uint64_t DefaultStrOffsetsBase(const dw::UnitHeader& h) {
    // Skip the .debug_str_offsets contribution header when no base is given.
    return h.version >= 5 ? (h.offset_size == 8 ? 16 : 8) : 0;
  }

  // Decodes the attribute list of one DIE. The reader must sit just past the
  // abbreviation code.
  DieAttrs ReadAttrs(ByteReader& r, const dw::Abbrev& abbrev, const UnitInfo& unit, bool wanted,
                     std::optional<uint64_t>* str_offsets_base) {
    DieAttrs a;
    std::optional<dw::FormValue> raw_name;
    for (const auto& spec : abbrev.attrs) {
      auto v = dw::ReadForm(r, spec.form, unit.header, spec.implicit_const);
      if (str_offsets_base && spec.attr == dw::kAtStrOffsetsBase) {
        *str_offsets_base = dw::AsUnsignedConstant(v, 5);
        if (!*str_offsets_base && v.kind == dw::ValueKind::kUnsigned) *str_offsets_base = v.u;
      }
      if (!wanted) continue;
      switch (spec.attr) {
        case dw::kAtName:
          raw_name = v;
          break;
        case dw::kAtByteSize:
          a.byte_size = v;
          break;
        case dw::kAtDeclaration:
          a.declaration = v.kind == dw::ValueKind::kUnsigned && v.u != 0;
          break;
        case dw::kAtSpecification:
          a.specification = v;
          break;
        case dw::kAtDataMemberLocation:
          a.member_location = v;
          break;
        case dw::kAtBitOffset:
          a.bit_offset = v;
          break;
        case dw::kAtBitSize:
          a.bit_size = v;
          break;
        case dw::kAtDataBitOffset:
          a.data_bit_offset = v;
          break;
        default:
          break;
      }
    }
    if (raw_name) {
      a.name = dw::ResolveString(*raw_name, sections_, unit.header, unit.str_offsets_base);
    }
    return a;
  }

  void WalkUnit(const dw::UnitHeader& header, std::span<const uint8_t> section) {
    ++unit_count_;
    versions_.insert(header.version);
    uint64_t origin = unit_count_ - 1;
    const auto& abbrevs = Abbrevs(header.abbrev_offset);

    UnitInfo unit{header, DefaultStrOffsetsBase(header)};
    ByteReader r(section.first(header.end), sections_.little_endian, ErrorCode::kMalformedDwarf,
                 dw::DwarfSections::Name(header.section));
    r.Seek(header.first_die);

    if (header.type_signature) {
      signatures_.emplace(*header.type_signature,
                          std::pair{header.section, header.offset + header.type_offset});
    }

    // One frame per open DIE with children; -1 for non-type parents,
    // otherwise an index into `open`.
    std::vector<int64_t> frames;
    std::vector<RawTypeEntry> open;
    std::vector<std::optional<dw::FormValue>> open_spec;
    bool root = true;

    auto close_type = [&] {
      RawTypeEntry entry = std::move(open.back());
      auto spec = std::move(open_spec.back());
      open.pop_back();
      open_spec.pop_back();
      Emit(std::move(entry), spec);
    };

    while (r.position() < header.end) {
      uint64_t die_offset = r.position();
      uint64_t code = r.Uleb();
      if (code == 0) {
        if (!frames.empty()) {
          if (frames.back() >= 0) close_type();
          frames.pop_back();
        }
        continue;
      }
      const dw::Abbrev* abbrev = abbrevs.Find(code);
      if (abbrev == nullptr) r.Fail("unknown abbreviation code " + std::to_string(code), die_offset);

      bool is_type = abbrev->tag == dw::kTagClassType || abbrev->tag == dw::kTagStructureType;
      bool is_member = abbrev->tag == dw::kTagMember && !frames.empty() && frames.back() >= 0;
      std::optional<uint64_t> base;
      DieAttrs a = ReadAttrs(r, *abbrev, unit, is_type || is_member, root ? &base : nullptr);
      if (root) {
        if (base) unit.str_offsets_base = *base;
        root = false;
      }

      if (is_type) {
        ++raw_type_count_;
        RawTypeEntry entry;
        entry.origin_unit = origin;
        if (a.name) entry.name = SanitizeUtf8(*a.name);
        if (a.byte_size) entry.byte_size = dw::AsUnsignedConstant(*a.byte_size, header.version);
        entry.is_declaration_only = a.declaration || !entry.byte_size;
        std::optional<dw::FormValue> spec;
        if (!a.name && a.specification) spec = a.specification;
        if (abbrev->has_children) {
          frames.push_back(static_cast<int64_t>(open.size()));
          open.push_back(std::move(entry));
          open_spec.push_back(std::move(spec));
        } else {
          Emit(std::move(entry), spec);
        }
        continue;
      }

      if (is_member) {
        Location loc = ResolveMemberLocation(a, header.version, sections_.little_endian);
        if (loc.status == LocationStatus::kResolved) {
          open[static_cast<size_t>(frames.back())].members.push_back(
              {a.name ? SanitizeUtf8(*a.name) : std::string(kUnnamed), loc.offset});
        } else if (loc.status == LocationStatus::kUnresolvable) {
          ++unresolved_members_;
        }
      }
      if (abbrev->has_children) frames.push_back(-1);
    }
    // Units whose trailing null entries were omitted.
    while (!frames.empty()) {
      if (frames.back() >= 0) close_type();
      frames.pop_back();
    }
    units_.push_back(unit);
  }

  void Emit(RawTypeEntry entry, const std::optional<dw::FormValue>& spec) {
    if (spec) {
      pending_.push_back({std::move(entry), *spec});
      return;
    }
    if (entry.name.empty()) entry.name = kUnnamed;
    Finish(std::move(entry));
  }

  void Finish(RawTypeEntry entry) {
    if (entry.byte_size) {
      auto& members = entry.members;
      auto size = *entry.byte_size;
      auto before = members.size();
      std::erase_if(members, [&](const RawMemberEntry& m) { return size != 0 && m.offset > size; });
      unresolved_members_ += before - members.size();
    }
    sink_(std::move(entry));
  }

  // Name of the DIE at a section offset, following further specifications.
  std::optional<std::string> NameAt(dw::SectionId section, uint64_t offset, int hops) {
    if (hops > kMaxSpecificationHops) return std::nullopt;
    const UnitInfo* unit = nullptr;
    for (const auto& u : units_) {
      if (u.header.section == section && offset >= u.header.first_die && offset < u.header.end) {
        unit = &u;
        break;
      }
    }
    if (unit == nullptr) return std::nullopt;
    ByteReader r(sections_.unit_bytes(section).first(unit->header.end), sections_.little_endian,
                 ErrorCode::kMalformedDwarf, dw::DwarfSections::Name(section));
    r.Seek(offset);
    uint64_t code = r.Uleb();
    const dw::Abbrev* abbrev = Abbrevs(unit->header.abbrev_offset).Find(code);
    if (abbrev == nullptr) return std::nullopt;
    DieAttrs a = ReadAttrs(r, *abbrev, *unit, true, nullptr);
    if (a.name) return SanitizeUtf8(*a.name);
    if (a.specification) return NameOf(*a.specification, hops + 1);
    return std::nullopt;
  }

  std::optional<std::string> NameOf(const dw::FormValue& ref, int hops) {
    if (ref.kind == dw::ValueKind::kRef) return NameAt(ref.ref_section, ref.u, hops);
    if (ref.kind == dw::ValueKind::kRefSig8) {
      auto it = signatures_.find(ref.u);
      if (it != signatures_.end()) return NameAt(it->second.first, it->second.second, hops);
    }
    return std::nullopt;
  }

  void ResolvePending() {
    for (auto& p : pending_) {
      auto name = NameOf(p.specification, 0);
      p.entry.name = name ? *name : std::string(kUnnamed);
      if (p.entry.name.empty()) p.entry.name = kUnnamed;
      Finish(std::move(p.entry));
    }
    pending_.clear();
  }

  const dw::DwarfSections& sections_;
  Sink sink_;
  std::unordered_map<uint64_t, dw::AbbrevTable> abbrev_cache_;
  std::unordered_map<uint64_t, std::pair<dw::SectionId, uint64_t>> signatures_;
  std::vector<UnitInfo> units_;
  std::vector<Pending> pending_;
  std::set<int> versions_;
  uint64_t unit_count_ = 0;
  uint64_t raw_type_count_ = 0;
  uint64_t unresolved_members_ = 0;
};

dw::DwarfSections LoadDebugSections(const ElfFile& elf) {
  auto sections = dw::DwarfSections::Load(elf);
  if (!sections.has_units()) {
    throw Error(ErrorCode::kNoDebugInfo, elf.label() + ": no .debug_info section");
  }
  return sections;
}

}  // namespace

void DefinitionMerger::Add(RawTypeEntry entry) {
  if (entry.is_declaration_only || !entry.byte_size) return;
  Layout layout;
  layout.byte_size = *entry.byte_size;
  layout.members.reserve(entry.members.size());
  for (auto& m : entry.members) layout.members.push_back({std::move(m.name), m.offset});
  std::stable_sort(layout.members.begin(), layout.members.end(), CanonicalMemberLess);
  auto& group = groups_[entry.name];
  auto [it, inserted] = group.emplace(std::move(layout), entry.origin_unit);
  if (!inserted) it->second = std::min(it->second, entry.origin_unit);
}

MergeResult DefinitionMerger::Finish() && {
  MergeResult result;
  for (auto& [name, layouts] : groups_) {
    if (layouts.empty()) continue;
    auto best = layouts.begin();
    for (auto it = std::next(layouts.begin()); it != layouts.end(); ++it) {
      auto key = [](const auto& entry) {
        return std::tuple(entry.first.members.size(), entry.first.byte_size,
                          ~entry.second);  // earlier unit ranks higher
      };
      if (key(*it) > key(*best)) best = it;
    }
    if (layouts.size() > 1) result.conflicts.push_back(name);
    StructureRecord record;
    record.name = name;
    record.byte_size = best->first.byte_size;
    record.members = best->first.members;
    result.catalog.emplace(name, std::move(record));
  }
  groups_.clear();
  return result;
}

MergeResult MergeDuplicateDefinitions(std::vector<RawTypeEntry> entries) {
  DefinitionMerger merger;
  for (auto& entry : entries) merger.Add(std::move(entry));
  return std::move(merger).Finish();
}

std::set<int> DetectDwarfVersions(const std::filesystem::path& binary) {
  return DetectDwarfVersions(ElfFile::Open(binary));
}

std::set<int> DetectDwarfVersions(const ElfFile& elf) {
  auto sections = dw::DwarfSections::Load(elf);
  std::set<int> versions;
  for (auto id : {dw::SectionId::kInfo, dw::SectionId::kTypes}) {
    auto bytes = sections.unit_bytes(id);
    ByteReader r(bytes, sections.little_endian, ErrorCode::kMalformedDwarf,
                 dw::DwarfSections::Name(id));
    while (!r.at_end()) {
      auto header = dw::ReadUnitHeader(r, id);
      versions.insert(header.version);
      r.Seek(header.end);
    }
  }
  return versions;
}

std::vector<RawTypeEntry> CollectRawTypes(const ElfFile& elf) {
  auto sections = LoadDebugSections(elf);
  std::vector<RawTypeEntry> out;
  TypeWalker walker(sections, [&](RawTypeEntry e) { out.push_back(std::move(e)); });
  walker.Run();
  return out;
}

Extraction ExtractProfile(const std::filesystem::path& binary, const ExtractionHints& hints) {
  auto extraction = ExtractProfile(ElfFile::Open(binary), hints);
  extraction.meta.binary_path = binary;
  return extraction;
}

Extraction ExtractProfile(const ElfFile& elf, const ExtractionHints& hints) {
  auto arch = hints.architecture ? hints.architecture : elf.architecture();
  if (!arch) {
    throw Error(ErrorCode::kUnsupportedArchitecture,
                elf.label() + ": e_machine " + std::to_string(elf.machine()) +
                    " is not one of arm32/arm64/x86_32/x86_64; pass an architecture hint");
  }
  auto sections = LoadDebugSections(elf);
  DefinitionMerger merger;
  TypeWalker walker(sections, [&](RawTypeEntry e) { merger.Add(std::move(e)); });
  walker.Run();
  MergeResult merged = std::move(merger).Finish();

  Extraction out;
  out.meta.binary_path = elf.label();
  out.meta.binary_size_bytes = elf.file_size();
  out.meta.dwarf_versions_seen = walker.versions();
  out.meta.compilation_unit_count = walker.unit_count();
  out.meta.raw_type_die_count = walker.raw_type_count();
  out.meta.unique_name_count = merged.catalog.size();
  out.meta.unresolved_member_locations = walker.unresolved_members();
  out.meta.merge_conflicts = std::move(merged.conflicts);

  auto& meta = out.profile.meta;
  meta.platform_version = hints.platform_version;
  meta.architecture = *arch;
  meta.build_variant = hints.build_variant;
  meta.binary_size_bytes = elf.file_size();
  meta.dwarf_versions_seen = walker.versions();
  meta.raw_type_die_count = walker.raw_type_count();
  meta.extraction_tool_version = std::string(kToolVersion);
  out.profile.structures = std::move(merged.catalog);
  Validate(out.profile);
  return out;
}

}  // namespace structdrift
