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

#include "dwarf_format.hpp"

#include <cstdio>
#include <string>

namespace structdrift::internal::dwarf {

namespace {

// DW_FORM_* codes.
enum Form : uint64_t {
  kAddr = 0x01,
  kBlock2 = 0x03,
  kBlock4 = 0x04,
  kData2 = 0x05,
  kData4 = 0x06,
  kData8 = 0x07,
  kString = 0x08,
  kBlock = 0x09,
  kBlock1 = 0x0a,
  kData1 = 0x0b,
  kFlag = 0x0c,
  kSdata = 0x0d,
  kStrp = 0x0e,
  kUdata = 0x0f,
  kRefAddr = 0x10,
  kRef1 = 0x11,
  kRef2 = 0x12,
  kRef4 = 0x13,
  kRef8 = 0x14,
  kRefUdata = 0x15,
  kIndirect = 0x16,
  kSecOffset = 0x17,
  kExprloc = 0x18,
  kFlagPresent = 0x19,
  kStrx = 0x1a,
  kAddrx = 0x1b,
  kRefSup4 = 0x1c,
  kStrpSup = 0x1d,
  kData16 = 0x1e,
  kLineStrp = 0x1f,
  kRefSig8 = 0x20,
  kImplicitConst = 0x21,
  kLoclistx = 0x22,
  kRnglistx = 0x23,
  kRefSup8 = 0x24,
  kStrx1 = 0x25,
  kStrx2 = 0x26,
  kStrx3 = 0x27,
  kStrx4 = 0x28,
  kAddrx1 = 0x29,
  kAddrx2 = 0x2a,
  kAddrx3 = 0x2b,
  kAddrx4 = 0x2c,
  kGnuAddrIndex = 0x1f01,
  kGnuStrIndex = 0x1f02,
  kGnuRefAlt = 0x1f20,
  kGnuStrpAlt = 0x1f21,
};

// DW_UT_* codes.
constexpr uint8_t kUtSkeleton = 0x04;
constexpr uint8_t kUtSplitCompile = 0x05;
constexpr uint8_t kUtType = 0x02;
constexpr uint8_t kUtSplitType = 0x06;

constexpr int kMaxIndirection = 4;

FormValue ReadFormImpl(ByteReader& r, uint64_t form, const UnitHeader& unit,
                       int64_t implicit_const, int depth) {
  FormValue v;
  v.form = form;
  auto unsigned_value = [&](uint64_t value) {
    v.kind = ValueKind::kUnsigned;
    v.u = value;
  };
  auto block = [&](uint64_t length) {
    v.kind = ValueKind::kBlock;
    v.block = r.Bytes(length);
  };
  auto unit_ref = [&](uint64_t value) {
    v.kind = ValueKind::kRef;
    v.ref_section = unit.section;
    v.u = unit.offset + value;
  };
  switch (form) {
    case kAddr:
      r.Skip(unit.address_size);
      break;
    case kBlock1:
      block(r.U8());
      break;
    case kBlock2:
      block(r.U16());
      break;
    case kBlock4:
      block(r.U32());
      break;
    case kBlock:
    case kExprloc:
      block(r.Uleb());
      break;
    case kData1:
    case kFlag:
      unsigned_value(r.U8());
      break;
    case kData2:
      unsigned_value(r.U16());
      break;
    case kData4:
      unsigned_value(r.U32());
      break;
    case kData8:
      unsigned_value(r.U64());
      break;
    case kData16:
      r.Skip(16);
      break;
    case kUdata:
      unsigned_value(r.Uleb());
      break;
    case kSdata:
      v.kind = ValueKind::kSigned;
      v.s = r.Sleb();
      break;
    case kImplicitConst:
      v.kind = ValueKind::kSigned;
      v.s = implicit_const;
      break;
    case kFlagPresent:
      unsigned_value(1);
      break;
    case kString:
      v.kind = ValueKind::kString;
      v.str = r.CString();
      break;
    case kStrp:
      v.kind = ValueKind::kStrp;
      v.u = r.Unsigned(unit.offset_size);
      break;
    case kLineStrp:
      v.kind = ValueKind::kLineStrp;
      v.u = r.Unsigned(unit.offset_size);
      break;
    case kStrx:
      v.kind = ValueKind::kStrx;
      v.u = r.Uleb();
      break;
    case kStrx1:
      v.kind = ValueKind::kStrx;
      v.u = r.U8();
      break;
    case kStrx2:
      v.kind = ValueKind::kStrx;
      v.u = r.U16();
      break;
    case kStrx3:
      v.kind = ValueKind::kStrx;
      v.u = r.Unsigned(3);
      break;
    case kStrx4:
      v.kind = ValueKind::kStrx;
      v.u = r.U32();
      break;
    case kStrpSup:
    case kGnuStrpAlt:
    case kGnuRefAlt:
    case kSecOffset:
      r.Skip(unit.offset_size);
      break;
    case kRefAddr:
      v.kind = ValueKind::kRef;
      v.ref_section = SectionId::kInfo;
      v.u = r.Unsigned(unit.version <= 2 ? unit.address_size : unit.offset_size);
      break;
    case kRef1:
      unit_ref(r.U8());
      break;
    case kRef2:
      unit_ref(r.U16());
      break;
    case kRef4:
      unit_ref(r.U32());
      break;
    case kRef8:
      unit_ref(r.U64());
      break;
    case kRefUdata:
      unit_ref(r.Uleb());
      break;
    case kRefSig8:
      v.kind = ValueKind::kRefSig8;
      v.u = r.U64();
      break;
    case kRefSup4:
      r.Skip(4);
      break;
    case kRefSup8:
      r.Skip(8);
      break;
    case kAddrx:
    case kLoclistx:
    case kRnglistx:
    case kGnuAddrIndex:
      r.Uleb();
      break;
    case kGnuStrIndex:
      r.Uleb();  // index into a split-DWARF .dwo string table
      break;
    case kAddrx1:
      r.Skip(1);
      break;
    case kAddrx2:
      r.Skip(2);
      break;
    case kAddrx3:
      r.Skip(3);
      break;
    case kAddrx4:
      r.Skip(4);
      break;
    case kIndirect: {
      if (depth >= kMaxIndirection) r.Fail("DW_FORM_indirect chain too deep");
      uint64_t actual = r.Uleb();
      return ReadFormImpl(r, actual, unit, implicit_const, depth + 1);
    }
    default:
      r.Fail("unknown attribute form 0x" + [&] {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(form));
        return std::string(buf);
      }());
  }
  return v;
}

bool ValidAddressSize(uint8_t size) { return size == 2 || size == 4 || size == 8; }

}  // namespace

DwarfSections DwarfSections::Load(const ElfFile& elf) {
  DwarfSections s;
  s.little_endian = elf.little_endian();
  s.info = elf.Section(".debug_info");
  s.types = elf.Section(".debug_types");
  s.abbrev = elf.Section(".debug_abbrev");
  s.str = elf.Section(".debug_str");
  s.line_str = elf.Section(".debug_line_str");
  s.str_offsets = elf.Section(".debug_str_offsets");
  return s;
}

std::span<const uint8_t> DwarfSections::unit_bytes(SectionId id) const {
  const auto& section = id == SectionId::kInfo ? info : types;
  return section ? section->bytes() : std::span<const uint8_t>{};
}

UnitHeader ReadUnitHeader(ByteReader& r, SectionId section) {
  UnitHeader h;
  h.section = section;
  h.offset = r.position();
  uint64_t length = r.U32();
  if (length == 0xffffffffULL) {
    h.offset_size = 8;
    length = r.U64();
  } else if (length >= 0xfffffff0ULL) {
    r.Fail("reserved unit_length value", h.offset);
  }
  if (length > r.remaining()) r.Fail("unit extends past end of section", h.offset);
  h.end = r.position() + length;
  h.version = r.U16();
  if (h.version < 2 || h.version > 5) {
    r.Fail("unsupported DWARF version " + std::to_string(h.version), h.offset);
  }
  if (h.version == 5) {
    h.unit_type = r.U8();
    h.address_size = r.U8();
    h.abbrev_offset = r.Unsigned(h.offset_size);
    switch (h.unit_type) {
      case kUtSkeleton:
      case kUtSplitCompile:
        r.Skip(8);  // dwo_id
        break;
      case kUtType:
      case kUtSplitType:
        h.type_signature = r.U64();
        h.type_offset = r.Unsigned(h.offset_size);
        break;
      default:
        break;
    }
  } else {
    h.abbrev_offset = r.Unsigned(h.offset_size);
    h.address_size = r.U8();
    if (section == SectionId::kTypes) {
      h.type_signature = r.U64();
      h.type_offset = r.Unsigned(h.offset_size);
    }
  }
  if (!ValidAddressSize(h.address_size)) {
    r.Fail("invalid address size " + std::to_string(h.address_size), h.offset);
  }
  if (r.position() > h.end) r.Fail("unit header longer than unit", h.offset);
  h.first_die = r.position();
  return h;
}

AbbrevTable AbbrevTable::Parse(std::span<const uint8_t> section, uint64_t offset,
                               bool little_endian) {
  ByteReader r(section, little_endian, ErrorCode::kMalformedDwarf, ".debug_abbrev");
  if (offset >= section.size()) r.Fail("abbreviation table offset out of range", offset);
  r.Seek(offset);
  AbbrevTable table;
  while (true) {
    uint64_t code = r.Uleb();
    if (code == 0) break;
    uint64_t entry_start = r.position();
    Abbrev abbrev;
    abbrev.tag = r.Uleb();
    abbrev.has_children = r.U8() != 0;
    while (true) {
      AttrSpec spec;
      spec.attr = r.Uleb();
      spec.form = r.Uleb();
      if (spec.attr == 0 && spec.form == 0) break;
      if (spec.form == kImplicitConst) spec.implicit_const = r.Sleb();
      abbrev.attrs.push_back(spec);
    }
    if (code < 4096) {
      if (table.dense_.size() <= code) table.dense_.resize(code + 1);
      if (table.dense_[code]) r.Fail("duplicate abbreviation code", entry_start);
      table.dense_[code] = std::move(abbrev);
    } else if (!table.sparse_.emplace(code, std::move(abbrev)).second) {
      r.Fail("duplicate abbreviation code", entry_start);
    }
  }
  return table;
}

const Abbrev* AbbrevTable::Find(uint64_t code) const {
  if (code < dense_.size()) return dense_[code] ? &*dense_[code] : nullptr;
  auto it = sparse_.find(code);
  return it == sparse_.end() ? nullptr : &it->second;
}

FormValue ReadForm(ByteReader& reader, uint64_t form, const UnitHeader& unit,
                   int64_t implicit_const) {
  return ReadFormImpl(reader, form, unit, implicit_const, 0);
}

std::optional<std::string_view> ResolveString(const FormValue& value, const DwarfSections& sections,
                                              const UnitHeader& unit, uint64_t str_offsets_base) {
  switch (value.kind) {
    case ValueKind::kString:
      return value.str;
    case ValueKind::kStrp:
      if (!sections.str) return std::nullopt;
      return StringAt(sections.str->bytes(), value.u, ".debug_str");
    case ValueKind::kLineStrp:
      if (!sections.line_str) return std::nullopt;
      return StringAt(sections.line_str->bytes(), value.u, ".debug_line_str");
    case ValueKind::kStrx: {
      if (!sections.str_offsets || !sections.str) return std::nullopt;
      ByteReader r(sections.str_offsets->bytes(), sections.little_endian, ErrorCode::kMalformedDwarf,
                   ".debug_str_offsets");
      uint64_t width = unit.offset_size;
      if (value.u > (r.size() / width)) r.Fail("string index out of range", str_offsets_base);
      uint64_t entry = str_offsets_base + value.u * width;
      if (entry < str_offsets_base || entry > r.size()) r.Fail("string index out of range", entry);
      r.Seek(entry);
      return StringAt(sections.str->bytes(), r.Unsigned(static_cast<unsigned>(width)),
                      ".debug_str");
    }
    default:
      return std::nullopt;
  }
}

std::optional<uint64_t> AsUnsignedConstant(const FormValue& value, uint16_t version) {
  if (value.kind == ValueKind::kSigned) {
    if (value.s < 0) return std::nullopt;
    return static_cast<uint64_t>(value.s);
  }
  if (value.kind != ValueKind::kUnsigned) return std::nullopt;
  if (version <= 3 && (value.form == kData4 || value.form == kData8)) return std::nullopt;
  return value.u;
}

std::optional<int64_t> AsSignedConstant(const FormValue& value, uint16_t version) {
  if (value.kind == ValueKind::kSigned) return value.s;
  if (value.kind != ValueKind::kUnsigned) return std::nullopt;
  if (version <= 3 && (value.form == kData4 || value.form == kData8)) return std::nullopt;
  // Producers emit negative values as sdata, so fixed-size data forms are
  // read as unsigned.
  return static_cast<int64_t>(value.u);
}

}  // namespace structdrift::internal::dwarf
