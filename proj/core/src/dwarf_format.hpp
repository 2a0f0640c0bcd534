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
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "byte_reader.hpp"
#include "structdrift/elf_file.hpp"

// Low-level DWARF 2-5 decoding: unit headers, abbreviation tables and
// attribute forms. Only what the structure extractor needs is interpreted;
// every other form is decoded just far enough to be skipped.
namespace structdrift::internal::dwarf {

inline constexpr uint64_t kTagClassType = 0x02;
inline constexpr uint64_t kTagMember = 0x0d;
inline constexpr uint64_t kTagStructureType = 0x13;

inline constexpr uint64_t kAtName = 0x03;
inline constexpr uint64_t kAtByteSize = 0x0b;
inline constexpr uint64_t kAtBitOffset = 0x0c;
inline constexpr uint64_t kAtBitSize = 0x0d;
inline constexpr uint64_t kAtDataMemberLocation = 0x38;
inline constexpr uint64_t kAtDeclaration = 0x3c;
inline constexpr uint64_t kAtSpecification = 0x47;
inline constexpr uint64_t kAtDataBitOffset = 0x6b;
inline constexpr uint64_t kAtStrOffsetsBase = 0x72;

inline constexpr uint8_t kOpConstu = 0x10;
inline constexpr uint8_t kOpPlus = 0x22;
inline constexpr uint8_t kOpPlusUconst = 0x23;

enum class SectionId { kInfo, kTypes };

struct DwarfSections {
  std::optional<SectionBytes> info;
  std::optional<SectionBytes> types;  // DWARF 4 .debug_types
  std::optional<SectionBytes> abbrev;
  std::optional<SectionBytes> str;
  std::optional<SectionBytes> line_str;
  std::optional<SectionBytes> str_offsets;
  bool little_endian = true;

  static DwarfSections Load(const ElfFile& elf);
  bool has_units() const { return info.has_value() || types.has_value(); }
  std::span<const uint8_t> unit_bytes(SectionId id) const;
  static std::string_view Name(SectionId id) {
    return id == SectionId::kInfo ? ".debug_info" : ".debug_types";
  }
};

struct UnitHeader {
  SectionId section = SectionId::kInfo;
  uint64_t offset = 0;     // first byte of the unit_length field
  uint64_t end = 0;        // one past the last byte of the unit
  uint64_t first_die = 0;  // section offset of the unit DIE
  uint16_t version = 0;
  uint8_t unit_type = 0;
  uint8_t address_size = 0;
  uint8_t offset_size = 4;
  uint64_t abbrev_offset = 0;
  std::optional<uint64_t> type_signature;
  uint64_t type_offset = 0;  // unit relative
};

// Reads the header of the unit starting at the reader's position and leaves
// the reader on the unit's first DIE.
UnitHeader ReadUnitHeader(ByteReader& reader, SectionId section);

struct AttrSpec {
  uint64_t attr = 0;
  uint64_t form = 0;
  int64_t implicit_const = 0;
};

struct Abbrev {
  uint64_t tag = 0;
  bool has_children = false;
  std::vector<AttrSpec> attrs;
};

class AbbrevTable {
 public:
  static AbbrevTable Parse(std::span<const uint8_t> section, uint64_t offset, bool little_endian);
  const Abbrev* Find(uint64_t code) const;

 private:
  std::vector<std::optional<Abbrev>> dense_;
  std::unordered_map<uint64_t, Abbrev> sparse_;
};

enum class ValueKind {
  kUnsigned,  // data1..8, udata, implicit_const, flag
  kSigned,    // sdata
  kBlock,     // block*, exprloc
  kString,    // inline DW_FORM_string
  kStrp,      // offset into .debug_str
  kLineStrp,  // offset into .debug_line_str
  kStrx,      // index into .debug_str_offsets
  kRef,       // section offset (unit refs already rebased)
  kRefSig8,   // type signature
  kOther,     // decoded and ignored
};

struct FormValue {
  ValueKind kind = ValueKind::kOther;
  uint64_t form = 0;
  uint64_t u = 0;
  int64_t s = 0;
  std::span<const uint8_t> block;
  std::string_view str;
  SectionId ref_section = SectionId::kInfo;
};

FormValue ReadForm(ByteReader& reader, uint64_t form, const UnitHeader& unit,
                   int64_t implicit_const);

// Returns the string an attribute names, or nullopt when the form is not a
// string form or its target lives outside this file (supplementary/split).
std::optional<std::string_view> ResolveString(const FormValue& value, const DwarfSections& sections,
                                              const UnitHeader& unit, uint64_t str_offsets_base);

// Constant class value. data4/data8 in DWARF 2/3 are section pointers, not
// constants, and yield nullopt, as do negative sdata values.
std::optional<uint64_t> AsUnsignedConstant(const FormValue& value, uint16_t version);
std::optional<int64_t> AsSignedConstant(const FormValue& value, uint16_t version);

}  // namespace structdrift::internal::dwarf
