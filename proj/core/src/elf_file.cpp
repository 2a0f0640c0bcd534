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

#include "structdrift/elf_file.hpp"

#include <zlib.h>

#include <fstream>
#include <iterator>

#include "byte_reader.hpp"
#include "structdrift/error.hpp"

namespace structdrift {

namespace {

constexpr uint32_t kShtNobits = 8;
constexpr uint64_t kShfCompressed = 0x800;
constexpr uint32_t kElfCompressZlib = 1;

constexpr uint16_t kEm386 = 3;
constexpr uint16_t kEmArm = 40;
constexpr uint16_t kEmX86_64 = 62;
constexpr uint16_t kEmAarch64 = 183;

// zlib cannot exceed roughly 1032:1, so anything claiming more is corrupt.
constexpr uint64_t kMaxInflateRatio = 1100;

std::vector<uint8_t> Inflate(std::span<const uint8_t> input, uint64_t expected_size,
                             uint64_t file_offset, const std::string& what) {
  if (expected_size > input.size() * kMaxInflateRatio + 4096) {
    throw Error(ErrorCode::kMalformedElf, what + ": implausible decompressed size", file_offset);
  }
  std::vector<uint8_t> out(expected_size);
  z_stream stream{};
  if (inflateInit(&stream) != Z_OK) {
    throw Error(ErrorCode::kMalformedElf, what + ": zlib initialisation failed", file_offset);
  }
  stream.next_in = const_cast<Bytef*>(input.data());
  stream.avail_in = static_cast<uInt>(input.size());
  stream.next_out = out.data();
  stream.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&stream, Z_FINISH);
  uint64_t produced = stream.total_out;
  inflateEnd(&stream);
  if (rc != Z_STREAM_END || produced != expected_size) {
    throw Error(ErrorCode::kMalformedElf, what + ": corrupt compressed section", file_offset);
  }
  return out;
}

struct RawHeader {
  ElfSectionHeader header;
  uint32_t name_offset = 0;
  uint32_t link = 0;
};

}  // namespace

ElfFile ElfFile::Open(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kIo, path.string() + ": file not found or not a regular file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, path.string() + ": cannot open");
  std::vector<uint8_t> image((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, path.string() + ": read failure");
  return FromBytes(std::move(image), path.string());
}

ElfFile ElfFile::FromBytes(std::vector<uint8_t> image, std::string label) {
  ElfFile elf;
  elf.image_ = std::make_shared<const std::vector<uint8_t>>(std::move(image));
  elf.label_ = std::move(label);
  elf.Parse();
  return elf;
}

void ElfFile::Parse() {
  const auto& image = *image_;
  if (image.size() < 16 || image[0] != 0x7f || image[1] != 'E' || image[2] != 'L' ||
      image[3] != 'F') {
    throw Error(ErrorCode::kNotElf, label_ + ": missing ELF magic", 0);
  }
  uint8_t ei_class = image[4];
  uint8_t ei_data = image[5];
  if ((ei_class != 1 && ei_class != 2) || (ei_data != 1 && ei_data != 2)) {
    throw Error(ErrorCode::kNotElf, label_ + ": unknown ELF class or data encoding", 4);
  }
  is_64bit_ = ei_class == 2;
  little_endian_ = ei_data == 1;

  internal::ByteReader r(image, little_endian_, ErrorCode::kMalformedElf, label_);
  r.Seek(18);
  machine_ = r.U16();
  r.Seek(is_64bit_ ? 0x28 : 0x20);
  uint64_t shoff = is_64bit_ ? r.U64() : r.U32();
  r.Seek(is_64bit_ ? 0x3a : 0x2e);
  uint16_t shentsize = r.U16();
  uint64_t shnum = r.U16();
  uint64_t shstrndx = r.U16();
  if (shoff == 0) return;  // no section header table

  uint64_t min_entsize = is_64bit_ ? 64 : 40;
  if (shentsize < min_entsize) r.Fail("section header entry too small", is_64bit_ ? 0x3a : 0x2e);
  if (shoff >= image.size()) r.Fail("section header table outside file", is_64bit_ ? 0x28 : 0x20);

  auto read_header = [&](uint64_t index) {
    if (index >= (image.size() - shoff) / shentsize) r.Fail("section header outside file", shoff);
    r.Seek(shoff + index * shentsize);
    ElfSectionHeader h;
    uint32_t name_offset = r.U32();
    h.type = r.U32();
    if (is_64bit_) {
      h.flags = r.U64();
      r.Skip(8);  // sh_addr
      h.offset = r.U64();
      h.size = r.U64();
    } else {
      h.flags = r.U32();
      r.Skip(4);
      h.offset = r.U32();
      h.size = r.U32();
    }
    uint32_t link = r.U32();
    return RawHeader{std::move(h), name_offset, link};
  };

  // Extended numbering: real counts live in section 0.
  RawHeader first = read_header(0);
  if (shnum == 0) shnum = first.header.size;
  if (shstrndx == 0xffff) shstrndx = first.link;
  if (shnum > (image.size() - shoff) / shentsize) r.Fail("section count exceeds file", shoff);

  std::vector<RawHeader> raw;
  raw.reserve(shnum);
  for (uint64_t i = 0; i < shnum; ++i) raw.push_back(read_header(i));

  std::span<const uint8_t> names;
  if (shstrndx < raw.size()) {
    const auto& strtab = raw[shstrndx].header;
    if (strtab.type != kShtNobits && strtab.offset <= image.size() &&
        strtab.size <= image.size() - strtab.offset) {
      names = std::span<const uint8_t>(image).subspan(strtab.offset, strtab.size);
    }
  }
  sections_.reserve(raw.size());
  for (auto& [h, name_offset, link] : raw) {
    if (name_offset < names.size()) {
      const auto* begin = reinterpret_cast<const char*>(names.data() + name_offset);
      size_t len = 0;
      while (name_offset + len < names.size() && begin[len] != 0) ++len;
      h.name.assign(begin, len);
    }
    sections_.push_back(std::move(h));
  }
}

std::optional<Architecture> ElfFile::architecture() const {
  switch (machine_) {
    case kEm386:
      return Architecture::kX86_32;
    case kEmArm:
      return Architecture::kArm32;
    case kEmX86_64:
      return Architecture::kX86_64;
    case kEmAarch64:
      return Architecture::kArm64;
    default:
      return std::nullopt;
  }
}

std::optional<SectionBytes> ElfFile::Section(std::string_view name) const {
  const ElfSectionHeader* found = nullptr;
  bool gnu_compressed = false;
  std::string zname;
  if (name.starts_with(".debug_")) zname = ".z" + std::string(name.substr(1));
  for (const auto& s : sections_) {
    if (s.name == name) {
      found = &s;
      break;
    }
    if (!zname.empty() && s.name == zname && found == nullptr) {
      found = &s;
      gnu_compressed = true;
    }
  }
  if (found == nullptr || found->type == kShtNobits) return std::nullopt;

  const auto& image = *image_;
  if (found->offset > image.size() || found->size > image.size() - found->offset) {
    throw Error(ErrorCode::kMalformedElf, label_ + ": section " + found->name + " outside file",
                found->offset);
  }
  std::span<const uint8_t> raw = std::span<const uint8_t>(image).subspan(found->offset, found->size);
  std::string what = label_ + ": " + found->name;

  if (found->flags & kShfCompressed) {
    internal::ByteReader r(raw, little_endian_, ErrorCode::kMalformedElf, what, found->offset);
    uint32_t type = r.U32();
    uint64_t size = 0;
    if (is_64bit_) {
      r.Skip(4);
      size = r.U64();
      r.Skip(8);
    } else {
      size = r.U32();
      r.Skip(4);
    }
    if (type != kElfCompressZlib) {
      throw Error(ErrorCode::kMalformedElf, what + ": unsupported compression type " +
                                                std::to_string(type), found->offset);
    }
    auto data = Inflate(raw.subspan(r.position()), size, found->offset, what);
    return SectionBytes(std::make_shared<const std::vector<uint8_t>>(std::move(data)),
                        found->offset);
  }
  if (gnu_compressed) {
    // "ZLIB" followed by a big-endian 64-bit uncompressed size.
    internal::ByteReader r(raw, false, ErrorCode::kMalformedElf, what, found->offset);
    auto magic = r.Bytes(4);
    if (magic[0] != 'Z' || magic[1] != 'L' || magic[2] != 'I' || magic[3] != 'B') {
      return SectionBytes(raw, found->offset);
    }
    uint64_t size = r.U64();
    auto data = Inflate(raw.subspan(12), size, found->offset, what);
    return SectionBytes(std::make_shared<const std::vector<uint8_t>>(std::move(data)),
                        found->offset);
  }
  return SectionBytes(raw, found->offset);
}

}  // namespace structdrift
