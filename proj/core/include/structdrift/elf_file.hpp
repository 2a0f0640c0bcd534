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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "structdrift/profile.hpp"

namespace structdrift {

// Contents of one ELF section. Either a view into the file image or, for
// compressed debug sections, an owned decompressed buffer.
class SectionBytes {
 public:
  SectionBytes() = default;
  SectionBytes(std::span<const uint8_t> view, uint64_t file_offset)
      : view_(view), file_offset_(file_offset) {}
  SectionBytes(std::shared_ptr<const std::vector<uint8_t>> owned, uint64_t file_offset)
      : owned_(std::move(owned)), view_(*owned_), file_offset_(file_offset) {}

  std::span<const uint8_t> bytes() const { return view_; }
  uint64_t file_offset() const { return file_offset_; }
  bool compressed() const { return owned_ != nullptr; }

 private:
  std::shared_ptr<const std::vector<uint8_t>> owned_;
  std::span<const uint8_t> view_;
  uint64_t file_offset_ = 0;
};

struct ElfSectionHeader {
  std::string name;
  uint32_t type = 0;
  uint64_t flags = 0;
  uint64_t offset = 0;
  uint64_t size = 0;
};

// Read-only ELF image (32/64-bit, either byte order). Only section headers
// are interpreted; program headers and symbols are not needed here.
class ElfFile {
 public:
  static ElfFile Open(const std::filesystem::path& path);
  static ElfFile FromBytes(std::vector<uint8_t> image, std::string label);

  bool is_64bit() const { return is_64bit_; }
  bool little_endian() const { return little_endian_; }
  uint16_t machine() const { return machine_; }
  uint64_t file_size() const { return image_->size(); }
  const std::string& label() const { return label_; }
  const std::vector<ElfSectionHeader>& sections() const { return sections_; }

  // Architecture implied by e_machine, if it is one of the four profiled ones.
  std::optional<Architecture> architecture() const;

  // Section contents by name. ".debug_x" also finds a GNU ".zdebug_x".
  // Absent and SHT_NOBITS sections yield nullopt. SHF_COMPRESSED (zlib)
  // sections are inflated.
  std::optional<SectionBytes> Section(std::string_view name) const;

 private:
  ElfFile() = default;
  void Parse();

  std::shared_ptr<const std::vector<uint8_t>> image_;
  std::string label_;
  bool is_64bit_ = false;
  bool little_endian_ = true;
  uint16_t machine_ = 0;
  std::vector<ElfSectionHeader> sections_;
};

}  // namespace structdrift
