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
#include <span>
#include <string>
#include <string_view>

#include "structdrift/error.hpp"

namespace structdrift::internal {

// Bounds-checked cursor over a byte span. Every read past the end throws
// Error(code) carrying the absolute offset (base + position) of the failure.
class ByteReader {
 public:
  ByteReader(std::span<const uint8_t> bytes, bool little_endian, ErrorCode code,
             std::string_view what, uint64_t base = 0)
      : bytes_(bytes), little_endian_(little_endian), code_(code), what_(what), base_(base) {}

  uint64_t position() const { return pos_; }
  uint64_t absolute() const { return base_ + pos_; }
  uint64_t size() const { return bytes_.size(); }
  uint64_t remaining() const { return bytes_.size() - pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }
  bool little_endian() const { return little_endian_; }

  void Seek(uint64_t pos) {
    if (pos > bytes_.size()) Fail("seek beyond end", pos);
    pos_ = pos;
  }
  void Skip(uint64_t count) {
    if (count > remaining()) Fail("truncated data");
    pos_ += count;
  }

  uint8_t U8() {
    Need(1);
    return bytes_[pos_++];
  }
  uint16_t U16() { return static_cast<uint16_t>(Unsigned(2)); }
  uint32_t U32() { return static_cast<uint32_t>(Unsigned(4)); }
  uint64_t U64() { return Unsigned(8); }

  // Reads an unsigned integer of 1..8 bytes in the reader's byte order.
  uint64_t Unsigned(unsigned width) {
    if (width == 0 || width > 8) Fail("unsupported integer width");
    Need(width);
    uint64_t value = 0;
    for (unsigned i = 0; i < width; ++i) {
      uint64_t byte = bytes_[pos_ + i];
      value |= little_endian_ ? byte << (8 * i) : byte << (8 * (width - 1 - i));
    }
    pos_ += width;
    return value;
  }

  uint64_t Uleb() {
    uint64_t start = pos_;
    uint64_t value = 0;
    for (unsigned shift = 0;; shift += 7) {
      uint8_t byte = U8();
      if (shift < 64) value |= static_cast<uint64_t>(byte & 0x7f) << shift;
      if ((byte & 0x80) == 0) break;
      if (shift > 70) Fail("LEB128 value too long", start);
    }
    return value;
  }

  int64_t Sleb() {
    uint64_t start = pos_;
    int64_t value = 0;
    unsigned shift = 0;
    uint8_t byte = 0;
    do {
      byte = U8();
      if (shift < 64) value |= static_cast<int64_t>(static_cast<uint64_t>(byte & 0x7f) << shift);
      shift += 7;
      if (shift > 77) Fail("LEB128 value too long", start);
    } while (byte & 0x80);
    if (shift < 64 && (byte & 0x40)) value |= -(static_cast<int64_t>(1) << shift);
    return value;
  }

  // NUL-terminated string starting at the cursor.
  std::string_view CString() {
    uint64_t start = pos_;
    while (pos_ < bytes_.size() && bytes_[pos_] != 0) ++pos_;
    if (pos_ >= bytes_.size()) Fail("unterminated string", start);
    std::string_view out(reinterpret_cast<const char*>(bytes_.data() + start), pos_ - start);
    ++pos_;
    return out;
  }

  std::span<const uint8_t> Bytes(uint64_t count) {
    if (count > remaining()) Fail("truncated block");
    auto out = bytes_.subspan(pos_, count);
    pos_ += count;
    return out;
  }

  [[noreturn]] void Fail(const std::string& message) const { Fail(message, pos_); }
  [[noreturn]] void Fail(const std::string& message, uint64_t pos) const {
    throw Error(code_, std::string(what_) + ": " + message, base_ + pos);
  }

 private:
  void Need(uint64_t count) const {
    if (count > remaining()) Fail("truncated data");
  }

  std::span<const uint8_t> bytes_;
  bool little_endian_;
  ErrorCode code_;
  std::string_view what_;
  uint64_t base_;
  uint64_t pos_ = 0;
};

// NUL-terminated string at `offset` inside a string section.
inline std::string_view StringAt(std::span<const uint8_t> section, uint64_t offset,
                                 std::string_view what) {
  if (offset >= section.size()) {
    throw Error(ErrorCode::kMalformedDwarf, std::string(what) + ": string offset out of range",
                offset);
  }
  const auto* begin = reinterpret_cast<const char*>(section.data() + offset);
  size_t limit = section.size() - offset;
  size_t len = 0;
  while (len < limit && begin[len] != 0) ++len;
  if (len == limit) {
    throw Error(ErrorCode::kMalformedDwarf, std::string(what) + ": unterminated string", offset);
  }
  return {begin, len};
}

}  // namespace structdrift::internal
