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

#include "structdrift/error.hpp"

namespace structdrift {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo:
      return "io-error";
    case ErrorCode::kNotElf:
      return "not-an-elf-file";
    case ErrorCode::kMalformedElf:
      return "malformed-elf";
    case ErrorCode::kNoDebugInfo:
      return "no-dwarf-debug-sections-present";
    case ErrorCode::kMalformedDwarf:
      return "malformed-dwarf";
    case ErrorCode::kUnsupportedArchitecture:
      return "unsupported-architecture";
    case ErrorCode::kSchemaViolation:
      return "schema-violation";
    case ErrorCode::kInvariantViolation:
      return "invariant-violation";
    case ErrorCode::kNonCanonical:
      return "non-canonical-profile";
    case ErrorCode::kNameMismatch:
      return "name-mismatch";
    case ErrorCode::kSequenceTooShort:
      return "sequence-too-short";
    case ErrorCode::kInconsistentSequence:
      return "inconsistent-sequence";
    case ErrorCode::kUnsupportedFormat:
      return "unsupported-format-for-report";
    case ErrorCode::kRootMissing:
      return "root-missing";
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
  }
  return "unknown-error";
}

namespace {

std::string Decorate(ErrorCode code, const std::string& message,
                     const std::optional<uint64_t>& offset) {
  std::string out(ToString(code));
  out += ": ";
  out += message;
  if (offset) {
    out += " (at byte offset ";
    out += std::to_string(*offset);
    out += ")";
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<uint64_t> offset)
    : std::runtime_error(Decorate(code, message, offset)),
      code_(code),
      offset_(offset) {}

}  // namespace structdrift
