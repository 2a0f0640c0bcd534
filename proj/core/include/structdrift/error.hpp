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
#include <stdexcept>
#include <string>
#include <string_view>

namespace structdrift {

enum class ErrorCode {
  kIo,
  kNotElf,
  kMalformedElf,
  kNoDebugInfo,
  kMalformedDwarf,
  kUnsupportedArchitecture,
  kSchemaViolation,
  kInvariantViolation,
  kNonCanonical,
  kNameMismatch,
  kSequenceTooShort,
  kInconsistentSequence,
  kUnsupportedFormat,
  kRootMissing,
  kInvalidArgument,
};

std::string_view ToString(ErrorCode code);

// Every failure raised by the library. `offset()` is set for parse failures
// and holds the byte offset (file or section relative, see the message) at
// which decoding stopped.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<uint64_t> offset = std::nullopt);

  ErrorCode code() const { return code_; }
  const std::optional<uint64_t>& offset() const { return offset_; }

 private:
  ErrorCode code_;
  std::optional<uint64_t> offset_;
};

}  // namespace structdrift
