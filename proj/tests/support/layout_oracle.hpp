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
#include <string>
#include <vector>

#include "structdrift/profile.hpp"

namespace structdrift::testing {

// Records parsed from clang's -fdump-record-layouts output, projected onto
// what the extractor is expected to see: direct fields only, bases skipped,
// nested names unqualified, anonymous records and fields named "UnNamed",
// bitfields at the byte holding their first bit, the vtable pointer as a
// member whose name starts with "_vptr". Unions are dropped.
std::map<std::string, StructureRecord> ParseLayoutDump(const std::string& text);
std::map<std::string, StructureRecord> LoadLayoutDump(const std::filesystem::path& path);

// Renames "_vptr.X" / "_vptr$X" members to "_vptr" and re-canonicalizes, so
// extractor output from either compiler compares against the oracle.
StructureRecord NormalizeVptr(StructureRecord record);

}  // namespace structdrift::testing
