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

#include <string_view>

namespace structdrift {

// Numeric-aware ordering of platform version labels: digit runs compare by
// value, everything else bytewise. "9" < "10" < "12.1" < "14". Runs of equal
// value but different length ("10", "010") order shorter first, so distinct
// labels never compare equal.
int CompareVersionLabels(std::string_view a, std::string_view b);

struct VersionLess {
  bool operator()(std::string_view a, std::string_view b) const {
    return CompareVersionLabels(a, b) < 0;
  }
};

}  // namespace structdrift
