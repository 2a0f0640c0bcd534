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

#include <vector>

#include "structdrift/profile.hpp"

namespace structdrift::testing {

// Six hand-written x86_64 profiles labelled 9..14 that carry the layout
// reference facts for ART (thread_list_/heap_ offsets in Runtime, Thread's
// growth from 2584 to 6768 bytes, Heap.region_space_ 728 -> 840,
// park_state_ 60 -> 44, Object/Class gone from 13, JitCodeCache and
// ProfilingInfo appearing at 10). Everything else is filler. This is not
// the real dataset and only supports unit tests of the analyses.
std::vector<Profile> ArtLikeSequence();

}  // namespace structdrift::testing
