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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "structdrift/analytics.hpp"
#include "structdrift/diff.hpp"
#include "structdrift/forensic_watch.hpp"
#include "structdrift/profile.hpp"
#include "structdrift/profile_store.hpp"

namespace structdrift {

enum class ReportFormat { kJson, kCsv, kTable };

std::string_view ToString(ReportFormat format);
std::optional<ReportFormat> ParseReportFormat(std::string_view text);

// json is each report's canonical schema. csv is available for impact
// matrices, aggregates and timelines only (three fraction digits, absent
// cells empty); other combinations throw Error(kUnsupportedFormat). table is
// a fixed-width rendering of the same values.
std::string RenderReport(const Profile& profile, ReportFormat format);
std::string RenderReport(const DiffReport& report, ReportFormat format);
std::string RenderReport(const ImpactMatrix& matrix, ReportFormat format);
std::string RenderReport(const AggregateReport& report, ReportFormat format);
std::string RenderReport(const TimelineReport& report, ReportFormat format);
std::string RenderReport(const VolatilityStats& stats, ReportFormat format);
std::string RenderReport(const std::vector<BinaryStats>& stats, ReportFormat format);
std::string RenderReport(const CapabilityReport& report, ReportFormat format);
std::string RenderReport(const RepositoryIndex& index, ReportFormat format);

}  // namespace structdrift
