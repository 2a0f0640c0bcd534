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

#include "structdrift/render.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "structdrift/error.hpp"

namespace structdrift {

namespace {

std::string Fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string CsvLine(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) out += ',';
    out += CsvField(fields[i]);
  }
  return out + "\n";
}

// Fixed-width columns separated by two spaces; numeric-looking cells are
// right-aligned.
class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void Add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string Render() const {
    std::vector<size_t> width(header_.size(), 0);
    auto measure = [&](const std::vector<std::string>& row) {
      for (size_t i = 0; i < row.size() && i < width.size(); ++i) {
        width[i] = std::max(width[i], row[i].size());
      }
    };
    measure(header_);
    for (const auto& row : rows_) measure(row);

    std::string out;
    auto emit = [&](const std::vector<std::string>& row) {
      std::string line;
      for (size_t i = 0; i < width.size(); ++i) {
        std::string cell = i < row.size() ? row[i] : "";
        std::string pad(width[i] - cell.size(), ' ');
        if (i != 0) line += "  ";
        line += (i != 0 && IsNumeric(cell)) ? pad + cell : cell + pad;
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out += line + "\n";
    };
    emit(header_);
    std::string rule;
    for (size_t i = 0; i < width.size(); ++i) {
      if (i != 0) rule += "  ";
      rule += std::string(width[i], '-');
    }
    out += rule + "\n";
    for (const auto& row : rows_) emit(row);
    return out;
  }

 private:
  static bool IsNumeric(const std::string& cell) {
    return !cell.empty() && cell.find_first_not_of("0123456789.-%") == std::string::npos;
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

[[noreturn]] void Unsupported(std::string_view report, ReportFormat format) {
  throw Error(ErrorCode::kUnsupportedFormat,
              std::string(ToString(format)) + " is not available for " + std::string(report));
}

std::string Marked(const std::string& name, const ScopeInfo& scope) {
  bool extra = std::find(scope.supplementary.begin(), scope.supplementary.end(), name) !=
               scope.supplementary.end();
  return extra ? name + "*" : name;
}

std::string ScopeLine(const ScopeInfo& scope) {
  std::string out = "scope: " + scope.name + "\n";
  if (!scope.supplementary.empty()) {
    out += "* supplementary entry, not part of the reference watchlist\n";
  }
  return out;
}

std::string Join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += sep;
    out += items[i];
  }
  return out;
}

std::string Versions(const std::set<int>& versions) {
  std::vector<std::string> parts;
  for (int v : versions) parts.push_back(std::to_string(v));
  return Join(parts, ",");
}

std::string CountsCell(uint64_t v) { return std::to_string(v); }

std::vector<std::string> CountsRow(std::string label, const ChangeCounts& c) {
  return {std::move(label),
          CountsCell(c.offset_changes),
          CountsCell(c.member_additions),
          CountsCell(c.member_removals),
          CountsCell(c.structure_removals),
          CountsCell(c.total_impact)};
}

}  // namespace

std::string_view ToString(ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return "json";
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kTable: return "table";
  }
  return "unknown";
}

std::optional<ReportFormat> ParseReportFormat(std::string_view text) {
  for (auto f : {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kTable}) {
    if (ToString(f) == text) return f;
  }
  return std::nullopt;
}

std::string RenderReport(const Profile& profile, ReportFormat format) {
  if (format == ReportFormat::kJson) return SerializeProfile(profile);
  if (format == ReportFormat::kCsv) Unsupported("profiles", format);
  const auto& m = profile.meta;
  std::string out = "platform_version: " + m.platform_version +
                    "\narchitecture: " + std::string(ToString(m.architecture)) +
                    "\nbuild_variant: " + m.build_variant +
                    "\nbinary_size_bytes: " + std::to_string(m.binary_size_bytes) +
                    "\ndwarf_versions_seen: " + Versions(m.dwarf_versions_seen) +
                    "\nraw_type_die_count: " + std::to_string(m.raw_type_die_count) +
                    "\nstructures: " + std::to_string(profile.structures.size()) + "\n";
  for (const auto& [name, record] : profile.structures) {
    out += "\n" + name + " (size " + std::to_string(record.byte_size) + ")\n";
    for (const auto& member : record.members) {
      out += "  " + std::to_string(member.offset) + "  " + member.name + "\n";
    }
  }
  return out;
}

std::string RenderReport(const DiffReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return SerializeDiff(report);
  if (format == ReportFormat::kCsv) Unsupported("diff reports", format);
  std::string out = "diff " + report.from_label + " -> " + report.to_label + "\n";
  for (const auto& name : report.added_structures) out += "+ " + name + "\n";
  for (const auto& name : report.removed_structures) out += "- " + name + "\n";
  for (const auto& d : report.modified) {
    out += "~ " + d.name + " (size " + std::to_string(d.old_size) + " -> " +
           std::to_string(d.new_size) + ")\n";
    for (const auto& m : d.member_additions) {
      out += "    + " + m.name + " @" + std::to_string(m.offset) + "\n";
    }
    for (const auto& m : d.member_removals) {
      out += "    - " + m.name + " @" + std::to_string(m.offset) + "\n";
    }
    for (const auto& c : d.offset_changes) {
      out += "    ~ " + c.member_name + " @" + std::to_string(c.old_offset) + " -> @" +
             std::to_string(c.new_offset) + "\n";
    }
  }
  auto counts = SummarizeDiff(report);
  out += "added " + std::to_string(report.added_structures.size()) + ", removed " +
         std::to_string(report.removed_structures.size()) + ", modified " +
         std::to_string(report.modified.size()) + ", unchanged " +
         std::to_string(report.unchanged_count) + "; total impact " +
         std::to_string(counts.total_impact) + "\n";
  return out;
}

std::string RenderReport(const ImpactMatrix& matrix, ReportFormat format) {
  if (format == ReportFormat::kJson) return SerializeImpactMatrix(matrix);
  std::vector<std::string> header{"structure"};
  for (const auto& t : matrix.transitions) header.push_back(t.Label());
  std::vector<std::vector<std::string>> rows;
  for (size_t s = 0; s < matrix.structures.size(); ++s) {
    std::vector<std::string> row{format == ReportFormat::kTable
                                     ? Marked(matrix.structures[s], matrix.scope)
                                     : matrix.structures[s]};
    for (const auto& cell : matrix.cells[s]) {
      row.push_back(cell ? Fixed(cell->score, 3) : (format == ReportFormat::kTable ? "-" : ""));
    }
    rows.push_back(std::move(row));
  }
  if (format == ReportFormat::kCsv) {
    std::string out = CsvLine(header);
    for (const auto& row : rows) out += CsvLine(row);
    return out;
  }
  TextTable table(header);
  for (auto& row : rows) table.Add(std::move(row));
  return ScopeLine(matrix.scope) + table.Render();
}

std::string RenderReport(const AggregateReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return SerializeAggregate(report);
  std::vector<std::vector<std::string>> rows;
  for (const auto& row : report.rows) rows.push_back(CountsRow(row.transition.Label(), row.counts));
  rows.push_back(CountsRow("Total", report.total));
  if (format == ReportFormat::kCsv) {
    std::string out = CsvLine({"transition", "offset_changes", "member_additions",
                               "member_removals", "structure_removals", "total_impact"});
    for (const auto& row : rows) out += CsvLine(row);
    return out;
  }
  TextTable table({"Transition", "Offset changes", "Member additions", "Member removals",
                   "Structure removals", "Total impact"});
  for (auto& row : rows) table.Add(std::move(row));
  return ScopeLine(report.scope) + table.Render();
}

std::string RenderReport(const TimelineReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return SerializeTimeline(report);
  std::string subject = report.structure + (report.member ? "." + *report.member : "");
  std::string what = report.member ? "offset" : "size";
  if (format == ReportFormat::kCsv) {
    std::string out = CsvLine({"version", subject});
    for (const auto& p : report.points) {
      out += CsvLine({p.version, p.value ? std::to_string(*p.value) : ""});
    }
    return out;
  }
  TextTable table({"version", what});
  for (const auto& p : report.points) {
    table.Add({p.version, p.value ? std::to_string(*p.value) : "absent"});
  }
  return subject + "\n" + table.Render();
}

std::string RenderReport(const VolatilityStats& stats, ReportFormat format) {
  if (format == ReportFormat::kJson) return SerializeVolatility(stats);
  if (format == ReportFormat::kCsv) Unsupported("volatility reports", format);
  TextTable table({"structure", "surviving", "moved", "rate"});
  for (const auto& [name, v] : stats.per_structure) {
    table.Add({Marked(name, stats.scope), std::to_string(v.surviving_members),
               std::to_string(v.members_with_offset_change), Fixed(v.rate * 100, 1) + "%"});
  }
  table.Add({"overall", std::to_string(stats.surviving_members),
             std::to_string(stats.members_with_offset_change),
             Fixed(stats.overall_rate * 100, 1) + "%"});
  return ScopeLine(stats.scope) + table.Render();
}

std::string RenderReport(const std::vector<BinaryStats>& stats, ReportFormat format) {
  if (format == ReportFormat::kJson) return SerializeStats(stats);
  if (format == ReportFormat::kCsv) Unsupported("binary statistics", format);
  TextTable table(
      {"source", "version", "arch", "size (MB)", "symbols", "unique names", "DWARF"});
  for (const auto& s : stats) {
    table.Add({s.source, s.platform_version, s.architecture, Fixed(s.binary_size_mb(), 2),
               std::to_string(s.symbol_count), std::to_string(s.unique_name_count),
               Versions(s.dwarf_versions)});
  }
  return table.Render();
}

std::string RenderReport(const CapabilityReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) return SerializeCapabilityReport(report);
  if (format == ReportFormat::kCsv) Unsupported("capability reports", format);
  std::vector<std::string> header{"capability"};
  header.insert(header.end(), report.versions.begin(), report.versions.end());
  TextTable table(header);
  for (const auto& [capability, cells] : report.table) {
    std::vector<std::string> row{std::string(ToString(capability))};
    for (const auto& cell : cells) row.push_back(cell.resolved ? "ok" : "BROKEN");
    table.Add(std::move(row));
  }
  std::string out = table.Render();
  if (!report.annotations.empty()) {
    // Group by transition; within one, keep the report's capability order.
    std::vector<const CapabilityAnnotation*> sorted;
    for (const auto& a : report.annotations) sorted.push_back(&a);
    auto position = [&](const Transition& t) {
      return std::find(report.versions.begin(), report.versions.end(), t.to) - report.versions.begin();
    };
    std::stable_sort(sorted.begin(), sorted.end(), [&](const auto* x, const auto* y) {
      return position(x->transition) < position(y->transition);
    });
    TextTable notes({"transition", "capability", "change", "chain"});
    for (const auto* a : sorted) {
      notes.Add({a->transition.Label(), std::string(ToString(a->capability)),
                 std::string(ToString(a->kind)), a->chain_id.value_or("")});
    }
    out += "\n" + notes.Render();
  }
  TextTable failures({"version", "chain", "step", "reason"});
  bool any_failure = false;
  for (const auto& r : report.chains) {
    if (r.resolved() || r.first_failure->reason == FailureReason::kChainNotApplicable) continue;
    any_failure = true;
    failures.Add({r.version, r.chain_id, std::to_string(r.first_failure->step_index),
                  std::string(ToString(r.first_failure->reason))});
  }
  if (any_failure) out += "\n" + failures.Render();
  return out;
}

std::string RenderReport(const RepositoryIndex& index, ReportFormat format) {
  if (format == ReportFormat::kJson) return SerializeIndex(index);
  if (format == ReportFormat::kCsv) Unsupported("repository indexes", format);
  TextTable table({"version", "arch", "path"});
  for (const auto& [key, path] : index.entries) {
    table.Add({key.platform_version, std::string(ToString(key.architecture)), path.string()});
  }
  std::string out = table.Render();
  for (const auto& s : index.skipped) out += "skipped " + s.path.string() + ": " + s.reason + "\n";
  return out;
}

}  // namespace structdrift
