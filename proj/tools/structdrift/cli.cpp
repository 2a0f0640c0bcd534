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

#include "cli.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "structdrift/analytics.hpp"
#include "structdrift/diff.hpp"
#include "structdrift/error.hpp"
#include "structdrift/extractor.hpp"
#include "structdrift/forensic_watch.hpp"
#include "structdrift/profile_store.hpp"
#include "structdrift/render.hpp"

namespace structdrift::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::vector<std::string> inputs;
  std::string out;
  std::string format = "json";
  std::string scope;
  std::string chains = "default";
  std::string arch;
  std::string version;
  std::string variant = "eng";
  std::string repo;
  std::string structure;
  std::string member;
  uint64_t ordinal = 0;
  std::vector<double> weights;
  bool fail_on_break = false;
};

std::string ReadFile(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kIo, path.string() + ": file not found or not a regular file");
  }
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (!in && !in.eof()) throw Error(ErrorCode::kIo, path.string() + ": read failed");
  return buf.str();
}

std::optional<Architecture> ArchOption(const Options& o) {
  if (o.arch.empty()) return std::nullopt;
  return ParseArchitecture(o.arch);
}

// A profile file, or an ELF binary extracted on the fly with the hints.
Profile LoadProfile(const fs::path& path, const Options& o) {
  std::string text = ReadFile(path);
  if (text.size() >= 4 && std::memcmp(text.data(), "\x7f" "ELF", 4) == 0) {
    ExtractionHints hints;
    if (!o.version.empty()) hints.platform_version = o.version;
    hints.architecture = ArchOption(o);
    hints.build_variant = o.variant;
    return ExtractProfile(path, hints).profile;
  }
  return ParseProfile(text, path.string());
}

ReportFormat Format(const Options& o) {
  auto f = ParseReportFormat(o.format);
  if (!f) throw Error(ErrorCode::kInvalidArgument, "unknown format '" + o.format + "'");
  return *f;
}

void Emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.out.empty() || o.out == "-") {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, o.out + ": cannot open for writing");
  file << text;
  if (!file.flush()) throw Error(ErrorCode::kIo, o.out + ": write failed");
}

// nullopt means every structure.
std::optional<WatchlistSpec> LoadScope(const std::string& scope) {
  if (scope == "all") return std::nullopt;
  if (scope == "default") return DefaultWatchlist();
  return ParseWatchlist(ReadFile(scope), scope);
}

std::vector<ChainSpec> LoadChains(const std::string& chains) {
  if (chains == "default") return DefaultChains();
  return ParseChains(ReadFile(chains), chains);
}

std::vector<fs::path> SequencePaths(const Options& o, std::ostream& err) {
  if (!o.inputs.empty()) return {o.inputs.begin(), o.inputs.end()};
  if (o.repo.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no profiles given: pass paths, --repo, or set STRUCTDRIFT_REPO");
  }
  auto index = IndexRepository(o.repo);
  for (const auto& s : index.skipped) {
    err << "warning: skipped " << s.path.string() << ": " << s.reason << "\n";
  }
  auto arch = ArchOption(o);
  if (!arch) {
    auto available = index.Architectures();
    if (available.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  available.empty() ? "repository holds no profiles"
                                    : "repository holds several architectures; pick one with --arch");
    }
    arch = available.front();
  }
  return index.Sequence(*arch);
}

ProfileSequence LoadSequence(const Options& o, std::ostream& err) {
  std::vector<Profile> profiles;
  for (const auto& path : SequencePaths(o, err)) profiles.push_back(LoadProfile(path, o));
  return ProfileSequence(std::move(profiles));
}

std::vector<std::string> AllNames(const ProfileSequence& sequence) {
  std::set<std::string> names;
  for (const auto& p : sequence.profiles()) {
    for (const auto& entry : p.structures) names.insert(entry.first);
  }
  return {names.begin(), names.end()};
}

ImpactWeights Weights(const Options& o) {
  if (o.weights.empty()) return {};
  if (o.weights.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "--weights takes three values: offset churn size");
  }
  ImpactWeights w{o.weights[0], o.weights[1], o.weights[2]};
  w.Check();
  return w;
}

int Dispatch(const std::string& command, const Options& o, std::ostream& out, std::ostream& err) {
  const ReportFormat format = Format(o);

  if (command == "extract") {
    ExtractionHints hints;
    if (!o.version.empty()) hints.platform_version = o.version;
    hints.architecture = ArchOption(o);
    hints.build_variant = o.variant;
    auto extraction = ExtractProfile(o.inputs.front(), hints);
    if (!extraction.meta.merge_conflicts.empty()) {
      err << "note: " << extraction.meta.merge_conflicts.size()
          << " structure names had conflicting definitions\n";
    }
    if (!o.repo.empty()) {
      auto path = RepositoryPath(o.repo, extraction.profile.meta,
                                 fs::path(o.inputs.front()).stem().string());
      fs::create_directories(path.parent_path());
      WriteProfile(extraction.profile, path);
      err << "stored " << path.string() << "\n";
      return kExitOk;
    }
    Emit(RenderReport(extraction.profile, format), o, out);
    return kExitOk;
  }

  if (command == "diff") {
    auto old_profile = LoadProfile(o.inputs[0], o);
    auto new_profile = LoadProfile(o.inputs[1], o);
    auto watchlist = LoadScope(o.scope.empty() ? "all" : o.scope);
    std::optional<std::set<std::string>> scope;
    if (watchlist) scope.emplace(watchlist->structures.begin(), watchlist->structures.end());
    auto report = DiffProfiles(old_profile, new_profile, scope);
    Emit(RenderReport(report, format), o, out);
    return o.fail_on_break && SummarizeDiff(report).total_impact > 0 ? kExitBreaking : kExitOk;
  }

  if (command == "index") {
    fs::path root = o.inputs.empty() ? fs::path(o.repo) : fs::path(o.inputs.front());
    if (root.empty()) throw Error(ErrorCode::kInvalidArgument, "no repository root given");
    Emit(RenderReport(IndexRepository(root), format), o, out);
    return kExitOk;
  }

  if (command == "stats") {
    std::vector<BinaryStats> stats;
    if (!o.inputs.empty()) {
      for (const auto& input : o.inputs) stats.push_back(ComputeBinaryStats(fs::path(input)));
    } else {
      for (const auto& path : SequencePaths(o, err)) stats.push_back(ComputeBinaryStats(path));
    }
    Emit(RenderReport(stats, format), o, out);
    return kExitOk;
  }

  auto sequence = LoadSequence(o, err);

  if (command == "chains") {
    auto report = AssessCapabilities(sequence, LoadChains(o.chains));
    Emit(RenderReport(report, format), o, out);
    return o.fail_on_break && report.AnyBroken() ? kExitBreaking : kExitOk;
  }

  if (command == "timeline") {
    auto report = o.member.empty()
                      ? SizeTimeline(sequence, o.structure)
                      : MemberOffsetTimeline(sequence, o.structure, o.member, o.ordinal);
    Emit(RenderReport(report, format), o, out);
    return kExitOk;
  }

  auto watchlist = LoadScope(o.scope.empty() ? "default" : o.scope);
  ScopeInfo info = watchlist ? watchlist->Scope() : ScopeInfo{};

  if (command == "score") {
    auto names = watchlist ? watchlist->structures : AllNames(sequence);
    Emit(RenderReport(ComputeImpactMatrix(sequence, names, Weights(o), info), format), o, out);
    return kExitOk;
  }
  if (command == "volatility") {
    std::optional<std::vector<std::string>> names;
    if (watchlist) names = watchlist->structures;
    Emit(RenderReport(ComputeVolatility(sequence, names, info), format), o, out);
    return kExitOk;
  }
  if (command == "aggregate") {
    std::optional<std::set<std::string>> scope;
    if (watchlist) scope.emplace(watchlist->structures.begin(), watchlist->structures.end());
    auto report = AggregateTransitions(sequence, scope, info);
    Emit(RenderReport(report, format), o, out);
    return o.fail_on_break && report.total.total_impact > 0 ? kExitBreaking : kExitOk;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown command '" + command + "'");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extract, diff and analyze structure layouts from DWARF debug info.", "structdrift"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  Options o;
  const std::vector<std::string> kArchs{"arm32", "arm64", "x86_32", "x86_64"};
  const std::vector<std::string> kFormats{"json", "csv", "table"};

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out, "Write the report to this file instead of stdout");
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember(kFormats))
        ->capture_default_str();
  };
  auto hints = [&](CLI::App* cmd) {
    cmd->add_option("--arch", o.arch, "Architecture label")->check(CLI::IsMember(kArchs));
    cmd->add_option("--version", o.version, "Platform version label for ELF inputs");
    cmd->add_option("--variant", o.variant, "Build variant label for ELF inputs")
        ->capture_default_str();
  };
  auto sequence = [&](CLI::App* cmd) {
    cmd->add_option("profiles", o.inputs, "Profiles or binaries (default: the repository)");
    cmd->add_option("--repo", o.repo, "Profile repository root")->envname("STRUCTDRIFT_REPO");
    common(cmd);
    hints(cmd);
  };
  auto scope = [&](CLI::App* cmd, const char* fallback) {
    cmd->add_option("--scope", o.scope,
                    std::string("Watchlist: default, all, or a watchlist file (default: ") +
                        fallback + ")");
  };

  auto* extract = app.add_subcommand("extract", "Extract a profile from an ELF binary");
  extract->add_option("binary", o.inputs, "ELF shared library")->required()->expected(1);
  extract->add_option("--repo", o.repo, "Store into this repository instead of printing");
  common(extract);
  hints(extract);

  auto* diff = app.add_subcommand("diff", "Diff two profiles");
  diff->add_option("profiles", o.inputs, "Old and new profile")->required()->expected(2);
  diff->add_flag("--fail-on-break", o.fail_on_break, "Exit 1 if any change was found");
  common(diff);
  hints(diff);
  scope(diff, "all");

  auto* score = app.add_subcommand("score", "Impact scores per structure and transition");
  sequence(score);
  scope(score, "default");
  score->add_option("--weights", o.weights, "Offset, churn and size weights, comma-separated")
      ->delimiter(',')
      ->allow_extra_args(false);

  auto* stats = app.add_subcommand("stats", "Binary size and symbol counts");
  sequence(stats);

  auto* aggregate = app.add_subcommand("aggregate", "Change counts per transition");
  sequence(aggregate);
  scope(aggregate, "default");
  aggregate->add_flag("--fail-on-break", o.fail_on_break, "Exit 1 if any change was found");

  auto* timeline = app.add_subcommand("timeline", "Size or member offset across versions");
  sequence(timeline);
  timeline->add_option("--structure", o.structure, "Structure name")->required();
  timeline->add_option("--member", o.member, "Member name (omit for the structure size)");
  timeline->add_option("--ordinal", o.ordinal, "Which same-named member, counting from 0");

  auto* volatility = app.add_subcommand("volatility", "Share of surviving members that moved");
  sequence(volatility);
  scope(volatility, "default");

  auto* chains = app.add_subcommand("chains", "Forensic chain resolution per version");
  sequence(chains);
  chains->add_option("--chains", o.chains, "default or a chain file")->capture_default_str();
  chains->add_flag("--fail-on-break", o.fail_on_break, "Exit 1 if a capability is broken");

  auto* index = app.add_subcommand("index", "List the profiles in a repository");
  index->add_option("root", o.inputs, "Repository root")->expected(0, 1);
  index->add_option("--repo", o.repo, "Repository root")->envname("STRUCTDRIFT_REPO");
  common(index);

  std::vector<std::string> argv_storage{"structdrift"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return Dispatch(command, o, out, err);
  } catch (const Error& e) {
    err << "structdrift " << command << ": " << e.what() << "\n";
    bool usage = e.code() == ErrorCode::kInvalidArgument || e.code() == ErrorCode::kUnsupportedFormat;
    return usage ? kExitUsage : kExitInput;
  } catch (const std::exception& e) {
    err << "structdrift " << command << ": " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace structdrift::cli
