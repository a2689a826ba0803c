// Copyright 2026 The ClusterForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clusterforge/experiment.hpp"
#include "clusterforge/optimizer.hpp"

namespace clusterforge {

inline constexpr int kConfigVersion = 1;

struct ReportOptions {
  std::vector<std::string> formats{"csv", "svg", "table"};
  /// s values closer than this belong to the same plateau.
  double plateau_tolerance = 1e-3;
};

/// A campaign file: named experiments plus output and report settings.
///
///   {
///     "version": 1,
///     "output_dir": "runs",
///     "report": {"formats": ["csv", "svg", "table"], "plateau_tolerance": 1e-3},
///     "defaults": { ...experiment fields applied to every entry... },
///     "experiments": [ {"name": "c4-bell", "preset": "c4-bell", "cycles": 50}, ... ]
///   }
///
/// Experiment fields: name, preset, input, target, vacuum_modes, mode,
/// penalty {initial, growth, stages}, gradient_tolerance, fidelity_tolerance,
/// max_iterations, cycles, seed, custom_input.
struct CampaignConfig {
  int version = kConfigVersion;
  std::filesystem::path output_dir = "runs";
  ReportOptions report;
  std::vector<ExperimentSpec> experiments;

  /// Configured experiment by name, falling back to the built-in presets.
  /// Throws ConfigError listing the available names.
  ExperimentSpec find(const std::string& name) const;
  std::vector<std::string> available() const;
};

CampaignConfig config_from_json(const nlohmann::json& j);
CampaignConfig load_config(const std::filesystem::path& path);
/// Every built-in preset, unmodified.
CampaignConfig builtin_config();

/// Spec a stored record was produced under: the configured experiment of that
/// name when `config` has one, else rebuilt from the recipes in the record.
ExperimentSpec spec_for_record(const RunRecord& record, const CampaignConfig& config);

/// Reads RunRecord lines. A truncated final line (crash mid-write) is ignored;
/// any other malformed line throws ConfigError naming the line.
std::vector<RunRecord> read_jsonl(const std::filesystem::path& path);

struct CampaignOutcome {
  std::vector<RunRecord> records;  // sorted, including resumed ones
  int resumed = 0;
  int ran = 0;
};

/// multi_start with records appended to `jsonl` in cycle order as they
/// finish. Cycles already present in the file are kept and skipped.
CampaignOutcome run_campaign(const ExperimentSpec& spec, const std::filesystem::path& jsonl,
                             int threads, std::ostream* progress = nullptr,
                             const std::optional<WarmStart>& warm_start = std::nullopt);

}  // namespace clusterforge
