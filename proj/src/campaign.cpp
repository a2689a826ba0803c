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

#include "clusterforge/campaign.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "clusterforge/errors.hpp"

namespace clusterforge {

ExperimentSpec CampaignConfig::find(const std::string& name) const {
  for (const auto& e : experiments) {
    if (e.name == name) return e;
  }
  try {
    return preset(name);
  } catch (const ConfigError&) {
  }
  std::string list;
  for (const auto& n : available()) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown experiment \"" + name + "\"; available: " + list);
}

std::vector<std::string> CampaignConfig::available() const {
  std::vector<std::string> names;
  for (const auto& e : experiments) names.push_back(e.name);
  for (auto& p : preset_names()) {
    if (std::find(names.begin(), names.end(), p) == names.end()) names.push_back(std::move(p));
  }
  return names;
}

CampaignConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  CampaignConfig cfg;
  cfg.version = j.value("version", 0);
  if (cfg.version != kConfigVersion) {
    throw ConfigError("config: unsupported version " + std::to_string(cfg.version) +
                      " (expected " + std::to_string(kConfigVersion) + ")");
  }
  try {
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("report")) {
      const auto& r = j.at("report");
      cfg.report.formats = r.value("formats", cfg.report.formats);
      cfg.report.plateau_tolerance = r.value("plateau_tolerance", cfg.report.plateau_tolerance);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const nlohmann::json defaults = j.value("defaults", nlohmann::json::object());
  std::set<std::string> seen;
  for (const auto& entry : j.value("experiments", nlohmann::json::array())) {
    nlohmann::json merged = defaults;
    merged.merge_patch(entry);
    // A preset supplies the recipes; defaults must not override them.
    if (entry.contains("preset") && !entry.contains("input")) merged.erase("input");
    if (entry.contains("preset") && !entry.contains("target")) merged.erase("target");
    ExperimentSpec spec = spec_from_json(merged);
    if (!seen.insert(spec.name).second) {
      throw ConfigError("config: duplicate experiment name \"" + spec.name + "\"");
    }
    cfg.experiments.push_back(std::move(spec));
  }
  return cfg;
}

CampaignConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

CampaignConfig builtin_config() {
  CampaignConfig cfg;
  for (const auto& name : preset_names()) cfg.experiments.push_back(preset(name));
  return cfg;
}

ExperimentSpec spec_for_record(const RunRecord& record, const CampaignConfig& config) {
  for (const auto& e : config.experiments) {
    if (e.name == record.experiment) return e;
  }
  if (record.input_recipe.empty() || record.input_recipe == "custom") {
    return config.find(record.experiment);
  }
  ExperimentSpec spec;
  spec.name = record.experiment;
  spec.input_recipe = record.input_recipe;
  spec.target_recipe = record.target_recipe;
  spec.vacuum_modes = record.vacuum_modes;
  spec.mode = record.mode;
  spec.validate();
  return spec;
}

std::vector<RunRecord> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  std::vector<RunRecord> records;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    ++line_no;
    if (end == std::string::npos) break;  // unterminated tail: interrupted write
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

namespace {

// Drops an unterminated final line so appends start on a clean boundary.
void trim_partial_tail(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.empty() || text.back() == '\n') return;
  const auto last = text.rfind('\n');
  std::filesystem::resize_file(path, last == std::string::npos ? 0 : last + 1);
}

}  // namespace

CampaignOutcome run_campaign(const ExperimentSpec& spec, const std::filesystem::path& jsonl,
                             int threads, std::ostream* progress,
                             const std::optional<WarmStart>& warm_start) {
  spec.validate();
  CampaignOutcome outcome;
  MultiStartOptions options;
  options.threads = threads;
  options.warm_start = warm_start;
  std::vector<RunRecord> previous;
  if (std::filesystem::exists(jsonl)) {
    trim_partial_tail(jsonl);
    for (auto& r : read_jsonl(jsonl)) {
      if (r.experiment != spec.name) {
        throw ConfigError(jsonl.string() + " holds records of experiment \"" + r.experiment +
                          "\", not \"" + spec.name + "\"");
      }
      if (r.cycle < spec.cycles && options.skip.insert(r.cycle).second) {
        previous.push_back(std::move(r));
      }
    }
  }
  outcome.resumed = static_cast<int>(previous.size());
  if (jsonl.has_parent_path()) std::filesystem::create_directories(jsonl.parent_path());

  std::ofstream out(jsonl, std::ios::binary | std::ios::app);
  if (!out) throw ConfigError("cannot write " + jsonl.string());
  options.on_record = [&](const RunRecord& r) {
    out << record_to_json(r).dump() << '\n';
    out.flush();
    if (progress) {
      *progress << spec.name << " cycle " << r.cycle << ": s=" << r.success
                << " 1-f=" << 1.0 - r.fidelity << (r.converged ? "" : " (not converged)")
                << " [" << r.wall_seconds << " s]\n";
    }
  };
  auto fresh = multi_start(spec, options);
  outcome.ran = static_cast<int>(fresh.size());
  outcome.records = std::move(previous);
  for (auto& r : fresh) outcome.records.push_back(std::move(r));
  sort_records(outcome.records);
  return outcome;
}

}  // namespace clusterforge
