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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clusterforge/campaign.hpp"
#include "clusterforge/chain.hpp"
#include "clusterforge/errors.hpp"
#include "clusterforge/interferometer.hpp"
#include "clusterforge/objectives.hpp"
#include "clusterforge/optimizer.hpp"
#include "clusterforge/oracle.hpp"
#include "clusterforge/report.hpp"

namespace fs = std::filesystem;
using namespace clusterforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

CampaignConfig config_or_builtin(const std::string& path) {
  return path.empty() ? builtin_config() : load_config(path);
}

// A whole JSON document, or the first line of a JSONL file.
nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (!j.is_discarded()) return j;
  try {
    return nlohmann::json::parse(text.substr(0, text.find('\n')));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ComplexMatrix square(ComplexMatrix u) {
  if (u.rows() != u.cols()) {
    throw DimensionError("matrix is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                         ", expected square");
  }
  return u;
}

struct LoadedRecord {
  RunRecord record;
  ExperimentSpec spec;
  ComplexMatrix device;
};

LoadedRecord load_record(const std::string& path, const CampaignConfig& config) {
  LoadedRecord out;
  try {
    out.record = record_from_json(read_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": not a run record (" + e.what() + ")");
  }
  out.spec = spec_for_record(out.record, config);
  out.spec.mode = out.record.mode;
  out.spec.vacuum_modes = out.record.vacuum_modes;
  out.spec.fixed_modes.clear();
  out.device = record_matrix(out.record, out.spec);
  return out;
}

// A RunRecord line is decoded under the experiment that produced it; anything
// else must be a matrix document.
ComplexMatrix load_device(const std::string& path, const CampaignConfig& config) {
  const nlohmann::json j = read_json_file(path);
  if (j.contains("params")) return load_record(path, config).device;
  return square(matrix_from_json(j));
}

int cmd_optimize(const std::string& config_path, const std::string& name,
                 std::optional<int> cycles, std::optional<std::uint64_t> seed,
                 const std::string& out, bool quiet, const std::string& start_path,
                 double spread) {
  const CampaignConfig config = config_or_builtin(config_path);
  ExperimentSpec spec = config.find(name);
  if (cycles) spec.cycles = *cycles;
  if (seed) spec.seed = *seed;
  spec.validate();
  std::optional<WarmStart> warm;
  if (!start_path.empty()) warm = WarmStart{load_device(start_path, config), spread};
  const fs::path jsonl = out.empty() ? config.output_dir / (spec.name + ".jsonl") : fs::path(out);

  const int threads = default_thread_count();
  std::cerr << "optimize " << spec.name << ": " << spec.cycles << " cycles, N = "
            << spec.device_dimension() << ", seed " << spec.seed << ", " << threads
            << " thread(s) -> " << jsonl.string() << "\n";
  const CampaignOutcome outcome =
      run_campaign(spec, jsonl, threads, quiet ? nullptr : &std::cerr, warm);

  const RunRecord* best = nullptr;
  int converged = 0;
  for (const auto& r : outcome.records) {
    if (!r.converged) continue;
    ++converged;
    if (!best || r.success > best->success) best = &r;
  }
  std::cout << spec.name << ": " << outcome.records.size() << " cycles (" << outcome.resumed
            << " resumed), " << converged << " converged\n";
  if (best) {
    std::printf("best s = %.6f  f = %.9f  (cycle %d)", best->success, best->fidelity, best->cycle);
    if (auto ref = reference_success(spec.input_recipe, spec.target_recipe)) {
      std::printf("  reference %s", fraction_label(*ref).c_str());
    }
    std::printf("\n");
  } else {
    std::cout << "no converged cycle\n";
  }
  return kExitOk;
}

int cmd_evaluate(const std::string& config_path, const std::string& name,
                 const std::string& matrix_path) {
  const CampaignConfig config = config_or_builtin(config_path);
  const ExperimentSpec spec = config.find(name);
  const ComplexMatrix u = load_device(matrix_path, config);
  const Objective objective(spec);
  const ObjectiveReport r = objective.report(u, 0.0);
  std::printf("experiment %s\n", spec.name.c_str());
  std::printf("s        = %.12f\n", r.success);
  std::printf("f        = %.12f\n", r.fidelity);
  std::printf("gamma    = %.12f\n", r.distance);
  std::printf("sv_ratio = %.12f\n", singular_value_ratio(u));
  return kExitOk;
}

int cmd_extend(const std::string& config_path, const std::string& base_path,
               const std::string& link_path, const std::string& out) {
  const CampaignConfig config = config_or_builtin(config_path);
  const LoadedRecord base = load_record(base_path, config);
  const LoadedRecord link = load_record(link_path, config);
  if (!base.spec.input_recipe.starts_with("bell:") || link.spec.input_recipe != "bell:2" ||
      link.spec.target_recipe != "cluster:4") {
    throw ConfigError("extend: base must come from Bell pairs and link must be C4 from bell:2");
  }
  const int qubits = base.spec.qubit_count();
  const ComplexMatrix u = extend_bell_chain(base.device, qubits, link.device);

  ExperimentSpec grown;
  grown.name = "c" + std::to_string(qubits + 2) + "-bell";
  grown.input_recipe = "bell:" + std::to_string(qubits / 2 + 1);
  grown.target_recipe = "cluster:" + std::to_string(qubits + 2);
  grown.vacuum_modes = link.spec.vacuum_modes;
  const ObjectiveReport r = Objective(grown).report(u, 0.0);
  const auto score = [](const LoadedRecord& l) { return Objective(l.spec).report(l.device, 0.0); };
  const ObjectiveReport rb = score(base);
  const ObjectiveReport rl = score(link);
  std::printf("base     s = %.9f  1-f = %.3e\n", rb.success, 1.0 - rb.fidelity);
  std::printf("link     s = %.9f  1-f = %.3e\n", rl.success, 1.0 - rl.fidelity);
  std::printf("extended s = %.9f  1-f = %.3e  (%s, %d vacuum modes, N = %d)\n", r.success,
              1.0 - r.fidelity, grown.target_recipe.c_str(), grown.vacuum_modes,
              static_cast<int>(u.rows()));
  std::ofstream(out) << matrix_to_json(u).dump() << "\n";
  return kExitOk;
}

int cmd_oracle(bool inject_fault) {
  OracleKernels kernels;
  if (inject_fault) {
    kernels.permanent = [](const ComplexMatrix& m) { return permanent_ryser(m) * 1.001; };
  }
  const auto checks = run_oracle_suite(kernels);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  (" << c.detail << ")\n";
    ok = ok && c.passed;
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_report(const std::string& config_path, const std::vector<std::string>& files,
               const std::string& out_dir) {
  if (files.empty()) throw ConfigError("report: no input files");
  const CampaignConfig config = config_or_builtin(config_path);
  std::map<std::string, std::vector<RunRecord>> grouped;
  for (const auto& f : files) {
    for (auto& r : read_jsonl(f)) grouped[r.experiment].push_back(std::move(r));
  }
  if (grouped.empty()) throw ConfigError("report: input files hold no records");

  const fs::path dir = out_dir.empty() ? config.output_dir : fs::path(out_dir);
  fs::create_directories(dir);
  const auto& formats = config.report.formats;
  auto wants = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };

  std::vector<TableEntry> table;
  for (auto& [name, records] : grouped) {
    sort_records(records);
    const ExperimentSpec spec = spec_for_record(records.front(), config);
    const auto reference = reference_success(spec.input_recipe, spec.target_recipe);
    const auto plateaus = detect_plateaus(records, config.report.plateau_tolerance);
    if (wants("csv")) std::ofstream(dir / (name + ".csv")) << render_csv(records);
    if (wants("svg")) {
      std::ofstream(dir / (name + ".svg")) << render_svg(records, plateaus, name, reference);
    }
    std::cout << name << ": " << records.size() << " records, plateaus:";
    for (const auto& p : plateaus) std::cout << "  " << plateau_label(p.value, std::nullopt) << " x" << p.count;
    if (!plateaus.empty()) std::cout << "\n  top: " << plateau_label(plateaus.back().value, reference);
    std::cout << "\n";
    table.push_back(summarize_experiment(spec, records));
  }
  const std::string rendered = render_table(table);
  if (wants("table")) std::ofstream(dir / "table.txt") << rendered;
  std::cout << "\n" << rendered;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear-optical cluster-state generation: simulation and success optimization"};
  app.require_subcommand(1);

  std::string config_path, experiment, out, matrix_path;
  std::optional<int> cycles;
  std::optional<std::uint64_t> seed;
  bool quiet = false, inject_fault = false;
  std::vector<std::string> files;

  auto* optimize = app.add_subcommand("optimize", "Run a multi-start campaign, appending JSONL records");
  optimize->add_option("--config", config_path, "Campaign config (JSON)");
  optimize->add_option("--experiment", experiment, "Experiment or preset name")->required();
  optimize->add_option("--cycles", cycles, "Override the cycle count");
  optimize->add_option("--seed", seed, "Override the master seed");
  optimize->add_option("--out", out, "Output JSONL (default <output_dir>/<experiment>.jsonl)");
  optimize->add_flag("--quiet", quiet, "No per-cycle progress");
  std::string start_path;
  double spread = 0.0;
  optimize->add_option("--start", start_path, "Start every cycle from this device (matrix JSON or RunRecord line)");
  optimize->add_option("--spread", spread, "Random perturbation size around --start")
      ->check(CLI::NonNegativeNumber);

  auto* evaluate = app.add_subcommand("evaluate", "Score a device matrix on an experiment");
  evaluate->add_option("--config", config_path, "Campaign config (JSON)");
  evaluate->add_option("--experiment", experiment, "Experiment or preset name")->required();
  evaluate->add_option("--matrix", matrix_path, "Matrix JSON {n, re, im} or a RunRecord line")->required();

  std::string base_path, link_path;
  auto* extend = app.add_subcommand("extend", "Grow a Bell-pair cluster device by one Bell pair");
  extend->add_option("--config", config_path, "Campaign config (JSON)");
  extend->add_option("--base", base_path, "RunRecord of the C_n device")->required();
  extend->add_option("--link", link_path, "RunRecord of a C4 device that leaves qubit 0 untouched")
      ->required();
  extend->add_option("--out", out, "Output matrix JSON")->required();

  auto* oracle = app.add_subcommand("oracle", "Run the built-in oracle checks");
  oracle->add_flag("--inject-fault", inject_fault, "Corrupt the permanent kernel (self-test)")
      ->group("");

  auto* report = app.add_subcommand("report", "CSV, SVG and summary table from JSONL records");
  report->add_option("--config", config_path, "Campaign config (JSON)");
  report->add_option("--out", out, "Output directory (default: config output_dir)");
  report->add_option("files", files, "RunRecord JSONL files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*optimize) {
      return cmd_optimize(config_path, experiment, cycles, seed, out, quiet, start_path, spread);
    }
    if (*extend) return cmd_extend(config_path, base_path, link_path, out);
    if (*evaluate) return cmd_evaluate(config_path, experiment, matrix_path);
    if (*oracle) return cmd_oracle(inject_fault);
    if (*report) return cmd_report(config_path, files, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
