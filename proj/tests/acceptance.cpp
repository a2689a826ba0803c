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


// Acceptance suite: one PASS/FAIL line per criterion on stdout, progress on
// stderr. Exit status 0 when every criterion passes, 2 otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clusterforge/campaign.hpp"
#include "clusterforge/objectives.hpp"
#include "clusterforge/optimizer.hpp"
#include "clusterforge/photonic.hpp"
#include "clusterforge/report.hpp"
#include "clusterforge/states.hpp"

namespace fs = std::filesystem;
using namespace clusterforge;

namespace {

struct Verdict {
  int id = 0;
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComplexMatrix random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (auto& x : m.reshaped()) x = {g(rng), g(rng)};
  return m;
}

StateVector random_two_photon_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector::TermMap terms;
  double norm = 0.0;
  for (const auto& b : enumerate_basis(3, 2)) {
    const Complex a(g(rng), g(rng));
    terms[b] = a;
    norm += std::norm(a);
  }
  for (auto& [_, a] : terms) a /= std::sqrt(norm);
  return StateVector(3, std::move(terms));
}

double max_diff(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (const auto& [k, v] : a.terms()) worst = std::max(worst, std::abs(v - b.amplitude(k)));
  for (const auto& [k, v] : b.terms()) worst = std::max(worst, std::abs(v - a.amplitude(k)));
  return worst;
}

Verdict kernel_equivalence() {
  std::mt19937_64 rng(101);
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix m = random_complex(1 + trial % 7, rng);
    const Complex naive = permanent_naive(m);
    worst = std::max(worst, std::abs(permanent_ryser(m) - naive) / std::max(1.0, std::abs(naive)));
  }
  const double elapsed = seconds_since(t0);
  return {1, worst <= 1e-10 && elapsed < 10.0,
          "200 matrices n<=7, max scaled err " + fmt("%.2e", worst) + ", " + fmt("%.3f", elapsed) + " s"};
}

Verdict homomorphism() {
  std::mt19937_64 rng(102);
  double composed = 0.0, norm = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix u1 = random_haar(3, rng).matrix();
    const ComplexMatrix u2 = random_haar(3, rng).matrix();
    const StateVector psi = random_two_photon_state(rng);
    const StateVector product = apply_full(u1 * u2, psi);
    composed = std::max(composed, max_diff(apply_full(u2, apply_full(u1, psi)), product));
    norm = std::max(norm, std::abs(apply_full(u1, psi).norm_squared() - 1.0));
    norm = std::max(norm, std::abs(product.norm_squared() - 1.0));
  }
  return {2, composed <= 1e-10 && norm <= 1e-10,
          "20 pairs on 3 modes, 2 photons: composition err " + fmt("%.2e", composed) +
              ", norm err " + fmt("%.2e", norm)};
}

Verdict projection_equivalence() {
  std::mt19937_64 rng(103);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const DualRailLayout layout = DualRailLayout::standard(2, trial % 3);
    const ComplexMatrix u = random_haar(layout.mode_count(), rng).matrix();
    Eigen::VectorXcd amps(4);
    for (auto& a : amps) a = {g(rng), g(rng)};
    const StateVector input = encode_dual_rail(QubitState::normalized(amps), layout);
    worst = std::max(worst, max_diff(projected_output(u, input, layout),
                                     project_coincidence(apply_full(u, input), layout)));
  }
  return {3, worst <= 1e-10, "50 unitaries on 2-qubit layouts, max err " + fmt("%.2e", worst)};
}

Verdict morph_identity() {
  const QubitState morphed = local_qubit_rotation(bell_product(1), 1, hadamard());
  const double overlap = std::abs(morphed.amplitudes().dot(linear_cluster(2).amplitudes()));
  return {4, overlap >= 1.0 - 1e-12, "|<C2|(1 x H)|Phi+>| = " + fmt("%.15f", overlap)};
}

struct Campaign {
  std::string name;
  double target = 0.0;
  double tolerance = 0.0;
  std::vector<RunRecord> records;
  double best = -1.0;
  double best_defect = 1.0;
};

class Runner {
 public:
  Runner(fs::path work, int threads, int cycles) : work_(std::move(work)), threads_(threads), cycles_(cycles) {
    fs::create_directories(work_);
  }

  ExperimentSpec spec(const std::string& name) const {
    ExperimentSpec s = preset(name);
    s.cycles = cycles_;
    s.seed = 1;
    return s;
  }

  fs::path jsonl(const std::string& name, const std::string& tag = "") const {
    return work_ / (name + tag + ".jsonl");
  }

  Campaign run(const std::string& name, double tolerance) {
    const ExperimentSpec s = spec(name);
    const fs::path out = jsonl(name);
    fs::remove(out);
    const auto t0 = std::chrono::steady_clock::now();
    std::cerr << "campaign " << name << ": " << s.cycles << " cycles\n";
    Campaign c{name, *reference_success(name), tolerance, run_campaign(s, out, threads_).records};
    for (const auto& r : c.records) {
      if (r.converged && r.success > c.best) {
        c.best = r.success;
        c.best_defect = 1.0 - r.fidelity;
      }
    }
    std::cerr << "campaign " << name << ": best s = " << c.best << " in " << seconds_since(t0) << " s\n";
    return c;
  }

  int threads() const { return threads_; }

 private:
  fs::path work_;
  int threads_;
  int cycles_;
};

std::string describe(const Campaign& c) {
  return c.name + " best " + fmt("%.6f", c.best) + " vs " + fraction_label(c.target) + " (1-f " +
         fmt("%.1e", c.best_defect) + ")";
}

bool reproduces(const Campaign& c, double fidelity_tol) {
  return c.best >= 0.0 && std::abs(c.best - c.target) <= c.tolerance && c.best_defect <= fidelity_tol;
}

Verdict table_tier(int id, const std::vector<Campaign>& campaigns, const char* label) {
  bool ok = !campaigns.empty();
  std::string detail = label;
  for (const auto& c : campaigns) {
    ok = ok && reproduces(c, 1e-6);
    detail += "; " + describe(c);
  }
  return {id, ok, detail};
}

Verdict eight_qubit_bell(const fs::path& stored) {
  if (!fs::exists(stored)) return {7, false, "no stored parameter vector at " + stored.string()};
  auto records = read_jsonl(stored);
  const ExperimentSpec spec = preset("c8-bell");
  double best = -1.0, defect = 1.0;
  int cycle = -1;
  for (const auto& r : records) {
    const ObjectiveReport fresh = evaluate(r.params, spec, 0.0);
    if (1.0 - fresh.fidelity <= 1e-5 && fresh.success > best) {
      best = fresh.success;
      defect = 1.0 - fresh.fidelity;
      cycle = r.cycle;
    }
  }
  return {7, best >= 0.0155,
          "re-evaluated stored c8-bell cycle " + std::to_string(cycle) + ": s " + fmt("%.6f", best) +
              ", 1-f " + fmt("%.1e", defect) + " (needs s >= 0.0155, 1-f <= 1e-5)"};
}

Verdict ceiling(const std::vector<Campaign>& campaigns) {
  int checked = 0;
  std::string worst_name;
  double worst = -1.0;
  for (const auto& c : campaigns) {
    for (const auto& r : c.records) {
      if (!r.converged) continue;
      ++checked;
      if (r.success - c.target > worst) {
        worst = r.success - c.target;
        worst_name = c.name;
      }
    }
  }
  return {8, checked > 0 && worst <= 1e-3,
          std::to_string(checked) + " converged runs, largest excess over target " + fmt("%+.2e", worst) +
              (worst_name.empty() ? "" : " (" + worst_name + ")")};
}

Verdict factor_of_two(const Campaign& product, const Campaign& bell) {
  const double ratio = bell.best > 0.0 ? product.best / bell.best : 0.0;
  const double bell_ref = *reference_success("c4-bell");
  const double cz = *cz_fusion_success("bell:2", "cluster:4");
  const double gain = bell_ref / cz;
  const bool ok = ratio >= 0.48 && ratio <= 0.52 && std::abs(gain - 9.0 / 4.0) <= 1e-12;
  return {9, ok,
          "best c4-product / best c4-bell = " + fmt("%.4f", ratio) + "; " + fraction_label(bell_ref) +
              " over CZ fusion " + fraction_label(cz) + " = " + fmt("%.4f", gain)};
}

Verdict contraction_audit(Runner& runner) {
  ExperimentSpec spec = runner.spec("c4-bell");
  spec.name = "c4-bell-contraction";
  spec.mode = SearchMode::contraction;
  spec.vacuum_modes = 0;
  spec.cycles = 40;
  const fs::path out = runner.jsonl(spec.name);
  fs::remove(out);
  std::cerr << "campaign " << spec.name << ": " << spec.cycles << " cycles\n";
  const auto records = run_campaign(spec, out, runner.threads()).records;
  const AuditSummary audit = unitarity_audit(records, 0.16);
  double best = 0.0;
  for (const auto& r : records) best = std::max(best, r.converged ? r.success : 0.0);
  return {10, audit.ok() && audit.examined > 0,
          std::to_string(audit.examined) + " of " + std::to_string(records.size()) +
              " contraction records have s > 0.16; min sv ratio " + fmt("%.6f", audit.min_ratio) +
              ", flagged " + std::to_string(audit.flagged_cycles.size()) + ", best s " + fmt("%.6f", best)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism(Runner& runner, const std::string& name) {
  const ExperimentSpec spec = runner.spec(name);
  const fs::path first = runner.jsonl(name);
  const fs::path second = runner.jsonl(name, ".repeat");
  fs::remove(second);
  std::cerr << "campaign " << name << " (repeat)\n";
  run_campaign(spec, second, runner.threads() > 1 ? 1 : 2);
  const std::string a = slurp(first);
  const std::string b = slurp(second);
  return {11, !a.empty() && a == b,
          name + " rerun with master seed " + std::to_string(spec.seed) + ": " + std::to_string(a.size()) +
              " vs " + std::to_string(b.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string tier = "all";
  std::string work = (fs::temp_directory_path() / "clusterforge_acceptance").string();
  std::string c8_file = std::string(CF_TEST_DATA_DIR) + "/c8_bell_best.jsonl";
  int cycles = 50;
  int threads = default_thread_count();
  app.add_option("--tier", tier, "fast, extended or all")->check(CLI::IsMember({"fast", "extended", "all"}));
  app.add_option("--work-dir", work, "Directory for campaign JSONL files");
  app.add_option("--c8-records", c8_file, "Stored eight-qubit Bell-pair records");
  app.add_option("--cycles", cycles, "Cycles per table campaign")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  const bool extended = tier != "fast";
  Runner runner(work, threads, cycles);
  std::vector<Verdict> verdicts;
  auto report = [&](Verdict v) {
    std::printf("criterion %2d  %s  %s\n", v.id, v.passed ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    verdicts.push_back(std::move(v));
  };

  report(kernel_equivalence());
  report(homomorphism());
  report(projection_equivalence());
  report(morph_identity());

  std::vector<Campaign> fast;
  for (const char* name : {"c2-product", "c3-product", "c4-product", "c4-bell"}) {
    fast.push_back(runner.run(name, 2e-3));
  }
  report(table_tier(5, fast, "fast tier, tol 2e-3"));

  std::vector<Campaign> slow;
  if (extended) {
    for (const char* name : {"c5-product", "c6-product", "c6-bell"}) slow.push_back(runner.run(name, 5e-3));
    report(table_tier(6, slow, "extended tier, tol 5e-3"));
    report(eight_qubit_bell(c8_file));
  }

  std::vector<Campaign> all = fast;
  all.insert(all.end(), slow.begin(), slow.end());
  report(ceiling(all));
  report(factor_of_two(fast[2], fast[3]));
  report(contraction_audit(runner));
  report(determinism(runner, "c4-bell"));

  int failed = 0;
  for (const auto& v : verdicts) failed += v.passed ? 0 : 1;
  std::printf("%zu criteria run, %d failed%s\n", verdicts.size(), failed,
              extended ? "" : " (fast tier: criteria 6 and 7 skipped)");
  return failed == 0 ? 0 : 2;
}
