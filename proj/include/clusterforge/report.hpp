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

#include <optional>
#include <string>
#include <vector>

#include "clusterforge/experiment.hpp"
#include "clusterforge/optimizer.hpp"

namespace clusterforge {

/// A run of sorted converged s values whose neighbours differ by at most the
/// plateau tolerance.
struct Plateau {
  double value = 0.0;  // mean
  double low = 0.0;
  double high = 0.0;
  int count = 0;
};

std::vector<Plateau> detect_plateaus(const std::vector<RunRecord>& records, double tolerance);

/// "1/4", "1/32"; decimal text when the value is not a unit fraction.
std::string fraction_label(double value);
/// "0.2500 (ref: 1/4)", at least four decimals and four significant digits.
std::string plateau_label(double value, std::optional<double> reference);

struct CsvRow {
  int rank = 0;
  int cycle = 0;
  double success = 0.0;
  double fidelity = 0.0;
  double sv_ratio = 0.0;
  bool converged = false;
};

/// rank,cycle,s,f,sv_ratio,converged with rank 1 = first record. Reals are
/// written with 17 significant digits so they parse back exactly.
std::string render_csv(const std::vector<RunRecord>& sorted);
std::vector<CsvRow> parse_csv(const std::string& text);

/// Scatter of s against rank with plateau guides.
std::string render_svg(const std::vector<RunRecord>& sorted, const std::vector<Plateau>& plateaus,
                       const std::string& title, std::optional<double> reference);

/// Success of fusing with destructive CZ gates: (1/9) per link.
std::optional<double> cz_fusion_success(const std::string& input_recipe,
                                        const std::string& target_recipe);

struct TableEntry {
  std::string experiment;
  std::string input_recipe;
  std::string target_recipe;
  std::optional<double> reference;
  std::optional<double> cz_fusion;
  /// Best s over records whose recomputed 1 - f is within tolerance.
  std::optional<double> best_success;
  double best_fidelity = 0.0;
  int best_cycle = -1;
  int accepted = 0;
  int total = 0;
};

/// Recomputes s and f of every record from its stored parameters.
TableEntry summarize_experiment(const ExperimentSpec& spec, const std::vector<RunRecord>& records);

std::string render_table(const std::vector<TableEntry>& entries);

}  // namespace clusterforge
