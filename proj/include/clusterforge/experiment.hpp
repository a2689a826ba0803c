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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "clusterforge/photonic.hpp"
#include "clusterforge/states.hpp"

namespace clusterforge {

enum class SearchMode { unitary, contraction };

struct PenaltySchedule {
  double initial = 1.0;
  double growth = 4.0;
  int stages = 8;
};

/// One optimization problem: which state goes in, which cluster should come
/// out, how the device is laid out and how the search is run.
struct ExperimentSpec {
  std::string name;
  std::string input_recipe;   // "plus:n", "bell:m" or "custom"
  std::optional<Eigen::VectorXcd> custom_input;
  std::string target_recipe;  // "cluster:n"
  int vacuum_modes = 0;
  SearchMode mode = SearchMode::unitary;
  /// Modes on which the device must act as the identity. Only the remaining
  /// modes are searched. Unitary mode only.
  std::vector<int> fixed_modes;
  PenaltySchedule penalty;
  double gradient_tolerance = 1e-6;
  /// Largest accepted 1 - f for a run to count as converged.
  double fidelity_tolerance = 1e-6;
  /// Iteration cap per penalty stage.
  int max_iterations = 3000;
  int cycles = 50;
  std::uint64_t seed = 1;

  QubitState input_state() const;
  QubitState target_state() const;
  int qubit_count() const { return target_state().qubit_count(); }
  /// N = 2n + v.
  int device_dimension() const { return 2 * qubit_count() + vacuum_modes; }
  Eigen::Index param_count() const;
  DualRailLayout layout() const { return DualRailLayout::standard(qubit_count(), vacuum_modes); }

  /// Throws ConfigError when the spec is inconsistent.
  void validate() const;
};

/// Built-in presets "c2-product" .. "c8-product", "c2-bell", "c4-bell",
/// "c6-bell", "c8-bell". Cells that do not exist ("c3-bell", ...) throw
/// ConfigError.
ExperimentSpec preset(const std::string& name);
std::vector<std::string> preset_names();

/// Best success probability for the preset's cell of the reference table, if
/// the cell exists. Product input: (1/2)^(n-1); Bell pairs: (1/4)^(n/2-1).
std::optional<double> reference_success(const std::string& preset_name);
/// Same law keyed by recipes rather than preset name.
std::optional<double> reference_success(const std::string& input_recipe,
                                        const std::string& target_recipe);

nlohmann::json spec_to_json(const ExperimentSpec& spec);
/// Starts from `j["preset"]` when present, then applies every other field.
ExperimentSpec spec_from_json(const nlohmann::json& j);

const char* to_string(SearchMode mode);

}  // namespace clusterforge
