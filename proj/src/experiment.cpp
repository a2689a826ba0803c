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

#include "clusterforge/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "clusterforge/errors.hpp"

namespace clusterforge {
namespace {

int recipe_count(const std::string& recipe) {
  const auto colon = recipe.find(':');
  if (colon == std::string::npos) return -1;
  try {
    return std::stoi(recipe.substr(colon + 1));
  } catch (const std::exception&) {
    return -1;
  }
}

// Extra vacuum ports for Bell-pair presets.
int preset_vacuum(bool bell) { return bell ? 2 : 0; }

}  // namespace

QubitState ExperimentSpec::input_state() const {
  if (input_recipe == "custom") {
    if (!custom_input) throw ConfigError(name + ": custom input without amplitudes");
    return QubitState::normalized(*custom_input);
  }
  return state_from_recipe(input_recipe);
}

QubitState ExperimentSpec::target_state() const { return state_from_recipe(target_recipe); }

Eigen::Index ExperimentSpec::param_count() const {
  const Eigen::Index n = device_dimension();
  return mode == SearchMode::unitary ? n * n : 2 * n * n;
}

void ExperimentSpec::validate() const {
  if (!target_recipe.starts_with("cluster:")) {
    throw ConfigError(name + ": target must be a cluster:n recipe");
  }
  const QubitState target = target_state();
  const QubitState input = input_state();
  if (input.qubit_count() != target.qubit_count()) {
    throw ConfigError(name + ": input has " + std::to_string(input.qubit_count()) +
                      " qubits but target has " + std::to_string(target.qubit_count()));
  }
  if (vacuum_modes < 0) throw ConfigError(name + ": negative vacuum mode count");
  if (!(penalty.initial > 0.0) || !(penalty.growth >= 1.0) || penalty.stages < 1) {
    throw ConfigError(name + ": bad penalty schedule");
  }
  if (!(gradient_tolerance > 0.0) || !(fidelity_tolerance > 0.0)) {
    throw ConfigError(name + ": tolerances must be positive");
  }
  if (max_iterations < 1 || cycles < 1) {
    throw ConfigError(name + ": max_iterations and cycles must be positive");
  }
  if (!fixed_modes.empty()) {
    if (mode != SearchMode::unitary) throw ConfigError(name + ": fixed_modes needs unitary mode");
    std::vector<int> sorted = fixed_modes;
    std::sort(sorted.begin(), sorted.end());
    const int n = device_dimension();
    if (sorted.front() < 0 || sorted.back() >= n) {
      throw ConfigError(name + ": fixed mode outside 0.." + std::to_string(n - 1));
    }
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ConfigError(name + ": repeated fixed mode");
    }
    if (static_cast<int>(sorted.size()) >= n - 1) {
      throw ConfigError(name + ": fixed_modes leaves fewer than two modes to search");
    }
  }
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (int n = 2; n <= 8; ++n) names.push_back("c" + std::to_string(n) + "-product");
  for (int n = 2; n <= 8; n += 2) names.push_back("c" + std::to_string(n) + "-bell");
  return names;
}

ExperimentSpec preset(const std::string& name) {
  const auto dash = name.find('-');
  int qubits = 0;
  if (name.size() > 1 && name[0] == 'c' && dash != std::string::npos) {
    try {
      qubits = std::stoi(name.substr(1, dash - 1));
    } catch (const std::exception&) {
      qubits = 0;
    }
  }
  const std::string kind = dash == std::string::npos ? "" : name.substr(dash + 1);
  if (qubits < 2 || qubits > 8 || (kind != "product" && kind != "bell")) {
    throw ConfigError("unknown preset \"" + name + "\"");
  }
  const bool bell = kind == "bell";
  if (bell && qubits % 2 != 0) {
    throw ConfigError("preset \"" + name + "\" is n/a: Bell-pair inputs need an even qubit count");
  }
  ExperimentSpec spec;
  spec.name = name;
  spec.input_recipe = bell ? "bell:" + std::to_string(qubits / 2) : "plus:" + std::to_string(qubits);
  spec.target_recipe = "cluster:" + std::to_string(qubits);
  spec.vacuum_modes = preset_vacuum(bell);
  return spec;
}

std::optional<double> reference_success(const std::string& input_recipe,
                                        const std::string& target_recipe) {
  if (!target_recipe.starts_with("cluster:")) return std::nullopt;
  const int n = recipe_count(target_recipe);
  if (n < 2) return std::nullopt;
  if (input_recipe == "plus:" + std::to_string(n)) return std::pow(0.5, n - 1);
  if (n % 2 == 0 && input_recipe == "bell:" + std::to_string(n / 2)) {
    return std::pow(0.25, n / 2 - 1);
  }
  return std::nullopt;
}

std::optional<double> reference_success(const std::string& preset_name) {
  try {
    const ExperimentSpec spec = preset(preset_name);
    return reference_success(spec.input_recipe, spec.target_recipe);
  } catch (const ConfigError&) {
    return std::nullopt;
  }
}

const char* to_string(SearchMode mode) {
  return mode == SearchMode::unitary ? "unitary" : "contraction";
}

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
  nlohmann::json j = {
      {"name", spec.name},
      {"input", spec.input_recipe},
      {"target", spec.target_recipe},
      {"vacuum_modes", spec.vacuum_modes},
      {"mode", to_string(spec.mode)},
      {"penalty",
       {{"initial", spec.penalty.initial},
        {"growth", spec.penalty.growth},
        {"stages", spec.penalty.stages}}},
      {"gradient_tolerance", spec.gradient_tolerance},
      {"fidelity_tolerance", spec.fidelity_tolerance},
      {"max_iterations", spec.max_iterations},
      {"cycles", spec.cycles},
      {"seed", spec.seed},
  };
  if (!spec.fixed_modes.empty()) j["fixed_modes"] = spec.fixed_modes;
  if (spec.custom_input) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& a : *spec.custom_input) amps.push_back({a.real(), a.imag()});
    j["custom_input"] = std::move(amps);
  }
  return j;
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  try {
    if (j.contains("preset")) spec = preset(j.at("preset").get<std::string>());
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    if (j.contains("input")) spec.input_recipe = j.at("input").get<std::string>();
    if (j.contains("target")) spec.target_recipe = j.at("target").get<std::string>();
    if (j.contains("vacuum_modes")) spec.vacuum_modes = j.at("vacuum_modes").get<int>();
    if (j.contains("mode")) {
      const auto mode = j.at("mode").get<std::string>();
      if (mode == "unitary") {
        spec.mode = SearchMode::unitary;
      } else if (mode == "contraction") {
        spec.mode = SearchMode::contraction;
      } else {
        throw ConfigError(spec.name + ": unknown mode \"" + mode + "\"");
      }
    }
    if (j.contains("penalty")) {
      const auto& p = j.at("penalty");
      spec.penalty.initial = p.value("initial", spec.penalty.initial);
      spec.penalty.growth = p.value("growth", spec.penalty.growth);
      spec.penalty.stages = p.value("stages", spec.penalty.stages);
    }
    spec.gradient_tolerance = j.value("gradient_tolerance", spec.gradient_tolerance);
    spec.fidelity_tolerance = j.value("fidelity_tolerance", spec.fidelity_tolerance);
    spec.max_iterations = j.value("max_iterations", spec.max_iterations);
    spec.cycles = j.value("cycles", spec.cycles);
    spec.seed = j.value("seed", spec.seed);
    spec.fixed_modes = j.value("fixed_modes", spec.fixed_modes);
    if (j.contains("custom_input")) {
      const auto& amps = j.at("custom_input");
      Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
      for (std::size_t i = 0; i < amps.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = {amps[i].at(0).get<double>(), amps[i].at(1).get<double>()};
      }
      spec.custom_input = std::move(v);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment entry: ") + e.what());
  }
  if (spec.name.empty()) throw ConfigError("experiment entry without a name");
  spec.validate();
  return spec;
}

}  // namespace clusterforge
