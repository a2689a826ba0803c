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
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "clusterforge/experiment.hpp"
#include "clusterforge/interferometer.hpp"
#include "clusterforge/objectives.hpp"

namespace clusterforge {

/// Result of one optimization cycle.
struct RunRecord {
  std::string experiment;
  std::string input_recipe;
  std::string target_recipe;
  int vacuum_modes = 0;
  int cycle = 0;
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::unitary;
  /// Final search point; in contraction mode the unclamped matrix entries.
  ParamVector params;
  /// Clamp factor applied to the contraction-mode matrix (1 when untouched).
  double scale = 1.0;
  double success = 0.0;
  double fidelity = 0.0;
  double distance = 0.0;
  double sv_ratio = 0.0;
  double penalty = 0.0;
  int iterations = 0;
  int stages = 0;
  int restarts = 0;
  bool converged = false;
  double wall_seconds = 0.0;
};

using Objective1D = std::function<double(const ParamVector&)>;

/// Central differences (obj(p + h e_k) - obj(p - h e_k)) / 2h.
Eigen::VectorXd finite_diff_gradient(const Objective1D& objective, const ParamVector& p, double h);

/// Child seed for cycle `cycle` of a campaign seeded with `master`.
std::uint64_t cycle_seed(std::uint64_t master, int cycle);

/// Random starting point: generator of a Haar unitary (unitary mode) or the
/// entries of a normalized complex Gaussian matrix (contraction mode). With
/// fixed modes the Haar unitary acts on the remaining modes only.
ParamVector random_start(const ExperimentSpec& spec, std::mt19937_64& rng);

/// A known device to start every cycle from instead of a random point.
struct WarmStart {
  ComplexMatrix device;
  /// Each cycle starts at device * exp(i spread H) with H the generator of a
  /// random start. 0 starts every cycle exactly at `device`.
  double spread = 0.0;
};

/// Search parameters of the perturbed warm-start device. Throws DimensionError
/// when the device has the wrong size or moves a fixed mode.
ParamVector warm_start_params(const ExperimentSpec& spec, const WarmStart& warm,
                              std::mt19937_64& rng);

/// Penalty-method ascent on J = s - c (1 - f) with L-BFGS directions and an
/// Armijo backtracking line search. Unitary mode steps along U exp(iX) with X
/// in the Lie algebra; contraction mode steps in matrix entries. c grows by the
/// schedule's factor after each stage that ends with 1 - f above tolerance.
/// Starts whose projected output vanishes are resampled (up to 3 times) from
/// `seed`.
RunRecord local_optimize(const ExperimentSpec& spec, const ParamVector& start, std::uint64_t seed);

struct MultiStartOptions {
  int threads = 1;
  /// Cycles already finished (e.g. from a resumed run); they are not rerun.
  std::set<int> skip;
  /// Called in increasing cycle order, from one thread at a time.
  std::function<void(const RunRecord&)> on_record;
  std::optional<WarmStart> warm_start;
};

/// Runs spec.cycles cycles and returns them sorted: converged runs ascending by
/// (s, cycle), then non-converged runs in the same order.
std::vector<RunRecord> multi_start(const ExperimentSpec& spec, const MultiStartOptions& options = {});

void sort_records(std::vector<RunRecord>& records);

struct AuditSummary {
  int examined = 0;
  std::vector<int> flagged_cycles;
  double min_ratio = 1.0;
  bool ok() const { return flagged_cycles.empty(); }
};

inline constexpr double kUnitaryRatioFloor = 0.99;

/// Checks sv_ratio >= 0.99 for every record with s above `threshold`.
AuditSummary unitarity_audit(const std::vector<RunRecord>& records, double threshold);

/// The device matrix a record describes (clamped in contraction mode).
ComplexMatrix record_matrix(const RunRecord& record, const ExperimentSpec& spec);

/// Worker count from CLUSTERFORGE_THREADS, else the hardware concurrency.
int default_thread_count();

nlohmann::json record_to_json(const RunRecord& record, bool include_timing = false);
RunRecord record_from_json(const nlohmann::json& j);

}  // namespace clusterforge
