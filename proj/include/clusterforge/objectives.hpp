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

#include <vector>

#include <Eigen/Dense>

#include "clusterforge/experiment.hpp"
#include "clusterforge/fock.hpp"
#include "clusterforge/interferometer.hpp"

namespace clusterforge {

/// Outputs with squared norm below this are degenerate: fidelity is undefined.
inline constexpr double kDegenerateNorm = 1e-30;

struct ObjectiveReport {
  double success = 0.0;
  double fidelity = 0.0;
  /// Fubini-Study distance arccos(sqrt(f)).
  double distance = 0.0;
  /// s - c (1 - f).
  double merit = 0.0;
};

/// |<out|target>|^2 / (<out|out><target|target>).
double fidelity(const StateVector& out, const StateVector& target);
double success(const StateVector& out);
double fubini_study(const StateVector& out, const StateVector& target);

/// Device matrix for a search point: exp(iH(p)) in unitary mode, the clamped
/// contraction in contraction mode.
ComplexMatrix device_matrix(const ParamVector& p, const ExperimentSpec& spec);

/// Objective for one experiment, prepared once and evaluated many times.
///
/// The input is held as a weighted sum of single-photon product terms. Because
/// a permanent is linear in each row, every product term contributes one n x n
/// permanent per coincidence outcome, so an evaluation costs
/// (#terms) * 2^n permanents regardless of how many modes the device has.
class Objective {
 public:
  explicit Objective(const ExperimentSpec& spec);

  int dimension() const { return dim_; }
  int qubit_count() const { return qubits_; }
  const Eigen::VectorXcd& target() const { return target_; }

  /// Projected output amplitudes indexed by coincidence bitstring.
  Eigen::VectorXcd coincidence_amplitudes(const ComplexMatrix& u) const;

  /// Throws DegenerateOutputError when the projected output vanishes.
  ObjectiveReport report(const ComplexMatrix& u, double penalty) const;

  /// As report(), also returning the Euclidean gradient G of the merit with
  /// respect to the device matrix: dJ = Re tr(G^dag dU).
  ObjectiveReport report_with_gradient(const ComplexMatrix& u, double penalty,
                                       ComplexMatrix& grad) const;

 private:
  struct Term {
    Complex weight;
    Eigen::MatrixX2cd photons;  // row k: (H, V) amplitudes of photon k
  };

  ComplexMatrix input_rows(const Term& t, const ComplexMatrix& u) const;
  ObjectiveReport summarize(const Eigen::VectorXcd& out, double penalty, Complex& overlap) const;

  int dim_;
  int qubits_;
  DualRailLayout layout_;
  std::vector<Term> terms_;
  std::vector<std::vector<int>> outcome_modes_;
  Eigen::VectorXcd target_;
  double target_norm_;
};

/// Builds U from p, projects and scores it with merit s - c (1 - f).
ObjectiveReport evaluate(const ParamVector& p, const ExperimentSpec& spec, double penalty);

}  // namespace clusterforge
