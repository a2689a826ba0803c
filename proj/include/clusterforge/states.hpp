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

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clusterforge/fock.hpp"
#include "clusterforge/photonic.hpp"

namespace clusterforge {

/// Normalized n-qubit state; amplitude index is the bitstring with qubit 0 as
/// the most significant bit (H = 0, V = 1).
class QubitState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Throws std::invalid_argument if the length is not a power of two or the
  /// norm is off by more than kNormTolerance.
  explicit QubitState(Eigen::VectorXcd amplitudes);
  /// Same, after rescaling to unit norm.
  static QubitState normalized(Eigen::VectorXcd amplitudes);

  int qubit_count() const { return qubits_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex operator[](Eigen::Index bits) const { return amps_(bits); }

 private:
  Eigen::VectorXcd amps_;
  int qubits_ = 0;
};

QubitState plus_product(int qubits);
/// |Phi+> on qubit pairs (0,1), (2,3), ...
QubitState bell_product(int pairs);
/// plus_product(n) with CZ applied on every edge (k, k+1).
QubitState linear_cluster(int qubits);

/// Throws MatrixError if `r` is not unitary to 1e-10.
QubitState local_qubit_rotation(const QubitState& q, int qubit, const Eigen::Matrix2cd& r);

StateVector encode_dual_rail(const QubitState& q, const DualRailLayout& layout);

Eigen::Matrix2cd hadamard();

/// One term of a state written as a weighted product of single-photon states;
/// photon k sits in qubit k's pair with amplitudes (H, V).
struct ProductTerm {
  Complex weight;
  std::vector<Eigen::Vector2cd> photons;
};

/// Sum-of-products form used by the objective fast path: one term for
/// plus-state products, 2^m for m Bell pairs, one per nonzero amplitude
/// otherwise.
std::vector<ProductTerm> product_expansion(const std::string& recipe, const QubitState& q);

/// Builds "plus:n", "bell:m" or "cluster:n". Throws ConfigError otherwise.
QubitState state_from_recipe(const std::string& recipe);

}  // namespace clusterforge
