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
#include <utility>
#include <vector>

#include "clusterforge/fock.hpp"
#include "clusterforge/interferometer.hpp"

namespace clusterforge {

/// Assignment of device modes to dual-rail qubits and vacuum ports.
/// Qubit k is stored in modes qubit_pairs[k] = (mode_H, mode_V); a photon in
/// mode_H is logical 0.
struct DualRailLayout {
  std::vector<std::pair<int, int>> qubit_pairs;
  std::vector<int> vacuum_modes;

  /// Pairs (2k, 2k+1) followed by `vacuum` vacuum modes.
  static DualRailLayout standard(int qubits, int vacuum = 0);

  int qubit_count() const { return static_cast<int>(qubit_pairs.size()); }
  int mode_count() const {
    return static_cast<int>(2 * qubit_pairs.size() + vacuum_modes.size());
  }
  /// Throws DimensionError unless indices are distinct and cover 0..N-1.
  void validate() const;

  /// Fock state for the computational basis element `bits`; qubit 0 is the
  /// most significant bit.
  FockState basis_state(std::uint64_t bits) const;
  /// Output modes occupied by basis element `bits`, ordered by qubit.
  std::vector<int> occupied_modes(std::uint64_t bits) const;
};

/// <output| Omega(U) |input>: permanent of U with row i repeated input_i
/// times and column j repeated output_j times, over sqrt(prod input_i! output_j!).
/// Exactly zero when photon numbers differ.
Complex amplitude(const ComplexMatrix& u, const FockState& input, const FockState& output);

/// Omega(U) applied to every term, expanded over the full output basis.
StateVector apply_full(const ComplexMatrix& u, const StateVector& state);

/// Keeps the terms with exactly one photon per qubit pair and none in vacuum
/// modes. No renormalization.
StateVector project_coincidence(const StateVector& state, const DualRailLayout& layout);

/// project_coincidence(apply_full(u, input)) computed from the 2^n
/// coincidence amplitudes only.
StateVector projected_output(const ComplexMatrix& u, const StateVector& input,
                             const DualRailLayout& layout);

}  // namespace clusterforge
