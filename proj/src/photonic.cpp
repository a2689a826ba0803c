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

#include "clusterforge/photonic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "clusterforge/errors.hpp"
#include "clusterforge/permanent.hpp"

namespace clusterforge {
namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

void require_modes(const ComplexMatrix& u, std::size_t modes, const char* who) {
  if (u.rows() != u.cols() || static_cast<std::size_t>(u.rows()) != modes) {
    throw DimensionError(std::string(who) + ": matrix is " + std::to_string(u.rows()) + "x" +
                         std::to_string(u.cols()) + " but state has " + std::to_string(modes) +
                         " modes");
  }
}

std::vector<int> repeated_indices(const FockState& f) {
  std::vector<int> idx;
  for (std::size_t m = 0; m < f.mode_count(); ++m) {
    for (int r = 0; r < f[m]; ++r) idx.push_back(static_cast<int>(m));
  }
  return idx;
}

}  // namespace

DualRailLayout DualRailLayout::standard(int qubits, int vacuum) {
  if (qubits < 0 || vacuum < 0) throw DimensionError("DualRailLayout: negative size");
  DualRailLayout layout;
  for (int k = 0; k < qubits; ++k) layout.qubit_pairs.emplace_back(2 * k, 2 * k + 1);
  for (int v = 0; v < vacuum; ++v) layout.vacuum_modes.push_back(2 * qubits + v);
  return layout;
}

void DualRailLayout::validate() const {
  std::vector<int> seen(static_cast<std::size_t>(mode_count()), 0);
  auto mark = [&](int mode) {
    if (mode < 0 || mode >= mode_count() || seen[mode]++) {
      throw DimensionError("DualRailLayout: mode " + std::to_string(mode) +
                           " is out of range or used twice");
    }
  };
  for (auto [h, v] : qubit_pairs) {
    mark(h);
    mark(v);
  }
  for (int m : vacuum_modes) mark(m);
}

FockState DualRailLayout::basis_state(std::uint64_t bits) const {
  std::vector<int> occ(static_cast<std::size_t>(mode_count()), 0);
  for (int m : occupied_modes(bits)) occ[m] = 1;
  return FockState(std::move(occ));
}

std::vector<int> DualRailLayout::occupied_modes(std::uint64_t bits) const {
  const int n = qubit_count();
  std::vector<int> modes(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const bool vertical = (bits >> (n - 1 - k)) & 1U;
    modes[k] = vertical ? qubit_pairs[k].second : qubit_pairs[k].first;
  }
  return modes;
}

Complex amplitude(const ComplexMatrix& u, const FockState& input, const FockState& output) {
  require_modes(u, input.mode_count(), "amplitude");
  if (output.mode_count() != input.mode_count()) {
    throw DimensionError("amplitude: input and output mode counts differ");
  }
  if (input.photon_count() != output.photon_count()) return 0.0;
  const auto rows = repeated_indices(input);
  const auto cols = repeated_indices(output);
  double norm = 1.0;
  for (std::size_t m = 0; m < input.mode_count(); ++m) {
    norm *= factorial(input[m]) * factorial(output[m]);
  }
  const ComplexMatrix sub = u(rows, cols);
  return permanent_ryser(sub) / std::sqrt(norm);
}

StateVector apply_full(const ComplexMatrix& u, const StateVector& state) {
  require_modes(u, state.mode_count(), "apply_full");
  const int modes = static_cast<int>(state.mode_count());
  std::map<int, std::vector<FockState>> bases;
  StateVector::TermMap out;
  for (const auto& [input, coeff] : state.terms()) {
    const int photons = input.photon_count();
    auto it = bases.find(photons);
    if (it == bases.end()) it = bases.emplace(photons, enumerate_basis(modes, photons)).first;
    for (const auto& output : it->second) out[output] += coeff * amplitude(u, input, output);
  }
  return StateVector(state.mode_count(), std::move(out));
}

StateVector project_coincidence(const StateVector& state, const DualRailLayout& layout) {
  if (static_cast<int>(state.mode_count()) != layout.mode_count()) {
    throw DimensionError("project_coincidence: layout and state mode counts differ");
  }
  StateVector::TermMap kept;
  for (const auto& [basis, amp] : state.terms()) {
    bool ok = std::all_of(layout.qubit_pairs.begin(), layout.qubit_pairs.end(),
                          [&](auto pair) { return basis[pair.first] + basis[pair.second] == 1; });
    ok = ok && std::all_of(layout.vacuum_modes.begin(), layout.vacuum_modes.end(),
                           [&](int m) { return basis[m] == 0; });
    if (ok) kept.emplace(basis, amp);
  }
  return StateVector(state.mode_count(), std::move(kept));
}

StateVector projected_output(const ComplexMatrix& u, const StateVector& input,
                             const DualRailLayout& layout) {
  require_modes(u, input.mode_count(), "projected_output");
  if (layout.mode_count() != static_cast<int>(input.mode_count())) {
    throw DimensionError("projected_output: layout and state mode counts differ");
  }
  const std::uint64_t outcomes = std::uint64_t{1} << layout.qubit_count();
  StateVector::TermMap out;
  for (std::uint64_t bits = 0; bits < outcomes; ++bits) {
    const FockState target = layout.basis_state(bits);
    Complex acc{};
    for (const auto& [basis, coeff] : input.terms()) acc += coeff * amplitude(u, basis, target);
    out.emplace(target, acc);
  }
  return StateVector(input.mode_count(), std::move(out));
}

}  // namespace clusterforge
