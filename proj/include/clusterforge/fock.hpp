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

#include <complex>
#include <cstddef>
#include <map>
#include <vector>

#include <json.hpp>

namespace clusterforge {

using Complex = std::complex<double>;

/// Photon occupation numbers, one entry per optical mode.
class FockState {
 public:
  FockState() = default;
  explicit FockState(std::vector<int> occupations);

  std::size_t mode_count() const { return occ_.size(); }
  int photon_count() const;
  int operator[](std::size_t mode) const { return occ_[mode]; }
  const std::vector<int>& occupations() const { return occ_; }

  friend bool operator==(const FockState&, const FockState&) = default;

 private:
  std::vector<int> occ_;
};

/// Basis order used everywhere: descending lexicographic on the occupation
/// tuple, so (2,0) < (1,1) < (0,2).
struct BasisOrder {
  bool operator()(const FockState& a, const FockState& b) const;
};

/// All occupation vectors of `mode_count` modes holding `photon_count`
/// photons, in basis order.
std::vector<FockState> enumerate_basis(int mode_count, int photon_count);

/// Sparse superposition of Fock states. Amplitudes with magnitude at or below
/// `kPruneThreshold` are dropped on construction, so the term map is always
/// canonical. Values are immutable once built.
class StateVector {
 public:
  using TermMap = std::map<FockState, Complex, BasisOrder>;
  static constexpr double kPruneThreshold = 1e-14;

  explicit StateVector(std::size_t mode_count = 0) : modes_(mode_count) {}
  StateVector(std::size_t mode_count, TermMap terms);

  std::size_t mode_count() const { return modes_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Amplitude of `basis`; zero when absent.
  Complex amplitude(const FockState& basis) const;
  double norm_squared() const;

 private:
  std::size_t modes_;
  TermMap terms_;
};

/// <a|b>, conjugate-linear in `a`. Throws DimensionError on mode mismatch.
Complex inner_product(const StateVector& a, const StateVector& b);

/// target + factor * source, re-canonicalized.
StateVector scale_add(const StateVector& target, const StateVector& source, Complex factor);

// {"modes": N, "terms": [{"occ": [...], "re": x, "im": y}, ...]}
nlohmann::json to_json(const StateVector& state);
StateVector state_from_json(const nlohmann::json& j);

}  // namespace clusterforge
