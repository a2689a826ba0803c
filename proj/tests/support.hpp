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
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "clusterforge/fock.hpp"
#include "clusterforge/permanent.hpp"

namespace clusterforge::testing {

inline ComplexMatrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

/// Entries uniform in the unit disk.
inline ComplexMatrix random_disk_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = std::polar(std::sqrt(radius(rng)), angle(rng));
  }
  return m;
}

/// Random normalized state over all occupation vectors with `photons` photons.
inline StateVector random_state(int modes, int photons, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector::TermMap terms;
  double norm = 0.0;
  for (const auto& b : enumerate_basis(modes, photons)) {
    Complex a(g(rng), g(rng));
    terms[b] = a;
    norm += std::norm(a);
  }
  for (auto& [_, a] : terms) a /= std::sqrt(norm);
  return StateVector(static_cast<std::size_t>(modes), std::move(terms));
}

inline double max_abs_diff(const StateVector& a, const StateVector& b) {
  double worst = 0.0;
  for (const auto& [basis, amp] : a.terms()) worst = std::max(worst, std::abs(amp - b.amplitude(basis)));
  for (const auto& [basis, amp] : b.terms()) worst = std::max(worst, std::abs(amp - a.amplitude(basis)));
  return worst;
}

/// Fourth-order accurate derivative from Richardson extrapolation of two
/// central differences.
template <class F>
Eigen::VectorXd richardson_gradient(F&& f, const Eigen::VectorXd& p, double h) {
  Eigen::VectorXd g(p.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    auto at = [&](double t) {
      Eigen::VectorXd q = p;
      q(k) += t;
      return f(q);
    };
    g(k) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  }
  return g;
}

}  // namespace clusterforge::testing
