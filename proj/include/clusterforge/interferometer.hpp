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
#include <random>
#include <utility>

#include <Eigen/Dense>
#include <json.hpp>

#include "clusterforge/permanent.hpp"

namespace clusterforge {

/// Real coordinates of a search point. Unitary mode: N^2 entries of a
/// Hermitian generator (N diagonal reals, then (re, im) of each upper
/// off-diagonal entry in row-major order). Contraction mode: 2N^2 entries,
/// (re, im) of every matrix entry in row-major order.
using ParamVector = Eigen::VectorXd;

enum class MatrixKind { general, unitary, contraction };

inline constexpr double kUnitaryTolerance = 1e-10;

/// The device matrix U of an interferometer, tagged with the structural
/// property it was validated against on construction.
class OpticalMatrix {
 public:
  /// Throws MatrixError if ||U^dag U - I||_max exceeds `tol`.
  static OpticalMatrix unitary(ComplexMatrix u, double tol = kUnitaryTolerance);
  /// Throws MatrixError if the largest singular value exceeds 1 + tol.
  static OpticalMatrix contraction(ComplexMatrix m, double tol = kUnitaryTolerance);
  static OpticalMatrix general(ComplexMatrix m);

  int dimension() const { return static_cast<int>(m_.rows()); }
  MatrixKind kind() const { return kind_; }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  OpticalMatrix(ComplexMatrix m, MatrixKind kind) : m_(std::move(m)), kind_(kind) {}
  ComplexMatrix m_;
  MatrixKind kind_;
};

double unitarity_defect(const ComplexMatrix& u);
double largest_singular_value(const ComplexMatrix& m);

ComplexMatrix hermitian_from_params(const ParamVector& p, int dim);
ParamVector params_from_hermitian(const ComplexMatrix& h);

/// U = exp(iH(p)).
OpticalMatrix exp_map(const ParamVector& p, int dim);
/// A generator p with exp_map(p) == u (principal branch of the logarithm).
ParamVector log_map(const ComplexMatrix& u);

ComplexMatrix matrix_from_params(const ParamVector& p, int dim);
ParamVector params_from_matrix(const ComplexMatrix& m);

/// Rescales m by 1/sigma_max when sigma_max > 1; returns the matrix and the
/// applied scale (1 when untouched).
std::pair<ComplexMatrix, double> clamp_to_contraction(const ComplexMatrix& m);

/// Haar unitary from QR of a complex Gaussian matrix with the phases of R's
/// diagonal folded back into Q.
OpticalMatrix random_haar(int dim, std::uint64_t seed);
OpticalMatrix random_haar(int dim, std::mt19937_64& rng);
/// Complex Gaussian matrix rescaled so its largest singular value is 1.
OpticalMatrix random_contraction(int dim, std::mt19937_64& rng);

/// sigma_min / sigma_max. Exactly 1 when within 1e-9 of a scaled unitary.
double singular_value_ratio(const ComplexMatrix& m);

/// Unitary 2N x 2N dilation [[m, sqrt(I - m m^dag)], [sqrt(I - m^dag m), -m^dag]].
OpticalMatrix dilate(const ComplexMatrix& m);

// {"n": N, "re": [[...]], "im": [[...]]}
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace clusterforge
