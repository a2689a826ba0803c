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

#include <Eigen/Dense>

namespace clusterforge {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Direct sum over all n! permutations. Oracle only; dimension must be <= 9.
std::complex<double> permanent_naive(const ComplexMatrix& m);

/// Ryser's inclusion-exclusion formula with Gray-code subset order, one row-sum
/// update per step. Accumulates in long double.
std::complex<double> permanent_ryser(const ComplexMatrix& m);

/// The same Gray-code kernel in double precision; used on the optimizer's hot
/// path and checked against permanent_ryser in the tests.
std::complex<double> permanent_fast(const ComplexMatrix& m);

/// Same formula in double precision, additionally filling `grad(k, l)` with
/// d perm / d m(k, l), i.e. the permanent of the (k, l) minor.
std::complex<double> permanent_with_gradient(const ComplexMatrix& m, ComplexMatrix& grad);

}  // namespace clusterforge
