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

#include "clusterforge/chain.hpp"

#include <numbers>
#include <string>

#include "clusterforge/errors.hpp"

namespace clusterforge {
namespace {

constexpr double kDecoupled = 1e-9;
constexpr double kLeakage = 1e-4;

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace

ComplexMatrix extend_bell_chain(const ComplexMatrix& base, int base_qubits,
                                const ComplexMatrix& link) {
  if (base_qubits < 2 || base_qubits % 2 != 0) {
    throw DimensionError("extend_bell_chain: base qubit count must be even and at least 2");
  }
  const int base_modes = 2 * base_qubits;
  if (base.rows() != base.cols() || base.rows() < base_modes) {
    throw DimensionError("extend_bell_chain: base device must be square with at least " +
                         std::to_string(base_modes) + " modes");
  }
  if (link.rows() != link.cols() || link.rows() < 8) {
    throw DimensionError("extend_bell_chain: link device must be square with at least 8 modes");
  }
  const Eigen::Index base_vacuum = base.rows() - base_modes;
  if (base_vacuum > 0 &&
      (base.topRightCorner(base_modes, base_vacuum).cwiseAbs().maxCoeff() > kLeakage ||
       base.bottomLeftCorner(base_vacuum, base_modes).cwiseAbs().maxCoeff() > kLeakage)) {
    throw DimensionError("extend_bell_chain: base device couples qubit modes to vacuum ports");
  }
  const ComplexMatrix head = link.topRows(2);
  const ComplexMatrix head_cols = link.leftCols(2);
  const ComplexMatrix expected = ComplexMatrix::Identity(2, link.cols());
  if ((head - expected).cwiseAbs().maxCoeff() > kDecoupled ||
      (head_cols - expected.transpose()).cwiseAbs().maxCoeff() > kDecoupled) {
    throw DimensionError("extend_bell_chain: link device must leave qubit 0 untouched");
  }

  const int qubits = base_qubits + 2;
  const int vacuum = static_cast<int>(link.rows()) - 8;
  const int dim = 2 * qubits + vacuum;

  ComplexMatrix first = ComplexMatrix::Identity(dim, dim);
  first.topLeftCorner(base_modes, base_modes) =
      polar_unitary(base.topLeftCorner(base_modes, base_modes));

  ComplexMatrix hadamard = ComplexMatrix::Identity(dim, dim);
  const double r = 1.0 / std::numbers::sqrt2;
  const int h = base_modes - 2;
  hadamard(h, h) = r;
  hadamard(h, h + 1) = r;
  hadamard(h + 1, h) = r;
  hadamard(h + 1, h + 1) = -r;

  // Link modes 2..7 carry its qubits 1..3; modes 8.. are its vacuum ports.
  auto target_mode = [&](int k) { return k < 8 ? h + (k - 2) : 2 * qubits + (k - 8); };
  ComplexMatrix second = ComplexMatrix::Identity(dim, dim);
  for (int i = 2; i < link.rows(); ++i) {
    for (int j = 2; j < link.cols(); ++j) second(target_mode(i), target_mode(j)) = link(i, j);
  }
  return first * hadamard * second;
}

}  // namespace clusterforge
