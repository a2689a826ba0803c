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

#include "clusterforge/interferometer.hpp"

#include <cmath>
#include <string>

#include "clusterforge/errors.hpp"

namespace clusterforge {
namespace {

constexpr double kRatioSnap = 1e-9;

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(who) + ": expected a non-empty square matrix");
  }
}

}  // namespace

OpticalMatrix OpticalMatrix::unitary(ComplexMatrix u, double tol) {
  require_square(u, "OpticalMatrix::unitary");
  const double defect = unitarity_defect(u);
  if (!(defect <= tol)) {
    throw MatrixError("matrix is not unitary: ||U^dag U - I||_max = " + std::to_string(defect));
  }
  return {std::move(u), MatrixKind::unitary};
}

OpticalMatrix OpticalMatrix::contraction(ComplexMatrix m, double tol) {
  require_square(m, "OpticalMatrix::contraction");
  const double top = largest_singular_value(m);
  if (!(top <= 1.0 + tol)) {
    throw MatrixError("matrix is not a contraction: sigma_max = " + std::to_string(top));
  }
  return {std::move(m), MatrixKind::contraction};
}

OpticalMatrix OpticalMatrix::general(ComplexMatrix m) {
  require_square(m, "OpticalMatrix::general");
  return {std::move(m), MatrixKind::general};
}

double unitarity_defect(const ComplexMatrix& u) {
  const ComplexMatrix d = u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

double largest_singular_value(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

ComplexMatrix hermitian_from_params(const ParamVector& p, int dim) {
  if (dim < 1 || p.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw DimensionError("hermitian_from_params: expected " + std::to_string(dim * dim) +
                         " parameters, got " + std::to_string(p.size()));
  }
  ComplexMatrix h(dim, dim);
  Eigen::Index k = 0;
  for (int i = 0; i < dim; ++i) h(i, i) = p(k++);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      h(i, j) = {p(k), p(k + 1)};
      h(j, i) = {p(k), -p(k + 1)};
      k += 2;
    }
  }
  return h;
}

ParamVector params_from_hermitian(const ComplexMatrix& h) {
  require_square(h, "params_from_hermitian");
  const auto dim = h.rows();
  ParamVector p(dim * dim);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) p(k++) = h(i, i).real();
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const Complex upper = 0.5 * (h(i, j) + std::conj(h(j, i)));
      p(k++) = upper.real();
      p(k++) = upper.imag();
    }
  }
  return p;
}

OpticalMatrix exp_map(const ParamVector& p, int dim) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitian_from_params(p, dim));
  Eigen::VectorXcd phases(dim);
  for (int i = 0; i < dim; ++i) phases(i) = std::polar(1.0, eig.eigenvalues()(i));
  ComplexMatrix u = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  return OpticalMatrix::unitary(std::move(u));
}

ParamVector log_map(const ComplexMatrix& u) {
  require_square(u, "log_map");
  // A unitary is normal, so its complex Schur form is diagonal.
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  const ComplexMatrix& z = schur.matrixU();
  Eigen::VectorXd angles(u.rows());
  for (Eigen::Index i = 0; i < u.rows(); ++i) angles(i) = std::arg(schur.matrixT()(i, i));
  return params_from_hermitian(z * angles.asDiagonal() * z.adjoint());
}

ComplexMatrix matrix_from_params(const ParamVector& p, int dim) {
  if (dim < 1 || p.size() != 2 * static_cast<Eigen::Index>(dim) * dim) {
    throw DimensionError("matrix_from_params: expected " + std::to_string(2 * dim * dim) +
                         " parameters, got " + std::to_string(p.size()));
  }
  ComplexMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const Eigen::Index k = 2 * (static_cast<Eigen::Index>(i) * dim + j);
      m(i, j) = {p(k), p(k + 1)};
    }
  }
  return m;
}

ParamVector params_from_matrix(const ComplexMatrix& m) {
  require_square(m, "params_from_matrix");
  const auto dim = m.rows();
  ParamVector p(2 * dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      p(2 * (i * dim + j)) = m(i, j).real();
      p(2 * (i * dim + j) + 1) = m(i, j).imag();
    }
  }
  return p;
}

std::pair<ComplexMatrix, double> clamp_to_contraction(const ComplexMatrix& m) {
  const double top = largest_singular_value(m);
  if (top <= 1.0) return {m, 1.0};
  return {m / top, 1.0 / top};
}

OpticalMatrix random_haar(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_haar(dim, rng);
}

OpticalMatrix random_haar(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw DimensionError("random_haar: dimension must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = normal(rng);
      g(i, j) = {re, normal(rng)};
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return OpticalMatrix::unitary(std::move(q));
}

OpticalMatrix random_contraction(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw DimensionError("random_contraction: dimension must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = normal(rng);
      g(i, j) = {re, normal(rng)};
    }
  }
  g /= largest_singular_value(g);
  return OpticalMatrix::contraction(std::move(g));
}

double singular_value_ratio(const ComplexMatrix& m) {
  require_square(m, "singular_value_ratio");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double top = sv(0);
  if (!(top > 0.0)) throw MatrixError("singular_value_ratio: zero matrix");
  const double ratio = sv(sv.size() - 1) / top;
  return ratio >= 1.0 - kRatioSnap ? 1.0 : ratio;
}

OpticalMatrix dilate(const ComplexMatrix& m) {
  require_square(m, "dilate");
  const double top = largest_singular_value(m);
  if (top > 1.0 + kUnitaryTolerance) {
    throw MatrixError("dilate: not a contraction, sigma_max = " + std::to_string(top));
  }
  // With m = L diag(c) R^dag the defect roots are L diag(s) L^dag and
  // R diag(s) R^dag, s = sqrt(1 - c^2); sharing the singular vectors keeps
  // the blocks consistent even when some c_i are 1.
  const auto n = m.rows();
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd cosines = svd.singularValues().cwiseMin(1.0);
  const Eigen::VectorXd sines = (1.0 - cosines.array().square()).sqrt().matrix();
  const ComplexMatrix& left = svd.matrixU();
  const ComplexMatrix& right = svd.matrixV();
  ComplexMatrix w(2 * n, 2 * n);
  w.topLeftCorner(n, n) = m;
  w.topRightCorner(n, n) = left * sines.asDiagonal() * left.adjoint();
  w.bottomLeftCorner(n, n) = right * sines.asDiagonal() * right.adjoint();
  w.bottomRightCorner(n, n) = -m.adjoint();
  return OpticalMatrix::unitary(std::move(w));
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ri = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ri.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"n", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  const auto rows = static_cast<Eigen::Index>(re.size());
  if (rows == 0 || im.size() != re.size()) throw DimensionError("matrix json: bad row count");
  const auto cols = static_cast<Eigen::Index>(re.at(0).size());
  if (j.contains("n") && (j.at("n").get<Eigen::Index>() != rows)) {
    throw DimensionError("matrix json: \"n\" disagrees with row count");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& rr = re.at(i);
    const auto& ri = im.at(i);
    if (static_cast<Eigen::Index>(rr.size()) != cols || ri.size() != rr.size()) {
      throw DimensionError("matrix json: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = {rr.at(c).get<double>(), ri.at(c).get<double>()};
  }
  return m;
}

}  // namespace clusterforge
