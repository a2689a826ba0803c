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

#include "clusterforge/states.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "clusterforge/errors.hpp"

namespace clusterforge {
namespace {

Eigen::Index dimension_for(int qubits) {
  if (qubits < 1 || qubits > 20) throw std::invalid_argument("qubit count out of range");
  return Eigen::Index{1} << qubits;
}

bool bit_of(Eigen::Index bits, int qubit, int qubits) { return (bits >> (qubits - 1 - qubit)) & 1; }

}  // namespace

QubitState::QubitState(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
  const auto size = static_cast<std::uint64_t>(amps_.size());
  if (size < 2 || !std::has_single_bit(size)) {
    throw std::invalid_argument("QubitState: amplitude count must be a power of two >= 2");
  }
  qubits_ = std::countr_zero(size);
  const double norm = amps_.squaredNorm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw std::invalid_argument("QubitState: norm^2 = " + std::to_string(norm) + ", expected 1");
  }
}

QubitState QubitState::normalized(Eigen::VectorXcd amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("QubitState: zero vector");
  return QubitState(amplitudes / norm);
}

QubitState plus_product(int qubits) {
  const auto dim = dimension_for(qubits);
  return QubitState(Eigen::VectorXcd::Constant(dim, std::pow(2.0, -0.5 * qubits)));
}

QubitState bell_product(int pairs) {
  const int n = 2 * pairs;
  const auto dim = dimension_for(n);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
  const double value = std::pow(2.0, -0.5 * pairs);
  for (Eigen::Index bits = 0; bits < dim; ++bits) {
    bool agree = true;
    for (int k = 0; k < pairs && agree; ++k) {
      agree = bit_of(bits, 2 * k, n) == bit_of(bits, 2 * k + 1, n);
    }
    if (agree) amps(bits) = value;
  }
  return QubitState(std::move(amps));
}

QubitState linear_cluster(int qubits) {
  if (qubits < 2) throw std::invalid_argument("linear_cluster: need at least two qubits");
  Eigen::VectorXcd amps = plus_product(qubits).amplitudes();
  for (int k = 0; k + 1 < qubits; ++k) {
    for (Eigen::Index bits = 0; bits < amps.size(); ++bits) {
      if (bit_of(bits, k, qubits) && bit_of(bits, k + 1, qubits)) amps(bits) = -amps(bits);
    }
  }
  return QubitState(std::move(amps));
}

QubitState local_qubit_rotation(const QubitState& q, int qubit, const Eigen::Matrix2cd& r) {
  const int n = q.qubit_count();
  if (qubit < 0 || qubit >= n) throw DimensionError("local_qubit_rotation: qubit out of range");
  const double defect = unitarity_defect(r);
  if (defect > kUnitaryTolerance) throw MatrixError("local_qubit_rotation: rotation is not unitary");
  const Eigen::Index stride = Eigen::Index{1} << (n - 1 - qubit);
  Eigen::VectorXcd out = q.amplitudes();
  for (Eigen::Index bits = 0; bits < out.size(); ++bits) {
    if (bits & stride) continue;
    const Complex a0 = q[bits];
    const Complex a1 = q[bits | stride];
    out(bits) = r(0, 0) * a0 + r(0, 1) * a1;
    out(bits | stride) = r(1, 0) * a0 + r(1, 1) * a1;
  }
  return QubitState::normalized(std::move(out));
}

StateVector encode_dual_rail(const QubitState& q, const DualRailLayout& layout) {
  if (layout.qubit_count() != q.qubit_count()) {
    throw DimensionError("encode_dual_rail: layout has " + std::to_string(layout.qubit_count()) +
                         " qubits, state has " + std::to_string(q.qubit_count()));
  }
  layout.validate();
  StateVector::TermMap terms;
  for (Eigen::Index bits = 0; bits < q.amplitudes().size(); ++bits) {
    terms.emplace(layout.basis_state(static_cast<std::uint64_t>(bits)), q[bits]);
  }
  return StateVector(static_cast<std::size_t>(layout.mode_count()), std::move(terms));
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  return h / std::numbers::sqrt2;
}

std::vector<ProductTerm> product_expansion(const std::string& recipe, const QubitState& q) {
  const int n = q.qubit_count();
  const Eigen::Vector2cd horizontal(1, 0);
  const Eigen::Vector2cd vertical(0, 1);
  std::vector<ProductTerm> terms;
  if (recipe.starts_with("plus:")) {
    const Eigen::Vector2cd plus = Eigen::Vector2cd(1, 1) / std::numbers::sqrt2;
    terms.push_back({1.0, std::vector<Eigen::Vector2cd>(n, plus)});
    return terms;
  }
  if (recipe.starts_with("bell:")) {
    const int pairs = n / 2;
    const double weight = std::pow(2.0, -0.5 * pairs);
    for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << pairs); ++choice) {
      ProductTerm t{weight, {}};
      for (int k = 0; k < pairs; ++k) {
        const auto& v = ((choice >> (pairs - 1 - k)) & 1U) ? vertical : horizontal;
        t.photons.push_back(v);
        t.photons.push_back(v);
      }
      terms.push_back(std::move(t));
    }
    return terms;
  }
  for (Eigen::Index bits = 0; bits < q.amplitudes().size(); ++bits) {
    if (std::abs(q[bits]) <= StateVector::kPruneThreshold) continue;
    ProductTerm t{q[bits], {}};
    for (int k = 0; k < n; ++k) t.photons.push_back(bit_of(bits, k, n) ? vertical : horizontal);
    terms.push_back(std::move(t));
  }
  return terms;
}

QubitState state_from_recipe(const std::string& recipe) {
  const auto colon = recipe.find(':');
  if (colon == std::string::npos) throw ConfigError("state recipe \"" + recipe + "\" lacks ':'");
  const std::string kind = recipe.substr(0, colon);
  int count = 0;
  const char* first = recipe.data() + colon + 1;
  const char* last = recipe.data() + recipe.size();
  auto [ptr, ec] = std::from_chars(first, last, count);
  if (ec != std::errc{} || ptr != last || count < 1) {
    throw ConfigError("state recipe \"" + recipe + "\" has a bad count");
  }
  if (kind == "plus") return plus_product(count);
  if (kind == "bell") return bell_product(count);
  if (kind == "cluster") {
    if (count < 2) throw ConfigError("cluster recipe needs at least two qubits");
    return linear_cluster(count);
  }
  throw ConfigError("unknown state recipe \"" + kind + "\"");
}

}  // namespace clusterforge
