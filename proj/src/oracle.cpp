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

#include "clusterforge/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "clusterforge/objectives.hpp"
#include "clusterforge/photonic.hpp"
#include "clusterforge/states.hpp"

namespace clusterforge {
namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

ComplexMatrix random_entries(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = std::polar(std::sqrt(radius(rng)), angle(rng));
  }
  return m;
}

StateVector random_state(int modes, int photons, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  StateVector::TermMap terms;
  double norm = 0.0;
  for (const auto& b : enumerate_basis(modes, photons)) {
    const Complex a(normal(rng), normal(rng));
    terms.emplace(b, a);
    norm += std::norm(a);
  }
  for (auto& [b, a] : terms) a /= std::sqrt(norm);
  return StateVector(static_cast<std::size_t>(modes), std::move(terms));
}

double max_difference(const StateVector& a, const StateVector& b) {
  return std::sqrt(scale_add(a, b, -1.0).norm_squared());
}

OracleCheck check_permanent(const OracleKernels& kernels, std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 70; ++trial) {
    const ComplexMatrix m = random_entries(1 + trial % 7, rng);
    const Complex oracle = permanent_naive(m);
    worst = std::max(worst, std::abs(kernels.permanent(m) - oracle) / std::max(1.0, std::abs(oracle)));
  }
  return {"permanent equivalence", worst <= 1e-10, "max rel err " + sci(worst)};
}

OracleCheck check_homomorphism(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix u1 = random_haar(3, rng).matrix();
    const ComplexMatrix u2 = random_haar(3, rng).matrix();
    const StateVector psi = random_state(3, 2, rng);
    const StateVector sequential = apply_full(u2, apply_full(u1, psi));
    const StateVector product = apply_full(u1 * u2, psi);
    worst = std::max(worst, max_difference(sequential, product));
    worst = std::max(worst, std::abs(product.norm_squared() - 1.0));
  }
  return {"homomorphism", worst <= 1e-10, "max err " + sci(worst)};
}

OracleCheck check_hong_ou_mandel() {
  ComplexMatrix bs(2, 2);
  bs << 1, 1, 1, -1;
  bs /= std::numbers::sqrt2;
  const Complex coincidence = amplitude(bs, FockState({1, 1}), FockState({1, 1}));
  const Complex bunched = amplitude(bs, FockState({1, 1}), FockState({2, 0}));
  const double err = std::max(std::abs(coincidence), std::abs(bunched - 1.0 / std::numbers::sqrt2));
  return {"HOM amplitude", err <= 1e-12, "err " + sci(err)};
}

OracleCheck check_projection(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int vacuum = trial % 3;
    const DualRailLayout layout = DualRailLayout::standard(2, vacuum);
    const ComplexMatrix u = random_haar(layout.mode_count(), rng).matrix();
    std::normal_distribution<double> normal;
    Eigen::VectorXcd amps(4);
    for (auto& a : amps) a = {normal(rng), normal(rng)};
    const StateVector input = encode_dual_rail(QubitState::normalized(amps), layout);
    const StateVector direct = projected_output(u, input, layout);
    const StateVector expanded = project_coincidence(apply_full(u, input), layout);
    worst = std::max(worst, max_difference(direct, expanded));
  }
  return {"projection equivalence", worst <= 1e-10, "max err " + sci(worst)};
}

OracleCheck check_objective_path(std::mt19937_64& rng) {
  double worst = 0.0;
  for (const char* name : {"c2-product", "c3-product", "c4-bell"}) {
    const ExperimentSpec spec = preset(name);
    const Objective objective(spec);
    const DualRailLayout layout = spec.layout();
    const StateVector input = encode_dual_rail(spec.input_state(), layout);
    for (int trial = 0; trial < 3; ++trial) {
      const ComplexMatrix u = random_haar(spec.device_dimension(), rng).matrix();
      const Eigen::VectorXcd fast = objective.coincidence_amplitudes(u);
      const StateVector slow = projected_output(u, input, layout);
      for (Eigen::Index c = 0; c < fast.size(); ++c) {
        const FockState basis = layout.basis_state(static_cast<std::uint64_t>(c));
        worst = std::max(worst, std::abs(fast(c) - slow.amplitude(basis)));
      }
    }
  }
  return {"objective fast path", worst <= 1e-10, "max err " + sci(worst)};
}

OracleCheck check_morph() {
  const QubitState morphed = local_qubit_rotation(bell_product(1), 1, hadamard());
  const double overlap = std::abs(linear_cluster(2).amplitudes().dot(morphed.amplitudes()));
  return {"morph identity", overlap >= 1.0 - 1e-12, "|<C2|H Phi+>| = " + std::to_string(overlap)};
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(const OracleKernels& kernels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<OracleCheck> checks;
  auto guarded = [&](auto&& fn, const char* name) {
    try {
      checks.push_back(fn());
    } catch (const std::exception& e) {
      checks.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded([&] { return check_permanent(kernels, rng); }, "permanent equivalence");
  guarded([&] { return check_homomorphism(rng); }, "homomorphism");
  guarded([&] { return check_hong_ou_mandel(); }, "HOM amplitude");
  guarded([&] { return check_projection(rng); }, "projection equivalence");
  guarded([&] { return check_objective_path(rng); }, "objective fast path");
  guarded([&] { return check_morph(); }, "morph identity");
  return checks;
}

}  // namespace clusterforge
