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


#include <gtest/gtest.h>

#include <map>
#include <numbers>
#include <random>

#include "clusterforge/errors.hpp"
#include "clusterforge/photonic.hpp"
#include "clusterforge/states.hpp"
#include "support.hpp"

namespace clusterforge {
namespace {

using Occ = std::vector<int>;

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Expands prod_i (sum_j U_ij a_j^dag)^{n_i} / sqrt(n_i!) as a polynomial in
// creation operators, then uses a^dag^k |0> = sqrt(k!) |k>.
StateVector expand_operators(const ComplexMatrix& u, const StateVector& input) {
  const int modes = static_cast<int>(input.mode_count());
  StateVector::TermMap out;
  for (const auto& [basis, coeff] : input.terms()) {
    std::map<Occ, Complex> poly{{Occ(modes, 0), coeff}};
    for (int i = 0; i < modes; ++i) {
      for (int rep = 0; rep < basis[i]; ++rep) {
        std::map<Occ, Complex> next;
        for (const auto& [mono, c] : poly) {
          for (int j = 0; j < modes; ++j) {
            Occ bumped = mono;
            ++bumped[j];
            next[bumped] += c * u(i, j);
          }
        }
        poly = std::move(next);
      }
      for (auto& [_, c] : poly) c /= std::sqrt(factorial(basis[i]));
    }
    for (const auto& [mono, c] : poly) {
      double weight = 1.0;
      for (int k : mono) weight *= factorial(k);
      out[FockState(mono)] += c * std::sqrt(weight);
    }
  }
  return StateVector(input.mode_count(), std::move(out));
}

ComplexMatrix beam_splitter() {
  ComplexMatrix bs(2, 2);
  bs << 1, 1, 1, -1;
  return bs / std::numbers::sqrt2;
}

TEST(Layout, StandardPairsThenVacuum) {
  auto layout = DualRailLayout::standard(2, 3);
  EXPECT_EQ(layout.qubit_count(), 2);
  EXPECT_EQ(layout.mode_count(), 7);
  EXPECT_EQ(layout.qubit_pairs[1], std::make_pair(2, 3));
  EXPECT_EQ(layout.vacuum_modes, (std::vector<int>{4, 5, 6}));
  EXPECT_NO_THROW(layout.validate());
}

TEST(Layout, ValidateRejectsOverlapAndGaps) {
  DualRailLayout overlap{{{0, 1}, {1, 2}}, {}};
  EXPECT_THROW(overlap.validate(), DimensionError);
  DualRailLayout gap{{{0, 1}}, {3}};
  EXPECT_THROW(gap.validate(), DimensionError);
}

TEST(Layout, QubitZeroIsTheMostSignificantBit) {
  auto layout = DualRailLayout::standard(2);
  EXPECT_EQ(layout.basis_state(0b01).occupations(), (Occ{1, 0, 0, 1}));
  EXPECT_EQ(layout.basis_state(0b10).occupations(), (Occ{0, 1, 1, 0}));
  EXPECT_EQ(layout.occupied_modes(0b10), (std::vector<int>{1, 2}));
}

TEST(Amplitude, IdentityDevice) {
  ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  for (const auto& b : enumerate_basis(3, 3)) {
    EXPECT_NEAR(std::abs(amplitude(id, b, b) - Complex(1.0)), 0.0, 1e-15);
  }
}

TEST(Amplitude, HongOuMandelCancellation) {
  EXPECT_NEAR(std::abs(amplitude(beam_splitter(), FockState(Occ{1, 1}), FockState(Occ{1, 1}))), 0.0,
              1e-15);
}

TEST(Amplitude, BunchedOutputAmplitude) {
  Complex a = amplitude(beam_splitter(), FockState(Occ{1, 1}), FockState(Occ{2, 0}));
  EXPECT_NEAR(std::abs(a - Complex(1.0 / std::numbers::sqrt2)), 0.0, 1e-15);
}

TEST(Amplitude, PhotonNumberMismatchIsExactlyZero) {
  auto u = random_haar(3, 1).matrix();
  EXPECT_EQ(amplitude(u, FockState(Occ{1, 1, 0}), FockState(Occ{1, 0, 0})), Complex(0.0));
}

TEST(Amplitude, DimensionMismatchThrows) {
  auto u = random_haar(3, 1).matrix();
  EXPECT_THROW(amplitude(u, FockState(Occ{1, 0}), FockState(Occ{0, 1})), DimensionError);
  EXPECT_THROW(amplitude(u, FockState(Occ{1, 0, 0}), FockState(Occ{0, 1})), DimensionError);
}

TEST(ApplyFull, IdentityIsNoOp) {
  std::mt19937_64 rng(30);
  auto psi = testing::random_state(3, 2, rng);
  EXPECT_LT(testing::max_abs_diff(apply_full(ComplexMatrix::Identity(3, 3), psi), psi), 1e-15);
}

TEST(ApplyFull, MatchesOperatorExpansion) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto u = random_haar(3, rng).matrix();
    auto psi = testing::random_state(3, 3, rng);
    EXPECT_LT(testing::max_abs_diff(apply_full(u, psi), expand_operators(u, psi)), 1e-12);
  }
}

TEST(ApplyFull, TwoSinglePhotonsKeepUnitNorm) {
  auto u = random_haar(2, 77).matrix();
  StateVector psi(2, {{FockState(Occ{1, 1}), 1.0}});
  EXPECT_NEAR(apply_full(u, psi).norm_squared(), 1.0, 1e-12);
}

TEST(ApplyFull, HomomorphismInCreationOperatorOrder) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    auto u1 = random_haar(3, rng).matrix();
    auto u2 = random_haar(3, rng).matrix();
    auto psi = testing::random_state(3, 2, rng);
    auto sequential = apply_full(u2, apply_full(u1, psi));
    auto product = apply_full(u1 * u2, psi);
    EXPECT_LT(testing::max_abs_diff(sequential, product), 1e-10);
    EXPECT_NEAR(product.norm_squared(), 1.0, 1e-10);
  }
}

TEST(ApplyFull, DimensionMismatchThrows) {
  StateVector psi(2, {{FockState(Occ{1, 0}), 1.0}});
  EXPECT_THROW(apply_full(ComplexMatrix::Identity(3, 3), psi), DimensionError);
}

TEST(ProjectCoincidence, ComputationalTermSurvives) {
  auto layout = DualRailLayout::standard(2);
  StateVector psi(4, {{FockState(Occ{1, 0, 0, 1}), 1.0}});
  EXPECT_EQ(project_coincidence(psi, layout).terms(), psi.terms());
}

TEST(ProjectCoincidence, BunchedTermRemoved) {
  auto layout = DualRailLayout::standard(2);
  StateVector psi(4, {{FockState(Occ{2, 0, 0, 0}), 0.6}, {FockState(Occ{0, 1, 1, 0}), 0.8}});
  auto out = project_coincidence(psi, layout);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.amplitude(FockState(Occ{0, 1, 1, 0})), Complex(0.8));
}

TEST(ProjectCoincidence, VacuumModesMustBeEmpty) {
  auto layout = DualRailLayout::standard(1, 1);
  StateVector psi(3, {{FockState(Occ{1, 0, 1}), 1.0}, {FockState(Occ{0, 1, 0}), 1.0}});
  auto out = project_coincidence(psi, layout);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.amplitude(FockState(Occ{0, 1, 0})), Complex(1.0));
}

TEST(ProjectCoincidence, NormEqualsComputationalWeight) {
  std::mt19937_64 rng(33);
  auto layout = DualRailLayout::standard(2);
  auto psi = testing::random_state(4, 2, rng);
  double expected = 0.0;
  for (std::uint64_t b = 0; b < 4; ++b) expected += std::norm(psi.amplitude(layout.basis_state(b)));
  EXPECT_NEAR(project_coincidence(psi, layout).norm_squared(), expected, 1e-15);
}

TEST(ProjectedOutput, IdentityKeepsComputationalState) {
  auto layout = DualRailLayout::standard(2, 1);
  auto psi = encode_dual_rail(linear_cluster(2), layout);
  auto out = projected_output(ComplexMatrix::Identity(5, 5), psi, layout);
  EXPECT_LT(testing::max_abs_diff(out, psi), 1e-15);
}

TEST(ProjectedOutput, AgreesWithFullExpansion) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const int qubits = 2 + trial % 2;
    auto layout = DualRailLayout::standard(qubits, trial % 3);
    auto u = random_haar(layout.mode_count(), rng).matrix();
    Eigen::VectorXcd amps(1 << qubits);
    std::normal_distribution<double> g;
    for (auto& a : amps) a = {g(rng), g(rng)};
    auto psi = encode_dual_rail(QubitState::normalized(amps), layout);
    auto direct = projected_output(u, psi, layout);
    auto expanded = project_coincidence(apply_full(u, psi), layout);
    EXPECT_LT(testing::max_abs_diff(direct, expanded), 1e-10);
    EXPECT_LE(direct.norm_squared(), 1.0 + 1e-12);
  }
}

TEST(ProjectedOutput, ContractionOfNorm) {
  std::mt19937_64 rng(35);
  auto layout = DualRailLayout::standard(3);
  auto psi = encode_dual_rail(plus_product(3), layout);
  for (int trial = 0; trial < 10; ++trial) {
    auto u = random_haar(6, rng).matrix();
    EXPECT_LE(projected_output(u, psi, layout).norm_squared(), 1.0 + 1e-12);
  }
}

TEST(ProjectedOutput, LayoutMismatchThrows) {
  auto psi = encode_dual_rail(plus_product(2), DualRailLayout::standard(2));
  EXPECT_THROW(projected_output(ComplexMatrix::Identity(4, 4), psi, DualRailLayout::standard(2, 1)),
               DimensionError);
  EXPECT_THROW(project_coincidence(psi, DualRailLayout::standard(3)), DimensionError);
}

}  // namespace
}  // namespace clusterforge
