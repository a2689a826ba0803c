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

#include <algorithm>
#include <numeric>
#include <random>

#include "clusterforge/errors.hpp"
#include "clusterforge/permanent.hpp"
#include "support.hpp"

namespace clusterforge {
namespace {

// Expansion along the first row, kept deliberately unrelated to the kernels
// under test.
Complex laplace_permanent(const ComplexMatrix& m) {
  const auto n = m.rows();
  if (n == 1) return m(0, 0);
  Complex total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    ComplexMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      for (Eigen::Index c = 0, k = 0; c < n; ++c) {
        if (c != j) minor(r - 1, k++) = m(r, c);
      }
    }
    total += m(0, j) * laplace_permanent(minor);
  }
  return total;
}

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(Permanent, OneByOne) {
  ComplexMatrix m(1, 1);
  m << 1.0;
  EXPECT_EQ(permanent_naive(m), Complex(1.0));
  EXPECT_EQ(permanent_ryser(m), Complex(1.0));
  EXPECT_EQ(permanent_fast(m), Complex(1.0));
}

TEST(Permanent, TwoByTwoIsAdPlusBc) {
  ComplexMatrix m(2, 2);
  const Complex a(1, 2), b(-0.5, 0.25), c(3, -1), d(0.1, 0.7);
  m << a, b, c, d;
  EXPECT_LT(std::abs(permanent_naive(m) - (a * d + b * c)), 1e-15);
  EXPECT_LT(std::abs(permanent_ryser(m) - (a * d + b * c)), 1e-15);
}

TEST(Permanent, IdentityHasPermanentOne) {
  ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  EXPECT_EQ(permanent_naive(id), Complex(1.0));
  EXPECT_NEAR(std::abs(permanent_ryser(id) - Complex(1.0)), 0.0, 1e-15);
}

TEST(Permanent, AllOnesCountsPermutations) {
  for (int n = 1; n <= 8; ++n) {
    ComplexMatrix ones = ComplexMatrix::Ones(n, n);
    double factorial = 1;
    for (int k = 2; k <= n; ++k) factorial *= k;
    EXPECT_NEAR(permanent_ryser(ones).real(), factorial, 1e-9 * factorial) << n;
    EXPECT_NEAR(permanent_ryser(ones).imag(), 0.0, 1e-9 * factorial) << n;
  }
}

TEST(Permanent, NaiveMatchesLaplaceExpansion) {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 7; ++n) {
    auto m = testing::random_matrix(n, n, rng);
    EXPECT_LT(rel_err(permanent_naive(m), laplace_permanent(m)), 1e-12) << n;
  }
}

TEST(Permanent, RyserMatchesNaiveOnUnitDiskEntries) {
  std::mt19937_64 rng(6);
  auto m = testing::random_disk_matrix(6, rng);
  EXPECT_LT(rel_err(permanent_ryser(m), permanent_naive(m)), 1e-10);
}

TEST(Permanent, AllKernelsAgreeOnRandomMatrices) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 7;
    auto m = testing::random_matrix(n, n, rng);
    const Complex reference = permanent_naive(m);
    ASSERT_LT(rel_err(permanent_ryser(m), reference), 1e-10) << "n=" << n;
    ASSERT_LT(rel_err(permanent_fast(m), reference), 1e-10) << "n=" << n;
    ComplexMatrix grad;
    ASSERT_LT(rel_err(permanent_with_gradient(m, grad), reference), 1e-10) << "n=" << n;
  }
}

TEST(Permanent, InvariantUnderRowPermutationAndTransposition) {
  std::mt19937_64 rng(10);
  auto m = testing::random_matrix(5, 5, rng);
  const Complex p = permanent_ryser(m);
  std::vector<int> order(5);
  std::iota(order.begin(), order.end(), 0);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    ComplexMatrix shuffled(5, 5);
    for (int i = 0; i < 5; ++i) shuffled.row(i) = m.row(order[i]);
    EXPECT_LT(rel_err(permanent_ryser(shuffled), p), 1e-12);
  }
  ComplexMatrix t = m.transpose();
  EXPECT_LT(rel_err(permanent_ryser(t), p), 1e-12);
}

TEST(Permanent, ZeroRowGivesZero) {
  std::mt19937_64 rng(12);
  auto m = testing::random_matrix(6, 6, rng);
  m.row(3).setZero();
  EXPECT_LT(std::abs(permanent_ryser(m)), 1e-14);
  EXPECT_LT(std::abs(permanent_naive(m)), 1e-14);
}

TEST(Permanent, GradientHoldsMinorPermanents) {
  std::mt19937_64 rng(13);
  auto m = testing::random_matrix(5, 5, rng);
  ComplexMatrix grad;
  permanent_with_gradient(m, grad);
  ASSERT_EQ(grad.rows(), 5);
  ASSERT_EQ(grad.cols(), 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      ComplexMatrix minor(4, 4);
      for (int r = 0, rr = 0; r < 5; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < 5; ++c) {
          if (c != j) minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      EXPECT_LT(rel_err(grad(i, j), laplace_permanent(minor)), 1e-10) << i << "," << j;
    }
  }
}

TEST(Permanent, NonSquareThrows) {
  ComplexMatrix m(2, 3);
  m.setOnes();
  EXPECT_THROW(permanent_naive(m), DimensionError);
  EXPECT_THROW(permanent_ryser(m), DimensionError);
  EXPECT_THROW(permanent_fast(m), DimensionError);
}

TEST(Permanent, NaiveRefusesLargeMatrices) {
  ComplexMatrix m = ComplexMatrix::Identity(10, 10);
  EXPECT_THROW(permanent_naive(m), DimensionError);
  EXPECT_NEAR(std::abs(permanent_ryser(m) - Complex(1.0)), 0.0, 1e-14);
}

}  // namespace
}  // namespace clusterforge
