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

#include "clusterforge/permanent.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

#include "clusterforge/errors.hpp"

namespace clusterforge {
namespace {

constexpr int kMaxRyserDim = 30;

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

}  // namespace

std::complex<double> permanent_naive(const ComplexMatrix& m) {
  require_square(m, "permanent_naive");
  const auto n = static_cast<int>(m.rows());
  if (n > 9) throw DimensionError("permanent_naive: dimension above 9");
  std::array<int, 9> sigma{};
  std::iota(sigma.begin(), sigma.begin() + n, 0);
  std::complex<long double> sum = 0;
  do {
    std::complex<long double> prod = 1;
    for (int i = 0; i < n; ++i) prod *= std::complex<long double>(m(i, sigma[i]));
    sum += prod;
  } while (std::next_permutation(sigma.begin(), sigma.begin() + n));
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

std::complex<double> permanent_ryser(const ComplexMatrix& m) {
  require_square(m, "permanent_ryser");
  const auto n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  if (n > kMaxRyserDim) throw DimensionError("permanent_ryser: dimension too large");

  using Acc = std::complex<long double>;
  std::array<Acc, kMaxRyserDim> row_sum{};
  Acc total = 0;
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int col = std::countr_zero(k);
    gray ^= std::uint64_t{1} << col;
    const bool added = (gray >> col) & 1U;
    for (int i = 0; i < n; ++i) {
      const Acc v(m(i, col));
      row_sum[i] = added ? row_sum[i] + v : row_sum[i] - v;
    }
    Acc prod = row_sum[0];
    for (int i = 1; i < n; ++i) prod *= row_sum[i];
    total = (std::popcount(gray) & 1) ? total - prod : total + prod;
  }
  if (n & 1) total = -total;
  return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

std::complex<double> permanent_fast(const ComplexMatrix& m) {
  require_square(m, "permanent_fast");
  const auto n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  if (n > kMaxRyserDim) throw DimensionError("permanent_fast: dimension too large");

  using C = std::complex<double>;
  std::array<C, kMaxRyserDim> row_sum{};
  C total = 0;
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int col = std::countr_zero(k);
    gray ^= std::uint64_t{1} << col;
    const C* column = m.col(col).data();
    if ((gray >> col) & 1U) {
      for (int i = 0; i < n; ++i) row_sum[i] += column[i];
    } else {
      for (int i = 0; i < n; ++i) row_sum[i] -= column[i];
    }
    C prod = row_sum[0];
    for (int i = 1; i < n; ++i) prod *= row_sum[i];
    total = (std::popcount(gray) & 1) ? total - prod : total + prod;
  }
  return (n & 1) ? -total : total;
}

std::complex<double> permanent_with_gradient(const ComplexMatrix& m, ComplexMatrix& grad) {
  require_square(m, "permanent_with_gradient");
  const auto n = static_cast<int>(m.rows());
  grad.setZero(n, n);
  if (n == 0) return 1.0;
  if (n > kMaxRyserDim) throw DimensionError("permanent_with_gradient: dimension too large");

  using C = std::complex<double>;
  std::array<C, kMaxRyserDim> row_sum{};
  std::array<C, kMaxRyserDim + 1> prefix{};
  std::array<C, kMaxRyserDim> excluded{};
  C total = 0;
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int col = std::countr_zero(k);
    gray ^= std::uint64_t{1} << col;
    const bool added = (gray >> col) & 1U;
    for (int i = 0; i < n; ++i) {
      row_sum[i] = added ? row_sum[i] + m(i, col) : row_sum[i] - m(i, col);
    }
    prefix[0] = 1.0;
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * row_sum[i];
    const double sign = (std::popcount(gray) & 1) ? -1.0 : 1.0;
    total += sign * prefix[n];

    // excluded[i] = sign * prod_{r != i} row_sum[r]
    C suffix = sign;
    for (int i = n - 1; i >= 0; --i) {
      excluded[i] = prefix[i] * suffix;
      suffix *= row_sum[i];
    }
    for (std::uint64_t bits = gray; bits; bits &= bits - 1) {
      const int l = std::countr_zero(bits);
      C* g = grad.col(l).data();
      for (int i = 0; i < n; ++i) g[i] += excluded[i];
    }
  }
  if (n & 1) {
    total = -total;
    grad = -grad;
  }
  return total;
}

}  // namespace clusterforge
