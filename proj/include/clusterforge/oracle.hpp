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
#include <functional>
#include <string>
#include <vector>

#include "clusterforge/permanent.hpp"

namespace clusterforge {

struct OracleCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Kernels under test; replaceable for fault injection.
struct OracleKernels {
  std::function<Complex(const ComplexMatrix&)> permanent = permanent_ryser;
};

/// Cross-checks every fast path against an independent route: Ryser against
/// the permutation sum, the representation property of Omega, the
/// Hong-Ou-Mandel amplitudes, direct projection against full expansion, the
/// objective's product-term path against projected_output, and the
/// Bell-to-C2 local morph.
std::vector<OracleCheck> run_oracle_suite(const OracleKernels& kernels = {}, std::uint64_t seed = 2024);

}  // namespace clusterforge
