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

#include <stdexcept>
#include <string>

namespace clusterforge {

/// Operands disagree on mode count, matrix shape or vector length.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix failed a structural requirement (unitary, contraction, nonzero).
class MatrixError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Output state has (numerically) zero norm, so fidelity is undefined.
class DegenerateOutputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad experiment or campaign configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace clusterforge
