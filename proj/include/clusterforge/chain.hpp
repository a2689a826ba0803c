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

#include "clusterforge/interferometer.hpp"

namespace clusterforge {

/// Grows a Bell-pair cluster device by one Bell pair.
///
/// `base` turns n/2 Bell pairs into C_n (n even) on modes 0..2n-1. Any further
/// modes of `base` are vacuum ports. They are dropped, so their coupling to the
/// qubit modes must stay below 1e-4; the qubit block is re-unitarized.
/// `link` turns two Bell pairs into C_4 while acting as the identity on the
/// modes of qubit 0; its modes from 8 on are vacuum ports.
///
/// The result is a device for C_{n+2} from n/2 + 1 Bell pairs with the vacuum
/// ports of `link`. It applies `base`, then a Hadamard on qubit n-1, then
/// `link` on qubits n-1 to n+1. Qubits 0..n-2 are untouched after `base`, so a
/// coincidence at the output forces exactly one photon into qubit n-1 as well,
/// and the success probability is the product of the two at unit fidelity.
///
/// Throws DimensionError when either device breaks these preconditions.
ComplexMatrix extend_bell_chain(const ComplexMatrix& base, int base_qubits,
                                const ComplexMatrix& link);

}  // namespace clusterforge
