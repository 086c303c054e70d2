// Copyright 2026 The qmemlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMEM_TESTING_HPP
#define QMEM_TESTING_HPP

#include <random>
#include <vector>

#include "qmem/matrix.hpp"
#include "qmem/protocol.hpp"
#include "qmem/state.hpp"

// Seeded random instances for the fuzz suites and property tests. Shared by
// the selftest command and the unit tests so both draw from the same
// distributions.

namespace qmem::testing {

using Rng = std::mt19937_64;

/// Independent standard complex Gaussian entries.
ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols);

ComplexMatrix random_hermitian(Rng& rng, std::size_t n);

/// Ginibre construction G G^dag / tr(G G^dag); full rank almost surely.
DensityOperator random_density(Rng& rng, std::size_t dim);

/// Random rank-r projector from the eigenbasis of a random Hermitian.
ComplexMatrix random_projector(Rng& rng, std::size_t dim, std::size_t rank);

/// Haar-ish random pure state.
StateVector random_state(Rng& rng, std::size_t num_qubits);

/// The built-in strategy grid at message length n: keep-first-M with Z and
/// X measurement for M < n, keep-everything, and the intermediate-basis
/// measure-all attack.
std::vector<protocol::BobStrategy> builtin_grid(std::size_t n);

}  // namespace qmem::testing

#endif  // QMEM_TESTING_HPP
