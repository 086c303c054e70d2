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

#ifndef QMEM_STATE_HPP
#define QMEM_STATE_HPP

#include <cstddef>
#include <set>
#include <vector>

#include "qmem/matrix.hpp"

namespace qmem {

/// Pure state of an n-qubit register. Amplitudes are indexed with qubit 0
/// as the slowest (highest-order) bit, matching the tensor convention.
class StateVector {
 public:
  /// Throws if amplitudes.size() != 2^num_qubits or the norm deviates from
  /// one by more than 1e-9.
  StateVector(std::size_t num_qubits, std::vector<complex_t> amplitudes);

  /// Computational basis state |index> on n qubits.
  static StateVector basis_state(std::size_t num_qubits, std::size_t index);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const complex_t> amplitudes() const { return amplitudes_; }
  const complex_t& operator[](std::size_t i) const { return amplitudes_[i]; }

  complex_t inner(const StateVector& other) const;  // <this|other>

  /// |psi><psi| as a dense matrix.
  ComplexMatrix projector() const;

 private:
  std::size_t num_qubits_;
  std::vector<complex_t> amplitudes_;
};

/// Tensor product, a's register slow-varying.
StateVector tensor(const StateVector& a, const StateVector& b);

/// Mixed state over an ordered list of subsystems.
///
/// Construction enforces Hermiticity and unit trace (1e-9). Positivity is
/// checked by is_valid(), which costs a full eigendecomposition and is left
/// to callers and tests.
class DensityOperator {
 public:
  DensityOperator(std::vector<std::size_t> dims, ComplexMatrix matrix);

  static DensityOperator from_pure(const StateVector& psi);
  static DensityOperator from_pure(std::vector<std::size_t> dims,
                                   std::span<const complex_t> amplitudes);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t total_dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }

  /// Hermitian, unit trace, and smallest eigenvalue >= -tol.
  bool is_valid(double tol = kValidationTol) const;

 private:
  std::vector<std::size_t> dims_;
  ComplexMatrix matrix_;
};

/// Partial trace keeping the listed subsystem indices (original order).
/// Throws std::out_of_range for indices beyond rho.dims().
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::set<std::size_t>& keep);

}  // namespace qmem

#endif  // QMEM_STATE_HPP
