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

#include "qmem/state.hpp"

#include <cmath>
#include <stdexcept>

#include "qmem/kernels.hpp"
#include "qmem/linalg.hpp"

namespace qmem {

StateVector::StateVector(std::size_t num_qubits,
                         std::vector<complex_t> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != (std::size_t{1} << num_qubits_))
    throw std::invalid_argument("StateVector: amplitude count != 2^n");
  double norm2 = 0;
  for (const auto& a : amplitudes_) norm2 += std::norm(a);
  if (std::abs(std::sqrt(norm2) - 1.0) > kValidationTol)
    throw std::invalid_argument("StateVector: not normalized");
}

StateVector StateVector::basis_state(std::size_t num_qubits,
                                     std::size_t index) {
  std::vector<complex_t> amps(std::size_t{1} << num_qubits);
  amps.at(index) = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

complex_t StateVector::inner(const StateVector& other) const {
  if (dim() != other.dim())
    throw std::invalid_argument("inner: dimension mismatch");
  complex_t s{};
  for (std::size_t i = 0; i < dim(); ++i)
    s += std::conj(amplitudes_[i]) * other.amplitudes_[i];
  return s;
}

ComplexMatrix StateVector::projector() const {
  return outer(amplitudes_, amplitudes_);
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<complex_t> amps(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      amps[i * b.dim() + j] = a[i] * b[j];
  return StateVector(a.num_qubits() + b.num_qubits(), std::move(amps));
}

DensityOperator::DensityOperator(std::vector<std::size_t> dims,
                                 ComplexMatrix matrix)
    : dims_(std::move(dims)), matrix_(std::move(matrix)) {
  std::size_t total = 1;
  for (std::size_t d : dims_) {
    if (d == 0) throw std::invalid_argument("DensityOperator: zero dimension");
    total *= d;
  }
  if (matrix_.rows() != total || matrix_.cols() != total)
    throw std::invalid_argument("DensityOperator: matrix size != prod(dims)");
  if (!matrix_.is_hermitian(kValidationTol))
    throw std::invalid_argument("DensityOperator: not Hermitian");
  if (std::abs(matrix_.trace() - complex_t{1.0}) > kValidationTol)
    throw std::invalid_argument("DensityOperator: trace != 1");
}

DensityOperator DensityOperator::from_pure(const StateVector& psi) {
  std::vector<std::size_t> dims(psi.num_qubits(), 2);
  if (dims.empty()) dims.push_back(1);
  return DensityOperator(std::move(dims), psi.projector());
}

DensityOperator DensityOperator::from_pure(
    std::vector<std::size_t> dims, std::span<const complex_t> amplitudes) {
  return DensityOperator(std::move(dims), outer(amplitudes, amplitudes));
}

bool DensityOperator::is_valid(double tol) const {
  if (!matrix_.is_hermitian(tol)) return false;
  if (std::abs(matrix_.trace() - complex_t{1.0}) > tol) return false;
  const auto vals = herm_eigvals(matrix_, tol);
  return vals.empty() || vals.front() >= -tol;
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::set<std::size_t>& keep) {
  const auto& dims = rho.dims();
  for (std::size_t idx : keep)
    if (idx >= dims.size())
      throw std::out_of_range("partial_trace: subsystem index out of range");

  std::vector<unsigned char> mask(dims.size(), 0);
  std::vector<std::size_t> kept_dims;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (keep.count(i)) {
      mask[i] = 1;
      kept_dims.push_back(dims[i]);
    }
  }
  if (kept_dims.empty()) kept_dims.push_back(1);

  std::size_t kd = 1;
  for (std::size_t d : kept_dims) kd *= d;
  ComplexMatrix out(kd, kd);
  kernels::partial_trace(rho.matrix().data(), dims, mask, out.data());
  return DensityOperator(std::move(kept_dims), std::move(out));
}

}  // namespace qmem
