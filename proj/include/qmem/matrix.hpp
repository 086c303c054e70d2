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

#ifndef QMEM_MATRIX_HPP
#define QMEM_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qmem {

using complex_t = std::complex<double>;

/// Default tolerance for structural predicates (hermiticity, trace, ...).
inline constexpr double kValidationTol = 1e-9;

/// Dense complex matrix in double precision, row-major storage.
///
/// Subsystem convention used throughout: in any tensor product the leftmost
/// factor is the slowest-varying index, i.e. tensor(A, B) puts A's indices
/// in the high-order block.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<complex_t>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  complex_t& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const complex_t& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  complex_t* data() { return data_.data(); }
  const complex_t* data() const { return data_.data(); }
  std::span<const complex_t> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  complex_t trace() const;
  double frobenius_norm() const;
  /// Largest entry magnitude; 0 for an empty matrix.
  double max_abs() const;

  bool is_square() const { return rows_ == cols_; }
  bool is_hermitian(double tol = kValidationTol) const;
  /// Hermitian and idempotent within `tol` (Frobenius residual of P^2 - P).
  bool is_projector(double tol = kValidationTol) const;
  /// Hermitian with smallest eigenvalue >= -tol.
  bool is_positive_semidefinite(double tol = kValidationTol) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(complex_t scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complex_t> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(complex_t scale, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix product a * b.
ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product with a's indices as the slow-varying block.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix-vector product a * v.
std::vector<complex_t> apply(const ComplexMatrix& a,
                             std::span<const complex_t> v);

/// Outer product |u><v| (u as column, v conjugated).
ComplexMatrix outer(std::span<const complex_t> u, std::span<const complex_t> v);

/// Frobenius norm of a - b; the matrices must have equal shape.
double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Re tr(a * b) without forming the product.
double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qmem

#endif  // QMEM_MATRIX_HPP
