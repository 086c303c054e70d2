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

#include "qmem/testing.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "qmem/linalg.hpp"

namespace qmem::testing {

ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = complex_t{gauss(rng), gauss(rng)};
  return m;
}

ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  const ComplexMatrix g = random_matrix(rng, n, n);
  ComplexMatrix h = g + g.adjoint();
  h *= complex_t{0.5};
  return h;
}

DensityOperator random_density(Rng& rng, std::size_t dim) {
  const ComplexMatrix g = random_matrix(rng, dim, dim);
  ComplexMatrix rho = multiply(g, g.adjoint());
  rho *= complex_t{1.0 / rho.trace().real()};
  // Symmetrize away the last-ulp asymmetry from the matmul.
  ComplexMatrix sym = rho + rho.adjoint();
  sym *= complex_t{0.5};
  return DensityOperator({dim}, std::move(sym));
}

ComplexMatrix random_projector(Rng& rng, std::size_t dim, std::size_t rank) {
  const EigResult eig = herm_eig(random_hermitian(rng, dim));
  ComplexMatrix p(dim, dim);
  for (std::size_t k = 0; k < rank; ++k) {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        p(i, j) += eig.eigenvectors(i, k) *
                   std::conj(eig.eigenvectors(j, k));
  }
  return p;
}

StateVector random_state(Rng& rng, std::size_t num_qubits) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<complex_t> amps(std::size_t{1} << num_qubits);
  double norm2 = 0;
  for (auto& a : amps) {
    a = complex_t{gauss(rng), gauss(rng)};
    norm2 += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& a : amps) a *= scale;
  return StateVector(num_qubits, std::move(amps));
}

std::vector<protocol::BobStrategy> builtin_grid(std::size_t n) {
  using protocol::MeasurementBasis;
  std::vector<protocol::BobStrategy> out;
  for (std::size_t m = 0; m < n; ++m) {
    std::set<std::size_t> kept;
    for (std::size_t q = 0; q < m; ++q) kept.insert(q);
    out.push_back(
        protocol::keep_subset_strategy(n, kept, MeasurementBasis::z()));
    out.push_back(
        protocol::keep_subset_strategy(n, kept, MeasurementBasis::x()));
  }
  out.push_back(protocol::keep_all_strategy(n));
  out.push_back(protocol::measure_all_strategy(
      n, MeasurementBasis::angle(std::numbers::pi / 8)));
  return out;
}

}  // namespace qmem::testing
