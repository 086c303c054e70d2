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

#ifndef QMEM_LINALG_HPP
#define QMEM_LINALG_HPP

#include <utility>
#include <vector>

#include "qmem/matrix.hpp"

namespace qmem {

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k belongs to eigenvalues[k]
};

/// Eigendecomposition h = V diag(lambda) V^dagger of a Hermitian matrix.
/// Throws std::invalid_argument if h is not Hermitian within `tol`.
EigResult herm_eig(const ComplexMatrix& h, double tol = kValidationTol);

/// Eigenvalues only, ascending; same Hermiticity contract as herm_eig.
std::vector<double> herm_eigvals(const ComplexMatrix& h,
                                 double tol = kValidationTol);

/// Largest singular value, computed from the full SVD.
double spectral_norm(const ComplexMatrix& a);

/// All singular values, descending.
std::vector<double> singular_values(const ComplexMatrix& a);

/// Principal square root of a PSD matrix. Eigenvalues in [-tol, 0) are
/// clamped to zero; anything below -tol throws.
ComplexMatrix sqrt_psd(const ComplexMatrix& h, double tol = kValidationTol);

/// Pseudo-inverse square root of a PSD matrix: eigenvalues <= cutoff are
/// treated as zero, the rest map to 1/sqrt(lambda).
ComplexMatrix pinv_sqrt_psd(const ComplexMatrix& h, double cutoff = 1e-12);

}  // namespace qmem

#endif  // QMEM_LINALG_HPP
