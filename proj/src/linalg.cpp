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

#include "qmem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <lapacke.h>

namespace qmem {

namespace {

lapack_complex_double* lp(complex_t* p) {
  return reinterpret_cast<lapack_complex_double*>(p);
}

EigResult zheev(const ComplexMatrix& h, double tol, bool want_vectors) {
  if (!h.is_hermitian(tol))
    throw std::invalid_argument("herm_eig: matrix is not Hermitian");
  const lapack_int n = static_cast<lapack_int>(h.rows());
  EigResult res;
  res.eigenvalues.assign(n, 0.0);
  if (n == 0) return res;
  ComplexMatrix work = h;
  const lapack_int info = LAPACKE_zheev(
      LAPACK_ROW_MAJOR, want_vectors ? 'V' : 'N', 'U', n, lp(work.data()), n,
      res.eigenvalues.data());
  if (info != 0)
    throw std::runtime_error("herm_eig: zheev failed, info=" +
                             std::to_string(info));
  if (want_vectors) res.eigenvectors = std::move(work);
  return res;
}

}  // namespace

EigResult herm_eig(const ComplexMatrix& h, double tol) {
  return zheev(h, tol, true);
}

std::vector<double> herm_eigvals(const ComplexMatrix& h, double tol) {
  return zheev(h, tol, false).eigenvalues;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  std::vector<double> s(std::min(m, n), 0.0);
  if (s.empty()) return s;
  ComplexMatrix work = a;
  std::vector<double> superb(std::max<lapack_int>(1, std::min(m, n) - 1));
  const lapack_int info =
      LAPACKE_zgesvd(LAPACK_ROW_MAJOR, 'N', 'N', m, n, lp(work.data()), n,
                     s.data(), nullptr, 1, nullptr, 1, superb.data());
  if (info != 0)
    throw std::runtime_error("singular_values: zgesvd failed, info=" +
                             std::to_string(info));
  return s;
}

double spectral_norm(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  return singular_values(a).front();
}

namespace {

// V diag(f(lambda)) V^dagger over the eigensystem of h.
ComplexMatrix eig_function(const EigResult& eig, double (*f)(double, double),
                           double arg) {
  const std::size_t n = eig.eigenvectors.rows();
  const ComplexMatrix& v = eig.eigenvectors;
  ComplexMatrix scaled(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = f(eig.eigenvalues[j], arg);
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) = v(i, j) * s;
  }
  return multiply(scaled, v.adjoint());
}

}  // namespace

ComplexMatrix sqrt_psd(const ComplexMatrix& h, double tol) {
  const EigResult eig = herm_eig(h, tol);
  if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < -tol)
    throw std::invalid_argument("sqrt_psd: matrix is not PSD");
  return eig_function(
      eig, [](double lam, double) { return std::sqrt(std::max(lam, 0.0)); },
      0.0);
}

ComplexMatrix pinv_sqrt_psd(const ComplexMatrix& h, double cutoff) {
  return eig_function(
      herm_eig(h),
      [](double lam, double cut) {
        return lam > cut ? 1.0 / std::sqrt(lam) : 0.0;
      },
      cutoff);
}

}  // namespace qmem
