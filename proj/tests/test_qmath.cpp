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

#include <cmath>

#include "doctest.h"
#include "qmem/linalg.hpp"
#include "qmem/matrix.hpp"
#include "qmem/protocol.hpp"
#include "qmem/state.hpp"
#include "qmem/testing.hpp"

using namespace qmem;

namespace {

// Entry-by-entry Kronecker product, the hand oracle for tensor().
ComplexMatrix kron_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
  return out;
}

ComplexMatrix plus_projector() {
  return ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
}

}  // namespace

TEST_CASE("tensor identity and basis cases") {
  const auto i2 = ComplexMatrix::identity(2);
  CHECK(frobenius_distance(tensor(i2, i2), ComplexMatrix::identity(4)) ==
        doctest::Approx(0.0));

  const auto p0 = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
  const auto p1 = ComplexMatrix::from_rows({{0.0, 0.0}, {0.0, 1.0}});
  const auto p01 = tensor(p0, p1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(p01(i, j) == complex_t{(i == 1 && j == 1) ? 1.0 : 0.0});
}

TEST_CASE("tensor of conjugate-basis projectors is flat") {
  const auto pp = tensor(plus_projector(), plus_projector());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(pp(i, j) - complex_t{0.25}) < 1e-15);
  CHECK(frobenius_distance(pp, kron_oracle(plus_projector(),
                                           plus_projector())) < 1e-15);
}

TEST_CASE("tensor agrees with the entrywise oracle on random input") {
  testing::Rng rng(11);
  const auto a = testing::random_matrix(rng, 3, 5);
  const auto b = testing::random_matrix(rng, 4, 2);
  CHECK(frobenius_distance(tensor(a, b), kron_oracle(a, b)) < 1e-12);
}

TEST_CASE("partial trace of the EPR pair is maximally mixed") {
  const auto phi = protocol::epr_state(1);
  const auto rho = DensityOperator::from_pure(phi);
  const auto half = partial_trace(rho, {0});
  CHECK(half.dims() == std::vector<std::size_t>{2});
  CHECK(std::abs(half.matrix()(0, 0) - complex_t{0.5}) < 1e-12);
  CHECK(std::abs(half.matrix()(1, 1) - complex_t{0.5}) < 1e-12);
  CHECK(std::abs(half.matrix()(0, 1)) < 1e-12);
}

TEST_CASE("partial trace of a product basis state") {
  const auto psi = StateVector::basis_state(2, 1);  // |01>
  const auto rho = DensityOperator::from_pure(psi);
  const auto right = partial_trace(rho, {1});
  CHECK(std::abs(right.matrix()(1, 1) - complex_t{1.0}) < 1e-12);
  CHECK(std::abs(right.matrix()(0, 0)) < 1e-12);
}

TEST_CASE("partial trace recovers factors of random product states") {
  testing::Rng rng(23);
  for (int round = 0; round < 20; ++round) {
    const auto rho = testing::random_density(rng, 4);
    const auto sigma = testing::random_density(rng, 5);
    const DensityOperator joint({4, 5},
                                tensor(rho.matrix(), sigma.matrix()));
    CHECK(frobenius_distance(partial_trace(joint, {0}).matrix(),
                             rho.matrix()) < 1e-9);
    CHECK(frobenius_distance(partial_trace(joint, {1}).matrix(),
                             sigma.matrix()) < 1e-9);
  }
}

TEST_CASE("partial trace rejects out-of-range subsystems") {
  const auto rho = DensityOperator::from_pure(StateVector::basis_state(2, 0));
  CHECK_THROWS_AS(partial_trace(rho, {5}), std::out_of_range);
}

TEST_CASE("partial trace preserves trace and positivity") {
  testing::Rng rng(37);
  for (int round = 0; round < 20; ++round) {
    const auto big = testing::random_density(rng, 12);
    const DensityOperator shaped({3, 4}, big.matrix());
    for (std::size_t keep = 0; keep < 2; ++keep) {
      const auto part = partial_trace(shaped, {keep});
      CHECK(std::abs(part.matrix().trace().real() - 1.0) < 1e-9);
      CHECK(herm_eigvals(part.matrix()).front() >= -1e-9);
    }
  }
}

TEST_CASE("spectral norm basics") {
  CHECK(spectral_norm(ComplexMatrix::identity(2)) == doctest::Approx(1.0));

  // ||X_0 Z_0|| at N = 1 equals |<0bar|0>| by the rank-one product oracle.
  const auto x0 = plus_projector();
  const auto z0 = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
  const double oracle = 1.0 / std::sqrt(2.0);
  CHECK(spectral_norm(multiply(x0, z0)) ==
        doctest::Approx(oracle).epsilon(1e-10));
  CHECK(spectral_norm(multiply(x0, z0)) ==
        doctest::Approx(0.7071067812).epsilon(1e-9));
}

TEST_CASE("operator norm of Z X Z sandwiches is 2^-N") {
  const std::size_t n = 2;
  for (std::size_t zi = 0; zi < 4; ++zi) {
    for (std::size_t xi = 0; xi < 4; ++xi) {
      const auto z = protocol::basis_projector(
          protocol::Message::from_index(n, zi), protocol::Basis::Z);
      const auto x = protocol::basis_projector(
          protocol::Message::from_index(n, xi), protocol::Basis::X);
      const double nrm = spectral_norm(multiply(multiply(z, x), z));
      CHECK(nrm == doctest::Approx(0.25).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectral norm is submultiplicative") {
  testing::Rng rng(41);
  for (int round = 0; round < 100; ++round) {
    const std::size_t d = 2 + rng() % 31;
    const auto a = testing::random_matrix(rng, d, d);
    const auto b = testing::random_matrix(rng, d, d);
    CHECK(spectral_norm(multiply(a, b)) <=
          spectral_norm(a) * spectral_norm(b) * (1 + 1e-12) + 1e-12);
  }
}

TEST_CASE("projectors have norm zero or one and square to themselves") {
  testing::Rng rng(43);
  for (int round = 0; round < 30; ++round) {
    const std::size_t d = 2 + rng() % 15;
    const auto p = testing::random_projector(rng, d, rng() % (d / 2 + 1));
    CHECK(frobenius_distance(multiply(p, p), p) < 1e-9);
    const double nrm = spectral_norm(p);
    CHECK((std::abs(nrm) < 1e-9 || std::abs(nrm - 1.0) < 1e-9));
  }
}

TEST_CASE("herm_eig on diagonal and projector inputs") {
  const auto d01 = ComplexMatrix::from_rows({{0.0, 0.0}, {0.0, 1.0}});
  const auto eig = herm_eig(d01);
  CHECK(eig.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(frobenius_distance(eig.eigenvectors, ComplexMatrix::identity(2)) <
        1e-12);

  const auto peig = herm_eig(plus_projector());
  CHECK(peig.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(peig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
  testing::Rng rng(47);
  for (int round = 0; round < 10; ++round) {
    const auto h = testing::random_hermitian(rng, 8);
    const auto eig = herm_eig(h);
    ComplexMatrix scaled = eig.eigenvectors;
    for (std::size_t j = 0; j < 8; ++j)
      for (std::size_t i = 0; i < 8; ++i)
        scaled(i, j) *= eig.eigenvalues[j];
    CHECK(frobenius_distance(multiply(scaled, eig.eigenvectors.adjoint()),
                             h) < 1e-8);
  }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  const auto bad = ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  CHECK_THROWS_AS(herm_eig(bad), std::invalid_argument);
}

TEST_CASE("density operator spectra are probability-like") {
  testing::Rng rng(53);
  for (int round = 0; round < 20; ++round) {
    const auto rho = testing::random_density(rng, 2 + rng() % 15);
    const auto vals = herm_eigvals(rho.matrix());
    double sum = 0;
    for (double v : vals) {
      CHECK(v >= -1e-9);
      CHECK(v <= 1 + 1e-9);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("sqrt_psd squares back to the input") {
  testing::Rng rng(59);
  const auto rho = testing::random_density(rng, 6);
  ComplexMatrix scaled = rho.matrix();
  scaled *= complex_t{3.0};
  const auto root = sqrt_psd(scaled);
  CHECK(frobenius_distance(multiply(root, root), scaled) < 1e-9);
  CHECK(root.is_hermitian(1e-9));
}

TEST_CASE("pinv_sqrt_psd inverts on the support only") {
  const auto p = ComplexMatrix::from_rows({{4.0, 0.0}, {0.0, 0.0}});
  const auto r = pinv_sqrt_psd(p);
  CHECK(std::abs(r(0, 0) - complex_t{0.5}) < 1e-12);
  CHECK(std::abs(r(1, 1)) < 1e-12);
}

TEST_CASE("state vector construction enforces normalization") {
  CHECK_THROWS_AS(StateVector(1, {complex_t{1.0}, complex_t{1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(StateVector(2, {complex_t{1.0}}), std::invalid_argument);
}

TEST_CASE("density operator construction enforces trace and hermiticity") {
  CHECK_THROWS_AS(
      DensityOperator({2}, ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 1.0}})),
      std::invalid_argument);  // trace 2
  CHECK_THROWS_AS(
      DensityOperator({2}, ComplexMatrix::from_rows({{1.0, 1.0}, {0.0, 0.0}})),
      std::invalid_argument);  // not Hermitian
}
