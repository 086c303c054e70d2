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

// The OpenMP entry points against the serial reference implementations,
// including shapes large enough to actually cross the parallel threshold.

#include <vector>

#include "doctest.h"
#include "qmem/kernels.hpp"
#include "qmem/matrix.hpp"
#include "qmem/state.hpp"
#include "qmem/testing.hpp"

using namespace qmem;
using namespace qmem::kernels;

TEST_CASE("matmul matches the serial reference across shapes") {
  testing::Rng rng(101);
  const std::size_t shapes[][3] = {
      {1, 1, 1}, {2, 3, 5}, {17, 13, 7}, {64, 64, 64}, {128, 96, 80}};
  for (const auto& s : shapes) {
    const auto a = testing::random_matrix(rng, s[0], s[1]);
    const auto b = testing::random_matrix(rng, s[1], s[2]);
    ComplexMatrix c1(s[0], s[2]), c2(s[0], s[2]);
    matmul(a.data(), b.data(), c1.data(), s[0], s[1], s[2]);
    serial::matmul(a.data(), b.data(), c2.data(), s[0], s[1], s[2]);
    CHECK(frobenius_distance(c1, c2) < 1e-11);
  }
}

TEST_CASE("kron matches the serial reference across shapes") {
  testing::Rng rng(103);
  const std::size_t shapes[][4] = {{1, 2, 3, 1}, {4, 4, 4, 4}, {16, 16, 16, 16}};
  for (const auto& s : shapes) {
    const auto a = testing::random_matrix(rng, s[0], s[1]);
    const auto b = testing::random_matrix(rng, s[2], s[3]);
    ComplexMatrix o1(s[0] * s[2], s[1] * s[3]);
    ComplexMatrix o2(s[0] * s[2], s[1] * s[3]);
    kron(a.data(), s[0], s[1], b.data(), s[2], s[3], o1.data());
    serial::kron(a.data(), s[0], s[1], b.data(), s[2], s[3], o2.data());
    CHECK(frobenius_distance(o1, o2) == 0.0);
  }
}

TEST_CASE("matvec matches the serial reference") {
  testing::Rng rng(107);
  for (const std::size_t n : {1, 7, 300}) {
    const std::size_t k = 3 + n;
    const auto a = testing::random_matrix(rng, n, k);
    const auto v = testing::random_matrix(rng, k, 1);
    std::vector<complex_t> w1(n), w2(n);
    matvec(a.data(), v.data(), w1.data(), n, k);
    serial::matvec(a.data(), v.data(), w2.data(), n, k);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(w1[i] - w2[i]) < 1e-12);
  }
}

TEST_CASE("partial_trace kernel matches the digit-walking reference") {
  testing::Rng rng(109);
  const std::vector<std::size_t> dims = {2, 3, 2, 4};
  const std::size_t full = 48;
  for (unsigned mask_bits = 1; mask_bits < 15; ++mask_bits) {
    std::vector<unsigned char> mask(4);
    std::size_t kd = 1;
    for (std::size_t i = 0; i < 4; ++i) {
      mask[i] = (mask_bits >> i) & 1;
      if (mask[i]) kd *= dims[i];
    }
    const auto in = testing::random_matrix(rng, full, full);
    ComplexMatrix o1(kd, kd), o2(kd, kd);
    kernels::partial_trace(in.data(), dims, mask, o1.data());
    serial::partial_trace(in.data(), dims, mask, o2.data());
    CHECK(frobenius_distance(o1, o2) < 1e-11);
  }
}

TEST_CASE("gram_traced equals tracing the dense outer-product sum") {
  testing::Rng rng(113);
  const std::size_t keep = 6, traced = 5;
  std::vector<std::vector<complex_t>> vs;
  for (int i = 0; i < 3; ++i) {
    const auto m = testing::random_matrix(rng, keep * traced, 1);
    vs.emplace_back(m.entries().begin(), m.entries().end());
  }

  ComplexMatrix got(keep, keep);
  gram_traced(vs, keep, traced, got.data());

  // Reference route: assemble sum |v><v| densely and partial-trace it.
  ComplexMatrix dense(keep * traced, keep * traced);
  for (const auto& v : vs) dense += outer(v, v);
  const std::vector<std::size_t> dims = {keep, traced};
  const std::vector<unsigned char> mask = {1, 0};
  ComplexMatrix want(keep, keep);
  serial::partial_trace(dense.data(), dims, mask, want.data());

  CHECK(frobenius_distance(got, want) < 1e-11);

  ComplexMatrix srl(keep, keep);
  serial::gram_traced(vs, keep, traced, srl.data());
  CHECK(frobenius_distance(got, srl) < 1e-12);
}
