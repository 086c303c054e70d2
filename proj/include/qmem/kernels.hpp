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

#ifndef QMEM_KERNELS_HPP
#define QMEM_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Dense inner loops, in two flavors: the default entry points parallelize
// with OpenMP once the problem is large enough, and qmem::kernels::serial
// holds plain single-threaded versions kept as the reference for tests and
// benchmarks. Both flavors produce bit-identical results: every output
// element is accumulated in the same order by exactly one thread.

namespace qmem::kernels {

using complex_t = std::complex<double>;

/// c[n x m] = a[n x k] * b[k x m], all row-major.
void matmul(const complex_t* a, const complex_t* b, complex_t* c,
            std::size_t n, std::size_t k, std::size_t m);

/// out[(ar*br) x (ac*bc)] = kron(a, b), a slow-varying.
void kron(const complex_t* a, std::size_t ar, std::size_t ac,
          const complex_t* b, std::size_t br, std::size_t bc, complex_t* out);

/// out[n] = a[n x k] * v[k].
void matvec(const complex_t* a, const complex_t* v, complex_t* out,
            std::size_t n, std::size_t k);

/// Partial trace of a (dim x dim) operator over a general subsystem split.
///
/// `dims` are the subsystem dimensions, leftmost slowest; `keep_mask[s]`
/// marks subsystems that survive. Output is (kept_dim x kept_dim) with the
/// kept subsystems in their original order.
void partial_trace(const complex_t* in, std::span<const std::size_t> dims,
                   std::span<const unsigned char> keep_mask, complex_t* out);

/// out[keep x keep] = sum_k tr_T |v_k><v_k| for vectors indexed as
/// (keep, traced) with the traced factor fastest.
void gram_traced(std::span<const std::vector<complex_t>> vs, std::size_t keep,
                 std::size_t traced, complex_t* out);

namespace serial {

void matmul(const complex_t* a, const complex_t* b, complex_t* c,
            std::size_t n, std::size_t k, std::size_t m);
void kron(const complex_t* a, std::size_t ar, std::size_t ac,
          const complex_t* b, std::size_t br, std::size_t bc, complex_t* out);
void matvec(const complex_t* a, const complex_t* v, complex_t* out,
            std::size_t n, std::size_t k);
void partial_trace(const complex_t* in, std::span<const std::size_t> dims,
                   std::span<const unsigned char> keep_mask, complex_t* out);
void gram_traced(std::span<const std::vector<complex_t>> vs, std::size_t keep,
                 std::size_t traced, complex_t* out);

}  // namespace serial

}  // namespace qmem::kernels

#endif  // QMEM_KERNELS_HPP
