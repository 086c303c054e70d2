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

#include "qmem/kernels.hpp"

namespace qmem::kernels {

namespace {

// Work sizes below this stay on one thread; the pragma if-clauses use it.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 16;

struct TraceLayout {
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
  std::vector<std::size_t> kept_offsets;    // input offset per kept index
  std::vector<std::size_t> traced_offsets;  // input offset per traced index
};

// Offset tables so that input(row) = kept_offsets[I] + traced_offsets[T]
// enumerates every full index exactly once. Kept subsystems keep their
// original relative order, which fixes the output index convention.
TraceLayout make_trace_layout(std::span<const std::size_t> dims,
                              std::span<const unsigned char> keep_mask) {
  const std::size_t s = dims.size();
  std::vector<std::size_t> strides(s, 1);
  for (std::size_t i = s; i-- > 1;) strides[i - 1] = strides[i] * dims[i];

  TraceLayout out;
  std::vector<std::size_t> kept_dims, kept_strides, traced_dims, traced_strides;
  for (std::size_t i = 0; i < s; ++i) {
    if (keep_mask[i]) {
      kept_dims.push_back(dims[i]);
      kept_strides.push_back(strides[i]);
      out.kept_dim *= dims[i];
    } else {
      traced_dims.push_back(dims[i]);
      traced_strides.push_back(strides[i]);
      out.traced_dim *= dims[i];
    }
  }

  auto build = [](const std::vector<std::size_t>& d,
                  const std::vector<std::size_t>& st, std::size_t total) {
    std::vector<std::size_t> offsets(total, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rem = idx, off = 0;
      for (std::size_t a = d.size(); a-- > 0;) {
        off += (rem % d[a]) * st[a];
        rem /= d[a];
      }
      offsets[idx] = off;
    }
    return offsets;
  };
  out.kept_offsets = build(kept_dims, kept_strides, out.kept_dim);
  out.traced_offsets = build(traced_dims, traced_strides, out.traced_dim);
  return out;
}

}  // namespace

void matmul(const complex_t* a, const complex_t* b, complex_t* c,
            std::size_t n, std::size_t k, std::size_t m) {
  const std::size_t work = n * k * m;
#pragma omp parallel for schedule(static) if (work >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    complex_t* row = c + i * m;
    for (std::size_t j = 0; j < m; ++j) row[j] = complex_t{};
    for (std::size_t p = 0; p < k; ++p) {
      const complex_t aip = a[i * k + p];
      if (aip == complex_t{}) continue;
      const complex_t* brow = b + p * m;
      for (std::size_t j = 0; j < m; ++j) row[j] += aip * brow[j];
    }
  }
}

void kron(const complex_t* a, std::size_t ar, std::size_t ac,
          const complex_t* b, std::size_t br, std::size_t bc, complex_t* out) {
  const std::size_t rows = ar * br, cols = ac * bc;
#pragma omp parallel for schedule(static) if (rows * cols >= kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
    const std::size_t ia = r / br, ib = r % br;
    complex_t* row = out + r * cols;
    for (std::size_t ja = 0; ja < ac; ++ja) {
      const complex_t aij = a[ia * ac + ja];
      const complex_t* brow = b + ib * bc;
      complex_t* block = row + ja * bc;
      for (std::size_t jb = 0; jb < bc; ++jb) block[jb] = aij * brow[jb];
    }
  }
}

void matvec(const complex_t* a, const complex_t* v, complex_t* out,
            std::size_t n, std::size_t k) {
#pragma omp parallel for schedule(static) if (n * k >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    complex_t acc{};
    const complex_t* row = a + i * k;
    for (std::size_t j = 0; j < k; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
}

void partial_trace(const complex_t* in, std::span<const std::size_t> dims,
                   std::span<const unsigned char> keep_mask, complex_t* out) {
  const TraceLayout lay = make_trace_layout(dims, keep_mask);
  const std::size_t kd = lay.kept_dim, td = lay.traced_dim;
  std::size_t full = 1;
  for (std::size_t d : dims) full *= d;
  const std::size_t work = kd * kd * td;
#pragma omp parallel for collapse(2) schedule(static) \
    if (work >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(kd); ++i) {
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(kd); ++j) {
      complex_t acc{};
      const std::size_t ri = lay.kept_offsets[i], cj = lay.kept_offsets[j];
      for (std::size_t t = 0; t < td; ++t) {
        const std::size_t off = lay.traced_offsets[t];
        acc += in[(ri + off) * full + cj + off];
      }
      out[i * kd + j] = acc;
    }
  }
}

void gram_traced(std::span<const std::vector<complex_t>> vs, std::size_t keep,
                 std::size_t traced, complex_t* out) {
  const std::size_t work = keep * keep * traced * vs.size();
#pragma omp parallel for collapse(2) schedule(static) \
    if (work >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(keep); ++i) {
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(keep); ++j) {
      complex_t acc{};
      for (const auto& v : vs) {
        const complex_t* vi = v.data() + i * traced;
        const complex_t* vj = v.data() + j * traced;
        for (std::size_t t = 0; t < traced; ++t)
          acc += vi[t] * std::conj(vj[t]);
      }
      out[i * keep + j] = acc;
    }
  }
}

namespace serial {

void matmul(const complex_t* a, const complex_t* b, complex_t* c,
            std::size_t n, std::size_t k, std::size_t m) {
  for (std::size_t i = 0; i < n; ++i) {
    complex_t* row = c + i * m;
    for (std::size_t j = 0; j < m; ++j) row[j] = complex_t{};
    for (std::size_t p = 0; p < k; ++p) {
      const complex_t aip = a[i * k + p];
      if (aip == complex_t{}) continue;
      const complex_t* brow = b + p * m;
      for (std::size_t j = 0; j < m; ++j) row[j] += aip * brow[j];
    }
  }
}

void kron(const complex_t* a, std::size_t ar, std::size_t ac,
          const complex_t* b, std::size_t br, std::size_t bc, complex_t* out) {
  const std::size_t cols = ac * bc;
  for (std::size_t ia = 0; ia < ar; ++ia)
    for (std::size_t ib = 0; ib < br; ++ib)
      for (std::size_t ja = 0; ja < ac; ++ja)
        for (std::size_t jb = 0; jb < bc; ++jb)
          out[(ia * br + ib) * cols + ja * bc + jb] =
              a[ia * ac + ja] * b[ib * bc + jb];
}

void matvec(const complex_t* a, const complex_t* v, complex_t* out,
            std::size_t n, std::size_t k) {
  for (std::size_t i = 0; i < n; ++i) {
    complex_t acc{};
    for (std::size_t j = 0; j < k; ++j) acc += a[i * k + j] * v[j];
    out[i] = acc;
  }
}

// Walks every input entry, decomposing the full row/column indices into
// subsystem digits; intentionally different from the offset-table route.
void partial_trace(const complex_t* in, std::span<const std::size_t> dims,
                   std::span<const unsigned char> keep_mask, complex_t* out) {
  const std::size_t s = dims.size();
  std::size_t full = 1, kd = 1;
  for (std::size_t i = 0; i < s; ++i) {
    full *= dims[i];
    if (keep_mask[i]) kd *= dims[i];
  }
  for (std::size_t i = 0; i < kd * kd; ++i) out[i] = complex_t{};

  auto split = [&](std::size_t idx, std::size_t& kept, std::size_t& traced) {
    kept = 0;
    traced = 0;
    for (std::size_t i = 0; i < s; ++i) {
      std::size_t block = full;
      for (std::size_t j = 0; j <= i; ++j) block /= dims[j];
      const std::size_t digit = (idx / block) % dims[i];
      if (keep_mask[i])
        kept = kept * dims[i] + digit;
      else
        traced = traced * dims[i] + digit;
    }
  };

  for (std::size_t r = 0; r < full; ++r) {
    std::size_t rk, rt;
    split(r, rk, rt);
    for (std::size_t c = 0; c < full; ++c) {
      std::size_t ck, ct;
      split(c, ck, ct);
      if (rt == ct) out[rk * kd + ck] += in[r * full + c];
    }
  }
}

void gram_traced(std::span<const std::vector<complex_t>> vs, std::size_t keep,
                 std::size_t traced, complex_t* out) {
  for (std::size_t i = 0; i < keep; ++i) {
    for (std::size_t j = 0; j < keep; ++j) {
      complex_t acc{};
      for (const auto& v : vs)
        for (std::size_t t = 0; t < traced; ++t)
          acc += v[i * traced + t] * std::conj(v[j * traced + t]);
      out[i * keep + j] = acc;
    }
  }
}

}  // namespace serial

}  // namespace qmem::kernels
