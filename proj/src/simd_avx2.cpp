// Copyright 2026 The bnlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <immintrin.h>

#include "simd_internal.hpp"

namespace bnlab::simd {
namespace {

inline double mx(double a, double b) { return a > b ? a : b; }

void gaussian_loglik_add_avx2(double* lw, const double* theta, std::size_t n,
                              double y, double r) {
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d vr = _mm256_set1_pd(r);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d d = _mm256_sub_pd(vy, _mm256_mul_pd(_mm256_loadu_pd(theta + j), vr));
    const __m256d q = _mm256_mul_pd(half, _mm256_mul_pd(d, d));
    _mm256_storeu_pd(lw + j, _mm256_sub_pd(_mm256_loadu_pd(lw + j), q));
  }
  for (; j < n; ++j) {
    const double d = y - theta[j] * r;
    lw[j] = lw[j] - 0.5 * (d * d);
  }
}

void add_avx2(double* lw, const double* a, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    _mm256_storeu_pd(lw + j, _mm256_add_pd(_mm256_loadu_pd(lw + j), _mm256_loadu_pd(a + j)));
  }
  for (; j < n; ++j) lw[j] = lw[j] + a[j];
}

double max_value_avx2(const double* x, std::size_t n) {
  std::size_t j = 0;
  double r;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (j = 4; j + 4 <= n; j += 4) {
      // max_pd(a, b) returns a when a > b, else b.
      acc = _mm256_max_pd(_mm256_loadu_pd(x + j), acc);
    }
    alignas(32) double l[4];
    _mm256_store_pd(l, acc);
    r = mx(mx(l[0], l[1]), mx(l[2], l[3]));
  } else {
    r = x[0];
    j = 1;
  }
  for (; j < n; ++j) r = mx(x[j], r);
  return r;
}

void shift_avx2(double* x, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    _mm256_storeu_pd(x + j, _mm256_add_pd(_mm256_loadu_pd(x + j), vc));
  }
  for (; j < n; ++j) x[j] = x[j] + c;
}

void affine_scores_avx2(double* out, const double* x, const double* cost,
                        std::size_t n, double intercept, double slope) {
  const __m256d vi = _mm256_set1_pd(intercept);
  const __m256d vs = _mm256_set1_pd(slope);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d v = _mm256_add_pd(vi, _mm256_mul_pd(vs, _mm256_loadu_pd(x + j)));
    _mm256_storeu_pd(out + j, _mm256_sub_pd(v, _mm256_loadu_pd(cost + j)));
  }
  for (; j < n; ++j) out[j] = (intercept + slope * x[j]) - cost[j];
}

void quadratic_eval_avx2(double* out, const double* t, std::size_t n, double a2,
                         double a1, double a0) {
  const __m256d v2 = _mm256_set1_pd(a2);
  const __m256d v1 = _mm256_set1_pd(a1);
  const __m256d v0 = _mm256_set1_pd(a0);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d vt = _mm256_loadu_pd(t + j);
    const __m256d inner = _mm256_sub_pd(_mm256_mul_pd(v2, vt), v1);
    _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_mul_pd(inner, vt), v0));
  }
  for (; j < n; ++j) out[j] = (a2 * t[j] - a1) * t[j] + a0;
}

void axpy_avx2(double* y, const double* x, std::size_t n, double a) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d p = _mm256_mul_pd(va, _mm256_loadu_pd(x + j));
    _mm256_storeu_pd(y + j, _mm256_add_pd(_mm256_loadu_pd(y + j), p));
  }
  for (; j < n; ++j) y[j] = y[j] + a * x[j];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j)));
  }
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  double r = (l[0] + l[1]) + (l[2] + l[3]);
  for (; j < n; ++j) r = r + a[j] * b[j];
  return r;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + j));
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  double r = (l[0] + l[1]) + (l[2] + l[3]);
  for (; j < n; ++j) r = r + x[j];
  return r;
}

std::size_t indices_at_least_avx2(const double* x, std::size_t n,
                                  double threshold, std::size_t* out) {
  const __m256d vt = _mm256_set1_pd(threshold);
  std::size_t c = 0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    int mask = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + j), vt, _CMP_GE_OQ));
    while (mask != 0) {
      const int k = __builtin_ctz(static_cast<unsigned>(mask));
      out[c++] = j + static_cast<std::size_t>(k);
      mask &= mask - 1;
    }
  }
  for (; j < n; ++j) {
    if (x[j] >= threshold) out[c++] = j;
  }
  return c;
}

const Kernels kAvx2 = {
    Isa::kAvx2,          "avx2",          gaussian_loglik_add_avx2,
    add_avx2,            max_value_avx2,  shift_avx2,
    affine_scores_avx2,  quadratic_eval_avx2, axpy_avx2,
    dot_avx2,            sum_avx2,        indices_at_least_avx2,
};

}  // namespace

const Kernels& avx2_table() { return kAvx2; }

}  // namespace bnlab::simd
