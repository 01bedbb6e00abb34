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

#include "bnlab/simd.hpp"

#include <cstdlib>
#include <cstring>

#include "simd_internal.hpp"

namespace bnlab::simd {
namespace {

inline double mx(double a, double b) { return a > b ? a : b; }

void gaussian_loglik_add_std(double* lw, const double* theta, std::size_t n,
                             double y, double r) {
  for (std::size_t j = 0; j < n; ++j) {
    const double d = y - theta[j] * r;
    lw[j] = lw[j] - 0.5 * (d * d);
  }
}

void add_std(double* lw, const double* a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) lw[j] = lw[j] + a[j];
}

double max_value_std(const double* x, std::size_t n) {
  std::size_t j = 0;
  double r;
  if (n >= 4) {
    double l[4] = {x[0], x[1], x[2], x[3]};
    for (j = 4; j + 4 <= n; j += 4) {
      for (int k = 0; k < 4; ++k) l[k] = mx(x[j + k], l[k]);
    }
    r = mx(mx(l[0], l[1]), mx(l[2], l[3]));
  } else {
    r = x[0];
    j = 1;
  }
  for (; j < n; ++j) r = mx(x[j], r);
  return r;
}

void shift_std(double* x, std::size_t n, double c) {
  for (std::size_t j = 0; j < n; ++j) x[j] = x[j] + c;
}

void affine_scores_std(double* out, const double* x, const double* cost,
                       std::size_t n, double intercept, double slope) {
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = (intercept + slope * x[j]) - cost[j];
  }
}

void quadratic_eval_std(double* out, const double* t, std::size_t n, double a2,
                        double a1, double a0) {
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = (a2 * t[j] - a1) * t[j] + a0;
  }
}

void axpy_std(double* y, const double* x, std::size_t n, double a) {
  for (std::size_t j = 0; j < n; ++j) y[j] = y[j] + a * x[j];
}

double dot_std(const double* a, const double* b, std::size_t n) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    for (int k = 0; k < 4; ++k) l[k] = l[k] + a[j + k] * b[j + k];
  }
  double r = (l[0] + l[1]) + (l[2] + l[3]);
  for (; j < n; ++j) r = r + a[j] * b[j];
  return r;
}

double sum_std(const double* x, std::size_t n) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    for (int k = 0; k < 4; ++k) l[k] = l[k] + x[j + k];
  }
  double r = (l[0] + l[1]) + (l[2] + l[3]);
  for (; j < n; ++j) r = r + x[j];
  return r;
}

std::size_t indices_at_least_std(const double* x, std::size_t n,
                                 double threshold, std::size_t* out) {
  std::size_t c = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (x[j] >= threshold) out[c++] = j;
  }
  return c;
}

const Kernels kScalar = {
    Isa::kScalar,         "scalar",       gaussian_loglik_add_std,
    add_std,              max_value_std,  shift_std,
    affine_scores_std,    quadratic_eval_std, axpy_std,
    dot_std,              sum_std,        indices_at_least_std,
};

const Kernels* select() {
  const char* force = std::getenv("BNLAB_SIMD");
  if (force != nullptr && std::strcmp(force, "scalar") == 0) return &kScalar;
  const Kernels* v = avx2_kernels();
  return v != nullptr ? v : &kScalar;
}

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

const Kernels* avx2_kernels() {
#if defined(__x86_64__) || defined(__i386__)
  if (__builtin_cpu_supports("avx2")) return &avx2_table();
#endif
  return nullptr;
}

const Kernels& active() {
  static const Kernels* chosen = select();
  return *chosen;
}

}  // namespace bnlab::simd
