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

#ifndef BNLAB_SIMD_HPP_
#define BNLAB_SIMD_HPP_

#include <cstddef>

namespace bnlab::simd {

enum class Isa { kScalar, kAvx2 };

// Every variant produces bit-identical results to the scalar reference:
// elementwise kernels use the same operation order without fused
// multiply-add, and reductions accumulate in four interleaved lanes that
// are combined as (l0 + l1) + (l2 + l3) before the sequential tail.
struct Kernels {
  Isa isa;
  const char* name;
  // lw[j] -= 0.5 * (y - theta[j] * r)^2
  void (*gaussian_loglik_add)(double* lw, const double* theta, std::size_t n,
                              double y, double r);
  // lw[j] += add[j]
  void (*add)(double* lw, const double* add, std::size_t n);
  double (*max_value)(const double* x, std::size_t n);
  // x[j] += c
  void (*shift)(double* x, std::size_t n, double c);
  // out[j] = (intercept + slope * x[j]) - cost[j]
  void (*affine_scores)(double* out, const double* x, const double* cost,
                        std::size_t n, double intercept, double slope);
  // out[j] = (a2 * t[j] - a1) * t[j] + a0
  void (*quadratic_eval)(double* out, const double* t, std::size_t n,
                         double a2, double a1, double a0);
  // y[j] += a * x[j]
  void (*axpy)(double* y, const double* x, std::size_t n, double a);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // Writes indices j with x[j] >= threshold in ascending order, returns count.
  std::size_t (*indices_at_least)(const double* x, std::size_t n,
                                  double threshold, std::size_t* out);
};

const Kernels& scalar_kernels();
// nullptr when the binary or the CPU lacks AVX2.
const Kernels* avx2_kernels();
// Best supported variant; BNLAB_SIMD=scalar forces the reference kernels.
const Kernels& active();

inline void gaussian_loglik_add(double* lw, const double* theta, std::size_t n,
                                double y, double r) {
  active().gaussian_loglik_add(lw, theta, n, y, r);
}
inline void add(double* lw, const double* a, std::size_t n) {
  active().add(lw, a, n);
}
inline double max_value(const double* x, std::size_t n) {
  return active().max_value(x, n);
}
inline void shift(double* x, std::size_t n, double c) {
  active().shift(x, n, c);
}
inline void affine_scores(double* out, const double* x, const double* cost,
                          std::size_t n, double intercept, double slope) {
  active().affine_scores(out, x, cost, n, intercept, slope);
}
inline void quadratic_eval(double* out, const double* t, std::size_t n,
                           double a2, double a1, double a0) {
  active().quadratic_eval(out, t, n, a2, a1, a0);
}
inline void axpy(double* y, const double* x, std::size_t n, double a) {
  active().axpy(y, x, n, a);
}
inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline double sum(const double* x, std::size_t n) {
  return active().sum(x, n);
}
inline std::size_t indices_at_least(const double* x, std::size_t n,
                                    double threshold, std::size_t* out) {
  return active().indices_at_least(x, n, threshold, out);
}

}  // namespace bnlab::simd

#endif  // BNLAB_SIMD_HPP_
