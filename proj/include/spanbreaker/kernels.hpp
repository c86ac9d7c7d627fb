/* Copyright 2026 The Spanbreaker Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

// Dense double-precision kernels used by every solver inner loop.
//
// Each kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2+FMA variant. The active table is chosen once at first use from the
// CPU feature bits; SPANBREAKER_KERNELS=scalar forces the reference path.
// Variants agree to a few ulps and preserve exact zeros bit-for-bit, which the
// sparsity-pattern analysis on the adversarial instances relies on.

#ifndef SPANBREAKER_KERNELS_HPP
#define SPANBREAKER_KERNELS_HPP

#include <cstddef>
#include <span>

namespace spanbreaker::kernels {

struct KernelTable {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sq_norm)(const double* x, std::size_t n);
  double (*sq_dist)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = a * x + b * y
  void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);
  // w -= eta * (mu + c * (w - anchor))
  void (*vr_step)(double* w, const double* anchor, const double* mu, double eta,
                  double c, std::size_t n);
  // out = sign(v) * max(|v| - t, 0)
  void (*soft_threshold)(const double* v, double t, double* out, std::size_t n);
  // out = A x for the (2, -1) tridiagonal stencil with zero boundary
  void (*tridiag_apply)(const double* x, double* out, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

// The table used by the span wrappers below.
const KernelTable& active();

// Overrides the active table (tests and benchmarks). Not thread-safe with
// respect to concurrent kernel calls.
void set_active(const KernelTable& table);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sq_norm(std::span<const double> x) {
  return active().sq_norm(x.data(), x.size());
}
inline double sq_dist(std::span<const double> x, std::span<const double> y) {
  return active().sq_dist(x.data(), y.data(), x.size());
}
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}
inline void axpby(double a, std::span<const double> x, double b,
                  std::span<double> y) {
  active().axpby(a, x.data(), b, y.data(), x.size());
}
inline void vr_step(std::span<double> w, std::span<const double> anchor,
                    std::span<const double> mu, double eta, double c) {
  active().vr_step(w.data(), anchor.data(), mu.data(), eta, c, w.size());
}
inline void soft_threshold(std::span<const double> v, double t,
                           std::span<double> out) {
  active().soft_threshold(v.data(), t, out.data(), v.size());
}
inline void tridiag_apply(std::span<const double> x, std::span<double> out) {
  active().tridiag_apply(x.data(), out.data(), x.size());
}

}  // namespace spanbreaker::kernels

#endif  // SPANBREAKER_KERNELS_HPP
