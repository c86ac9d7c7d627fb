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

// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma on
// x86-64; avx2_table() only hands the table out after a CPUID check, so no
// instruction from here runs on hardware without the extensions.

#include "spanbreaker/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace spanbreaker::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4),
                         s1);
  }
  for (; i + 4 <= n; i += 4)
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sq_norm_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

double sq_dist_avx2(const double* x, const double* y, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d e0 = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    const __m256d e1 =
        _mm256_sub_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
    s0 = _mm256_fmadd_pd(e0, e0, s0);
    s1 = _mm256_fmadd_pd(e1, e1, s1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d e = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    s0 = _mm256_fmadd_pd(e, e, s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) {
    const double e = x[i] - y[i];
    s += e * e;
  }
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void axpby_avx2(double a, const double* x, double b, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), by));
  }
  for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void vr_step_avx2(double* w, const double* anchor, const double* mu, double eta,
                  double c, std::size_t n) {
  const __m256d veta = _mm256_set1_pd(eta);
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vw = _mm256_loadu_pd(w + i);
    const __m256d d = _mm256_sub_pd(vw, _mm256_loadu_pd(anchor + i));
    const __m256d g = _mm256_fmadd_pd(vc, d, _mm256_loadu_pd(mu + i));
    _mm256_storeu_pd(w + i, _mm256_fnmadd_pd(veta, g, vw));
  }
  for (; i < n; ++i) w[i] -= eta * (mu[i] + c * (w[i] - anchor[i]));
}

void soft_threshold_avx2(const double* v, double t, double* out, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(t);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d mag = _mm256_andnot_pd(sign, x);
    const __m256d shrunk = _mm256_max_pd(_mm256_sub_pd(mag, vt), zero);
    // Strictly-inside entries map to +0 like the scalar path.
    const __m256d keep = _mm256_cmp_pd(mag, vt, _CMP_GT_OQ);
    const __m256d r = _mm256_or_pd(shrunk, _mm256_and_pd(sign, x));
    _mm256_storeu_pd(out + i, _mm256_and_pd(keep, r));
  }
  for (; i < n; ++i) {
    const double x = v[i];
    out[i] = x > t ? x - t : (x < -t ? x + t : 0.0);
  }
}

void tridiag_apply_avx2(const double* x, double* out, std::size_t n) {
  if (n < 6) {
    scalar_table().tridiag_apply(x, out, n);
    return;
  }
  out[0] = 2.0 * x[0] - x[1];
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    const __m256d c = _mm256_loadu_pd(x + i);
    const __m256d l = _mm256_loadu_pd(x + i - 1);
    const __m256d r = _mm256_loadu_pd(x + i + 1);
    _mm256_storeu_pd(out + i,
                     _mm256_sub_pd(_mm256_sub_pd(_mm256_mul_pd(two, c), l), r));
  }
  for (; i + 1 < n; ++i) out[i] = 2.0 * x[i] - x[i - 1] - x[i + 1];
  out[n - 1] = 2.0 * x[n - 1] - x[n - 2];
}

constexpr KernelTable kAvx2{
    "avx2",       dot_avx2,     sq_norm_avx2,        sq_dist_avx2,
    axpy_avx2,    axpby_avx2,   vr_step_avx2,        soft_threshold_avx2,
    tridiag_apply_avx2,
};

}  // namespace

const KernelTable* avx2_table() {
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &kAvx2 : nullptr;
}

}  // namespace spanbreaker::kernels

#else

namespace spanbreaker::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace spanbreaker::kernels

#endif
