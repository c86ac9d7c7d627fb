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

#include "spanbreaker/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace spanbreaker::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sq_norm_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double sq_dist_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = x[i] - y[i];
    s += e * e;
  }
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpby_scalar(double a, const double* x, double b, double* y,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void vr_step_scalar(double* w, const double* anchor, const double* mu,
                    double eta, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    w[i] -= eta * (mu[i] + c * (w[i] - anchor[i]));
}

void soft_threshold_scalar(const double* v, double t, double* out,
                           std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = v[i];
    out[i] = x > t ? x - t : (x < -t ? x + t : 0.0);
  }
}

void tridiag_apply_scalar(const double* x, double* out, std::size_t n) {
  if (n == 0) return;
  if (n == 1) {
    out[0] = 2.0 * x[0];
    return;
  }
  out[0] = 2.0 * x[0] - x[1];
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = 2.0 * x[i] - x[i - 1] - x[i + 1];
  out[n - 1] = 2.0 * x[n - 1] - x[n - 2];
}

constexpr KernelTable kScalar{
    "scalar",       dot_scalar,     sq_norm_scalar,        sq_dist_scalar,
    axpy_scalar,    axpby_scalar,   vr_step_scalar,        soft_threshold_scalar,
    tridiag_apply_scalar,
};

const KernelTable* pick_default() {
  if (const char* env = std::getenv("SPANBREAKER_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &kScalar;
  }
  if (const KernelTable* t = avx2_table()) return t;
  return &kScalar;
}

const KernelTable*& active_slot() {
  static const KernelTable* slot = pick_default();
  return slot;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable& active() { return *active_slot(); }

void set_active(const KernelTable& table) { active_slot() = &table; }

}  // namespace spanbreaker::kernels
