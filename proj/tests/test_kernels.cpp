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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "spanbreaker/kernels.hpp"

using namespace spanbreaker::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& g, double zero_rate = 0.0) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u;
  std::vector<double> v(n);
  for (auto& x : v) x = u(g) < zero_rate ? 0.0 : nd(g);
  return v;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b)); }

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1023};

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  std::mt19937_64 g(1);
  const KernelTable& s = scalar_table();
  for (std::size_t n : kSizes) {
    auto x = random_vec(n, g), y = random_vec(n, g);
    double dot = 0, sq = 0, sd = 0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += x[i] * y[i];
      sq += x[i] * x[i];
      sd += (x[i] - y[i]) * (x[i] - y[i]);
    }
    CHECK(close(s.dot(x.data(), y.data(), n), dot, 1e-14));
    CHECK(close(s.sq_norm(x.data(), n), sq, 1e-14));
    CHECK(close(s.sq_dist(x.data(), y.data(), n), sd, 1e-14));

    std::vector<double> out(n);
    if (n > 0) {
      s.tridiag_apply(x.data(), out.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        double e = 2 * x[i];
        if (i > 0) e -= x[i - 1];
        if (i + 1 < n) e -= x[i + 1];
        CHECK(close(out[i], e, 1e-15));
      }
    }
  }
}

TEST_CASE("vr_step and soft_threshold scalar semantics") {
  std::vector<double> w{1, 2, 3}, a{0.5, 0, -1}, mu{1, -1, 0};
  scalar_table().vr_step(w.data(), a.data(), mu.data(), 0.1, 2.0, 3);
  // w - eta (mu + c (w - anchor))
  CHECK(w[0] == doctest::Approx(1 - 0.1 * (1 + 2 * 0.5)));
  CHECK(w[1] == doctest::Approx(2 - 0.1 * (-1 + 2 * 2)));
  CHECK(w[2] == doctest::Approx(3 - 0.1 * (0 + 2 * 4)));
  std::vector<double> v{-2, -0.5, 0, 0.5, 2}, o(5);
  scalar_table().soft_threshold(v.data(), 1.0, o.data(), 5);
  CHECK(o == std::vector<double>{-1, 0, 0, 0, 1});
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const KernelTable* v = avx2_table();
  if (!v) {
    MESSAGE("no AVX2+FMA on this machine; equivalence not exercised");
    return;
  }
  const KernelTable& s = scalar_table();
  CHECK(std::string(v->name) != std::string(s.name));
  std::mt19937_64 g(7);
  for (std::size_t n : kSizes) {
    auto x = random_vec(n, g, 0.3), y = random_vec(n, g, 0.3), z = random_vec(n, g);
    CHECK(close(v->dot(x.data(), y.data(), n), s.dot(x.data(), y.data(), n), 1e-13));
    CHECK(close(v->sq_norm(x.data(), n), s.sq_norm(x.data(), n), 1e-13));
    CHECK(close(v->sq_dist(x.data(), y.data(), n), s.sq_dist(x.data(), y.data(), n), 1e-13));

    auto y1 = y, y2 = y;
    s.axpy(0.37, x.data(), y1.data(), n);
    v->axpy(0.37, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i], 1e-15));

    y1 = y, y2 = y;
    s.axpby(-1.5, x.data(), 0.25, y1.data(), n);
    v->axpby(-1.5, x.data(), 0.25, y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i], 1e-15));

    auto w1 = z, w2 = z;
    s.vr_step(w1.data(), x.data(), y.data(), 0.01, 3.0, n);
    v->vr_step(w2.data(), x.data(), y.data(), 0.01, 3.0, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(close(w1[i], w2[i], 1e-15));

    std::vector<double> o1(n), o2(n);
    s.soft_threshold(z.data(), 0.3, o1.data(), n);
    v->soft_threshold(z.data(), 0.3, o2.data(), n);
    CHECK(o1 == o2);

    if (n > 0) {
      s.tridiag_apply(x.data(), o1.data(), n);
      v->tridiag_apply(x.data(), o2.data(), n);
      // Same operation order: bitwise equal.
      CHECK(o1 == o2);
    }
  }
}

TEST_CASE("exact zeros survive every variant") {
  // Sparsity tracking needs zero entries to stay exactly zero.
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (avx2_table()) tables.push_back(avx2_table());
  for (const KernelTable* t : tables) {
    for (std::size_t n : kSizes) {
      if (n == 0) continue;
      std::vector<double> x(n, 0.0), y(n, 0.0), out(n, 1.0);
      for (std::size_t i = 0; i < n / 2; ++i) x[i] = y[i] = 1.0 + static_cast<double>(i);
      t->axpy(0.3, x.data(), y.data(), n);
      t->axpby(0.3, x.data(), 0.9, y.data(), n);
      std::vector<double> mu = x;
      t->vr_step(y.data(), x.data(), mu.data(), 0.1, 0.5, n);
      t->tridiag_apply(x.data(), out.data(), n);
      for (std::size_t i = n / 2 + 1; i < n; ++i) {
        CHECK(y[i] == 0.0);
        CHECK(out[i] == 0.0);
      }
    }
  }
}

TEST_CASE("active table can be switched") {
  const KernelTable& before = active();
  set_active(scalar_table());
  CHECK(&active() == &scalar_table());
  std::vector<double> a{1, 2, 3};
  CHECK(sq_norm(a) == 14.0);
  set_active(before);
}
