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

#include "oracles.hpp"
#include "spanbreaker/adversarial.hpp"
#include "spanbreaker/errors.hpp"
#include "spanbreaker/problem.hpp"
#include "spanbreaker/rng.hpp"

using namespace spanbreaker;

namespace {

// f_i(x) = (1/2) a_i x^2 + b_i x on one coordinate.
std::shared_ptr<const QuadraticSum> scalar_sum(Vector a, Vector b) {
  QuadraticSum::Data data;
  data.n = a.size();
  data.d = 1;
  data.a = std::move(a);
  data.b = std::move(b);
  return QuadraticSum::create(std::move(data));
}

}  // namespace

TEST_CASE("full_grad examples") {
  auto chain = nesterov_chain(4.0, 1.0, 8);
  GradientMeter meter;
  const Vector g = full_grad(*chain, Vector(8, 0.0), &meter);
  CHECK(g[0] == doctest::Approx(-0.75));
  for (std::size_t j = 1; j < 8; ++j) CHECK(g[j] == 0.0);
  CHECK(meter.units() == 1);

  // f1 = x^2/2, f2 = x^2 - x at x = 1
  auto two = scalar_sum({1.0, 2.0}, {0.0, -1.0});
  GradientMeter m2;
  CHECK(full_grad(*two, Vector{1.0}, &m2)[0] == doctest::Approx(1.0));
  CHECK(m2.units() == 2);

  CHECK(oracle::norm(full_grad(*chain, Vector(chain->minimizer().begin(), chain->minimizer().end()))) <=
        tol_min(*chain));
  CHECK_THROWS_AS(full_grad(*chain, Vector(3, 0.0)), std::invalid_argument);
}

TEST_CASE("effective Lipschitz constant") {
  const Vector L3{1, 2, 3};
  CHECK(effective_lipschitz(Vector{2, 2, 2}, SamplingDistribution::uniform(3)) == doctest::Approx(2.0));
  CHECK(effective_lipschitz(L3, SamplingDistribution({1.0 / 6, 1.0 / 3, 0.5})) == doctest::Approx(2.0));
  CHECK(effective_lipschitz(Vector{1, 3}, SamplingDistribution::uniform(2)) == doctest::Approx(3.0));

  // Importance sampling gives the mean of L_i.
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int rep = 0; rep < 20; ++rep) {
    Vector L(1 + rep * 3);
    double mean = 0;
    for (auto& v : L) mean += (v = u(g));
    mean /= static_cast<double>(L.size());
    const double LQ = effective_lipschitz(L, importance_distribution(L));
    CHECK(std::abs(LQ - mean) <= 1e-12 * mean);
  }
  auto two = scalar_sum({1.0, 3.0}, {0.0, 0.0});
  CHECK(effective_condition(*two, SamplingDistribution::uniform(2)) == doctest::Approx(3.0 / 2.0));
}

TEST_CASE("sampling distributions") {
  auto p = importance_distribution(Vector{1, 1, 1});
  for (std::size_t i = 0; i < 3; ++i) CHECK(p[i] == doctest::Approx(1.0 / 3));
  p = importance_distribution(Vector{1, 2, 3});
  CHECK(p[0] == doctest::Approx(1.0 / 6));
  CHECK(p[1] == doctest::Approx(1.0 / 3));
  CHECK(p[2] == doctest::Approx(0.5));
  CHECK(importance_distribution(Vector{5})[0] == 1.0);

  auto q = nonconvex_importance_distribution(Vector{1, 1});
  CHECK(q[0] == doctest::Approx(0.5));
  q = nonconvex_importance_distribution(Vector{1, 2});
  CHECK(q[0] == doctest::Approx(0.2));
  CHECK(q[1] == doctest::Approx(0.8));
  CHECK(nonconvex_importance_distribution(Vector{3})[0] == 1.0);

  CHECK_THROWS_AS(SamplingDistribution({0.5, 0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SamplingDistribution({0.6, 0.5}), std::invalid_argument);
  CHECK_NOTHROW(SamplingDistribution({0.5, 0.5 + 5e-13}));
  CHECK(SamplingDistribution::uniform(4).is_uniform());
}

TEST_CASE("lbar") {
  CHECK(lbar(Vector{2, 2, 2, 2}, SamplingDistribution::uniform(4)) == doctest::Approx(2.0));
  const Vector L{1, 2};
  CHECK(lbar(L, nonconvex_importance_distribution(L)) == doctest::Approx(std::sqrt(2.5)));
  CHECK(lbar(Vector{7}, SamplingDistribution::uniform(1)) == doctest::Approx(7.0));
}

TEST_CASE("prox of psi") {
  Vector v{1, -2};
  prox_psi(Regularizer::none(), 0.7, v);
  CHECK(v == Vector{1, -2});

  Vector w{1, -0.2, 0};
  prox_psi(Regularizer::l1(1.0), 0.5, w);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == 0.0);
  CHECK(w[2] == 0.0);

  Vector z{0.3, -4, 1e-9};
  prox_psi(Regularizer::l1(0.0), 2.0, z);
  CHECK(z == Vector{0.3, -4, 1e-9});

  CHECK_THROWS_AS(Regularizer::parse("l2", 1.0), unsupported_feature);

  // One-dimensional grid search oracle for argmin |y| lam + (y - v)^2 / (2 eta).
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int rep = 0; rep < 50; ++rep) {
    const double lam = std::abs(u(g)) / 2, eta = std::abs(u(g)) / 3 + 0.01, v0 = u(g);
    double best = 0, best_val = 1e300;
    for (int k = -60000; k <= 60000; ++k) {
      const double y = k * 1e-4;
      const double val = lam * std::abs(y) + (y - v0) * (y - v0) / (2 * eta);
      if (val < best_val) best_val = val, best = y;
    }
    Vector x{v0};
    prox_psi(Regularizer::l1(lam), eta, x);
    CHECK(std::abs(x[0] - best) <= 1e-4);
  }
}

TEST_CASE("prox is non-expansive") {
  std::mt19937_64 g(5);
  for (int rep = 0; rep < 200; ++rep) {
    Vector a = oracle::random_point(7, g, 2.0), b = oracle::random_point(7, g, 2.0);
    const double before = oracle::dist(a, b);
    prox_psi(Regularizer::l1(0.8), 0.9, a);
    prox_psi(Regularizer::l1(0.8), 0.9, b);
    CHECK(oracle::dist(a, b) <= before * (1 + 1e-15));
  }
}

TEST_CASE("problem invariants are enforced") {
  // mu > L is rejected by the base class through QuadraticSum's constants.
  CHECK_THROWS_AS(nesterov_chain(1.0, 2.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(nesterov_chain(2.0, 1.0, 1), std::invalid_argument);
  auto two = scalar_sum({1.0, 2.0}, {0.0, -1.0});
  CHECK(two->components() == 2);
  CHECK(two->dimension() == 1);
  const double mu = two->strong_convexity(), L = two->smoothness();
  CHECK(mu > 0);
  CHECK(mu <= L);
  CHECK(L <= 2.0 * (1 + 1e-12));
  Vector lo{two->minimizer()[0]};
  std::mt19937_64 g(2);
  for (int k = 0; k < 50; ++k) CHECK(two->objective(oracle::random_point(1, g)) >= two->objective(lo));
  CHECK_THROWS_AS(two->component_gradient(0, Vector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("geometric epoch sampler") {
  for (double m : {1.5, 4.0, 37.0, 1000.0}) {
    Rng rng(42);
    const int N = 100000;
    double sum = 0;
    for (int k = 0; k < N; ++k) sum += static_cast<double>(sample_geometric(rng, m) + 1);
    const double mean = sum / N;
    const double se = std::sqrt(m * (m - 1) / N);
    CHECK(std::abs(mean - m) <= 3 * se);
  }
  Rng rng(1);
  for (int k = 0; k < 100; ++k) CHECK(sample_geometric(rng, 1.0) == 0);
  CHECK_THROWS_AS(sample_geometric(rng, 0.5), std::invalid_argument);

  // Same seed, same sequence.
  Rng a(9), b(9);
  for (int k = 0; k < 1000; ++k) CHECK(sample_geometric(a, 12.5) == sample_geometric(b, 12.5));
}

TEST_CASE("uniform_open stays inside (0, 1)") {
  Rng rng(0);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("index sampler frequencies") {
  const SamplingDistribution p({0.1, 0.2, 0.3, 0.4});
  IndexSampler s(p);
  Rng rng(4);
  std::vector<int> count(4, 0);
  const int N = 200000;
  for (int k = 0; k < N; ++k) ++count[s(rng)];
  for (std::size_t i = 0; i < 4; ++i) {
    const double se = std::sqrt(p[i] * (1 - p[i]) / N);
    CHECK(std::abs(count[i] / double(N) - p[i]) <= 4 * se);
  }
}
