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

// Independent reference computations shared by the test binaries. Nothing
// here calls back into the code under test beyond the raw oracles.

#ifndef SPANBREAKER_TESTS_ORACLES_HPP
#define SPANBREAKER_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "spanbreaker/adversarial.hpp"
#include "spanbreaker/problem.hpp"
#include "spanbreaker/solvers.hpp"

namespace oracle {

using spanbreaker::FiniteSumProblem;
using spanbreaker::Vector;

inline Vector random_point(std::size_t d, std::mt19937_64& g, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  Vector x(d);
  for (auto& v : x) v = nd(g);
  return x;
}

// Central differences of component_value.
inline Vector fd_gradient(const FiniteSumProblem& p, std::size_t i, const Vector& x, double h = 1e-5) {
  Vector g(x.size()), y = x;
  for (std::size_t j = 0; j < x.size(); ++j) {
    y[j] = x[j] + h;
    const double fp = p.component_value(i, y);
    y[j] = x[j] - h;
    const double fm = p.component_value(i, y);
    y[j] = x[j];
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline double norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dist(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Component Hessian of a quadratic f_i by differencing its gradient along
// unit vectors (exact for quadratics up to round-off).
inline Eigen::MatrixXd component_hessian(const FiniteSumProblem& p, std::size_t i) {
  const std::size_t d = p.dimension();
  Eigen::MatrixXd H(d, d);
  const Vector zero(d, 0.0);
  const Vector g0 = p.component_gradient(i, zero);
  Vector e(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    e[j] = 1.0;
    const Vector g1 = p.component_gradient(i, e);
    for (std::size_t r = 0; r < d; ++r) H(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = g1[r] - g0[r];
    e[j] = 0.0;
  }
  return 0.5 * (H + H.transpose());
}

inline Eigen::MatrixXd average_hessian(const FiniteSumProblem& p) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.dimension()),
                                            static_cast<Eigen::Index>(p.dimension()));
  for (std::size_t i = 0; i < p.components(); ++i) H += component_hessian(p, i);
  return H / static_cast<double>(p.components());
}

// Minimizer of a strongly convex quadratic F by a dense solve.
inline Vector dense_minimizer(const FiniteSumProblem& p) {
  const std::size_t d = p.dimension();
  const Eigen::MatrixXd H = average_hessian(p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  const Vector zero(d, 0.0);
  for (std::size_t i = 0; i < p.components(); ++i) {
    const Vector g = p.component_gradient(i, zero);
    for (std::size_t r = 0; r < d; ++r) b(static_cast<Eigen::Index>(r)) += g[r];
  }
  b /= static_cast<double>(p.components());
  const Eigen::VectorXd x = H.ldlt().solve(-b);
  return Vector(x.data(), x.data() + x.size());
}

inline Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& H) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly).eigenvalues();
}

// Tridiagonal (2, -1) solve of (A + shift I) x = e_1 through a dense LU.
inline Vector dense_shifted_chain(std::size_t d, double shift) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, i) = 2.0 + shift;
    if (i > 0) A(i, i - 1) = -1.0;
    if (i + 1 < n) A(i, i + 1) = -1.0;
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(0) = 1.0;
  const Eigen::VectorXd x = A.partialPivLu().solve(e);
  return Vector(x.data(), x.data() + x.size());
}

// Exact mean of alpha^k over all n^k index sequences, one coordinate
// minimization per step written out from the definition.
inline Vector enumerate_mean(const spanbreaker::SdcaInstance& inst, const Vector& alpha0, int k) {
  const std::size_t n = alpha0.size();
  std::size_t seqs = 1;
  for (int t = 0; t < k; ++t) seqs *= n;
  Vector mean(n, 0.0);
  for (std::size_t code = 0; code < seqs; ++code) {
    Vector a = alpha0;
    std::size_t c = code;
    for (int t = 0; t < k; ++t, c /= n) {
      const std::size_t i = c % n;
      const Vector x = spanbreaker::sdca_primal_from_dual(inst, a);
      const double yy = inst.columns->sq_norm(i);
      const double q = yy / (inst.lambda * static_cast<double>(n));
      a[i] = (a[i] * q - inst.columns->dot(i, x)) / (1 + q);
    }
    for (std::size_t j = 0; j < n; ++j) mean[j] += a[j] / static_cast<double>(seqs);
  }
  return mean;
}

}  // namespace oracle

#endif  // SPANBREAKER_TESTS_ORACLES_HPP
