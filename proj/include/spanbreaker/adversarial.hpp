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

// Problem instances with closed-form (or exactly solvable) minimizers:
// the tridiagonal worst-case chain and its n-block extension, the SDCA
// lower-bound instance, and dense quadratic sums with possibly indefinite
// components.

#ifndef SPANBREAKER_ADVERSARIAL_HPP
#define SPANBREAKER_ADVERSARIAL_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spanbreaker/problem.hpp"

namespace spanbreaker {

// f(x) = phi(x) + (sigma/2)|x|^2 with
// phi(x) = (L - sigma)/4 * ((1/2) <x, A x> - x_1) and A = tridiag(-1, 2, -1).
class ChainProblem final : public FiniteSumProblem {
 public:
  ChainProblem(double L, double sigma, std::size_t d,
               Regularizer psi = Regularizer::none());

  void local_gradient(std::size_t i, std::span<const double> x,
                      std::span<double> out) const override;
  double local_value(std::size_t i, std::span<const double> x) const override;
  double smooth_value(std::span<const double> x) const override;
  bool hessian_apply(std::span<const double> v, std::span<double> out) const override;
  std::string descriptor() const override;

  double L() const noexcept { return L_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double L_;
  double sigma_;
  double scale_;  // (L - sigma) / 4
};

// F(x) = sum_i (phi(x_i) + (sigma/2)|x|^2) over n blocks of size d_b. Component
// i is stored as n * (phi(x_i) + (sigma/2)|x|^2) so that the solver-side
// average (1/n) sum_i equals that sum: L_i = n L, mu = n sigma, and
// L_Q / mu = L / sigma.
class BlockProblem final : public FiniteSumProblem {
 public:
  BlockProblem(std::size_t n, double L, double sigma, std::size_t block_dim);

  Window window(std::size_t i) const override { return {i * block_dim_, block_dim_}; }
  void local_gradient(std::size_t i, std::span<const double> x,
                      std::span<double> out) const override;
  double local_value(std::size_t i, std::span<const double> x) const override;
  double smooth_value(std::span<const double> x) const override;
  bool hessian_apply(std::span<const double> v, std::span<double> out) const override;
  std::string descriptor() const override;

  std::size_t block_dim() const noexcept { return block_dim_; }
  double L() const noexcept { return L_; }
  double sigma() const noexcept { return sigma_; }
  double kappa() const noexcept { return L_ / sigma_; }

 private:
  std::size_t block_dim_;
  double L_;
  double sigma_;
  double scale_;  // (L - sigma) / 4
};

// Dense quadratic components f_i(x) = (1/2) x^T A_i x + b_i^T x. Lipschitz
// constants, L, mu and the minimizer are computed from the matrices.
class QuadraticSum final : public FiniteSumProblem {
 public:
  struct Data {
    std::size_t n = 0;
    std::size_t d = 0;
    Vector a;  // n blocks of d*d, row-major, symmetric
    Vector b;  // n blocks of d
  };

  static std::shared_ptr<const QuadraticSum> create(
      Data data, Regularizer psi = Regularizer::none(),
      std::string descriptor = "quadratic_sum");

  void local_gradient(std::size_t i, std::span<const double> x,
                      std::span<double> out) const override;
  double local_value(std::size_t i, std::span<const double> x) const override;
  double smooth_value(std::span<const double> x) const override;
  bool hessian_apply(std::span<const double> v, std::span<double> out) const override;
  std::string descriptor() const override { return descriptor_; }

  // True when some A_i has a negative eigenvalue.
  bool nonconvex_components() const noexcept { return nonconvex_; }
  std::span<const double> component_min_eigenvalues() const noexcept { return min_eig_; }
  std::span<const double> mean_hessian() const noexcept { return mean_a_; }
  std::span<const double> mean_linear() const noexcept { return mean_b_; }

  struct Spectral;

 private:
  QuadraticSum(Data data, const Spectral& spectral, Regularizer psi,
               std::string descriptor);

  Data data_;
  Vector mean_a_;
  Vector mean_b_;
  Vector min_eig_;
  bool nonconvex_ = false;
  std::string descriptor_;
};

// Components of the SDCA primal (1/2)(x^T y_i)^2 + (lambda/2)|x|^2 only touch
// the data through these column operations.
class SdcaColumns {
 public:
  virtual ~SdcaColumns() = default;
  virtual std::size_t count() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual double dot(std::size_t i, std::span<const double> x) const = 0;
  // x += a * y_i
  virtual void axpy(std::size_t i, double a, std::span<double> x) const = 0;
  virtual double sq_norm(std::size_t i) const = 0;
};

// y_i = c (n^2 e_i + 1), the columns of c (n^2 I + J); never materialized.
class StructuredColumns final : public SdcaColumns {
 public:
  StructuredColumns(std::size_t n, double c);
  std::size_t count() const override { return n_; }
  std::size_t dimension() const override { return n_; }
  double dot(std::size_t i, std::span<const double> x) const override;
  void axpy(std::size_t i, double a, std::span<double> x) const override;
  double sq_norm(std::size_t i) const override;

 private:
  std::size_t n_;
  double c_;
  double n2_;
};

class DenseColumns final : public SdcaColumns {
 public:
  // columns: n blocks of d entries
  DenseColumns(std::size_t n, std::size_t d, Vector columns);
  std::size_t count() const override { return n_; }
  std::size_t dimension() const override { return d_; }
  double dot(std::size_t i, std::span<const double> x) const override;
  void axpy(std::size_t i, double a, std::span<double> x) const override;
  double sq_norm(std::size_t i) const override;

 private:
  std::size_t n_;
  std::size_t d_;
  Vector y_;
};

class SdcaPrimal final : public FiniteSumProblem {
 public:
  SdcaPrimal(std::shared_ptr<const SdcaColumns> columns, double lambda,
             double smoothness, std::string descriptor);

  void local_gradient(std::size_t i, std::span<const double> x,
                      std::span<double> out) const override;
  double local_value(std::size_t i, std::span<const double> x) const override;
  bool hessian_apply(std::span<const double> v, std::span<double> out) const override;
  std::string descriptor() const override { return descriptor_; }

 private:
  std::shared_ptr<const SdcaColumns> columns_;
  std::string descriptor_;
};

enum class SdcaLoss { squared, logistic, hinge };

struct SdcaInstance {
  std::shared_ptr<const SdcaColumns> columns;
  std::shared_ptr<const SdcaPrimal> primal;
  double lambda = 0.0;
  SdcaLoss loss = SdcaLoss::squared;
  // Parameters of the structured instance; zero for generic data.
  std::size_t n = 0;
  double L = 0.0;
  double mu = 0.0;
  double c = 0.0;
};

// Generic instance over explicit columns (squared loss unless stated).
SdcaInstance make_sdca_instance(std::size_t n, std::size_t d, Vector columns,
                                double lambda, SdcaLoss loss = SdcaLoss::squared);

// -- generators -----------------------------------------------------------

std::shared_ptr<const ChainProblem> nesterov_chain(double L, double sigma,
                                                   std::size_t d);
std::shared_ptr<const BlockProblem> block_adversarial(std::size_t n, double L,
                                                      double sigma,
                                                      std::size_t block_dim);
SdcaInstance sdca_adversarial(std::size_t n, double L, double mu);
std::shared_ptr<const QuadraticSum> nonconvex_quadratic_sum(
    std::size_t n, std::size_t d, double mu, double L, double spread,
    std::uint64_t seed);

// -- closed forms ---------------------------------------------------------

// (q, q^2, ..., q^d) with q = (sqrt(kappa) - 1) / (sqrt(kappa) + 1).
Vector chain_minimizer(double kappa, std::size_t d);
double chain_ratio(double kappa);
// q_n = (s - 1) / (s + 1), s = sqrt((kappa - 1)/n + 1).
double block_ratio(std::size_t n, double kappa);
Vector block_minimizer(std::size_t n, double kappa, std::size_t block_dim);

// Exact solution of (A + shift I) x = e_1 on dimension d by elimination.
Vector solve_shifted_tridiagonal(std::size_t d, double shift);

// 1-based index of the last entry that is not exactly zero; 0 if none.
std::size_t last_nonzero(std::span<const double> x);
// last_nonzero of each of the x.size() / block_dim blocks.
std::vector<std::size_t> block_supports(std::span<const double> x,
                                        std::size_t block_dim);

// (1 - (1 - q_n^2)/n)^k
double span_floor(std::size_t n, double kappa, std::uint64_t k);

// Eigenvalue of the SDCA expectation operator on the all-ones vector.
double sdca_theta(std::size_t n, double L, double mu);
// (c^2 + 2 c^2 n) / (c^2 n^3 + 2 c^2 n + c^2 + mu)
double sdca_coupling(std::size_t n, double L, double mu);

}  // namespace spanbreaker

#endif  // SPANBREAKER_ADVERSARIAL_HPP
