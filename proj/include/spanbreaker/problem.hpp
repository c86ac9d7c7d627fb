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

// Finite-sum problems F(x) = (1/n) sum_i f_i(x) + psi(x).
//
// Every component is stored as f_i(x) = h_i(x) + (r/2)|x|^2 where r is a ridge
// coefficient shared by all components and grad h_i is supported on a
// contiguous index window. The split lets solvers keep per-component state in
// O(window) memory; component_gradient() still returns the full dense grad f_i.

#ifndef SPANBREAKER_PROBLEM_HPP
#define SPANBREAKER_PROBLEM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spanbreaker {

using Vector = std::vector<double>;

struct Window {
  std::size_t begin = 0;
  std::size_t size = 0;
};

class Regularizer {
 public:
  enum class Kind { none, l1 };

  static Regularizer none() { return Regularizer(Kind::none, 0.0); }
  static Regularizer l1(double weight);
  // Accepts "none" and "l1"; anything else is an unsupported_feature.
  static Regularizer parse(std::string_view name, double weight = 0.0);

  Kind kind() const noexcept { return kind_; }
  double weight() const noexcept { return weight_; }
  bool is_none() const noexcept { return kind_ == Kind::none; }
  double value(std::span<const double> x) const;
  std::string describe() const;

 private:
  Regularizer(Kind kind, double weight) : kind_(kind), weight_(weight) {}
  Kind kind_;
  double weight_;
};

class FiniteSumProblem {
 public:
  virtual ~FiniteSumProblem() = default;
  FiniteSumProblem(const FiniteSumProblem&) = delete;
  FiniteSumProblem& operator=(const FiniteSumProblem&) = delete;

  std::size_t components() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return d_; }
  double ridge() const noexcept { return ridge_; }
  std::span<const double> component_lipschitz() const noexcept { return lipschitz_; }
  double smoothness() const noexcept { return smoothness_; }
  double strong_convexity() const noexcept { return mu_; }
  const Regularizer& regularizer() const noexcept { return psi_; }

  virtual Window window(std::size_t /*i*/) const { return {0, d_}; }
  // out has window(i).size entries and receives grad h_i(x) on that window.
  virtual void local_gradient(std::size_t i, std::span<const double> x,
                              std::span<double> out) const = 0;
  virtual double local_value(std::size_t i, std::span<const double> x) const = 0;
  // f(x) = (1/n) sum_i f_i(x); instances override with O(d) versions.
  virtual double smooth_value(std::span<const double> x) const;
  // out = (Hessian of f) v for quadratic f; returns false otherwise.
  virtual bool hessian_apply(std::span<const double> v, std::span<double> out) const;
  virtual std::string descriptor() const = 0;

  void component_gradient(std::size_t i, std::span<const double> x,
                          std::span<double> out) const;
  Vector component_gradient(std::size_t i, std::span<const double> x) const;
  double component_value(std::size_t i, std::span<const double> x) const;
  double objective(std::span<const double> x) const;

  std::size_t max_window() const noexcept { return max_window_; }
  std::size_t total_window() const noexcept { return total_window_; }

  bool has_minimizer() const noexcept { return minimizer_.has_value(); }
  std::span<const double> minimizer() const;
  double optimal_value() const;
  // F(x) - F(x*). Quadratic problems with psi = none use (1/2) e^T H e on
  // e = x - x*, which stays accurate long after F(x) - F* hits round-off.
  double suboptimality(std::span<const double> x) const;
  double dist_sq(std::span<const double> x) const;

 protected:
  struct Constants {
    std::size_t n = 0;
    std::size_t d = 0;
    double ridge = 0.0;
    Vector lipschitz;
    double smoothness = 0.0;
    double mu = 0.0;
  };

  FiniteSumProblem(Constants constants, Regularizer psi);
  // Derived constructors call this last, once the oracles are usable.
  void set_minimizer(Vector x_star);
  void finalize_windows();

 private:
  std::size_t n_;
  std::size_t d_;
  double ridge_;
  Vector lipschitz_;
  double smoothness_;
  double mu_;
  Regularizer psi_;
  std::size_t max_window_ = 0;
  std::size_t total_window_ = 0;
  std::optional<Vector> minimizer_;
  double optimal_value_ = 0.0;
};

class SamplingDistribution {
 public:
  static SamplingDistribution uniform(std::size_t n);
  // Requires every p_i > 0 and sum p_i = 1 within 1e-12.
  explicit SamplingDistribution(Vector p);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  std::span<const double> probabilities() const noexcept { return p_; }
  bool is_uniform() const noexcept { return uniform_; }

 private:
  SamplingDistribution(Vector p, bool uniform) : p_(std::move(p)), uniform_(uniform) {}
  Vector p_;
  bool uniform_ = false;
};

// One component gradient = 1 unit; a full gradient = n units.
class GradientMeter {
 public:
  void add(std::uint64_t units) noexcept { units_ += units; }
  std::uint64_t units() const noexcept { return units_; }

 private:
  std::uint64_t units_ = 0;
};

void full_grad(const FiniteSumProblem& problem, std::span<const double> x,
               std::span<double> out, GradientMeter* meter = nullptr);
Vector full_grad(const FiniteSumProblem& problem, std::span<const double> x,
                 GradientMeter* meter = nullptr);

// L_Q = max_i L_i / (p_i n).
double effective_lipschitz(std::span<const double> lipschitz,
                           const SamplingDistribution& p);
double effective_lipschitz(const FiniteSumProblem& problem,
                           const SamplingDistribution& p);
double effective_condition(const FiniteSumProblem& problem,
                           const SamplingDistribution& p);

SamplingDistribution importance_distribution(std::span<const double> lipschitz);
SamplingDistribution importance_distribution(const FiniteSumProblem& problem);
SamplingDistribution nonconvex_importance_distribution(
    std::span<const double> lipschitz);
SamplingDistribution nonconvex_importance_distribution(
    const FiniteSumProblem& problem);

// (sum_i L_i^2 / (n^2 p_i))^(1/2)
double lbar(std::span<const double> lipschitz, const SamplingDistribution& p);
double lbar(const FiniteSumProblem& problem, const SamplingDistribution& p);

// argmin_y psi(y) + |y - v|^2 / (2 eta)
void prox_psi(const Regularizer& psi, double eta, std::span<double> v);
Vector prox_psi(const FiniteSumProblem& problem, double eta,
                std::span<const double> v);

// Stationarity tolerance used to validate known minimizers.
double tol_min(const FiniteSumProblem& problem);

}  // namespace spanbreaker

#endif  // SPANBREAKER_PROBLEM_HPP
