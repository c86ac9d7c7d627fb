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

#include "spanbreaker/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spanbreaker/errors.hpp"
#include "spanbreaker/kernels.hpp"

namespace spanbreaker {

Regularizer Regularizer::l1(double weight) {
  if (!(weight >= 0.0)) throw std::invalid_argument("l1 weight must be >= 0");
  return Regularizer(Kind::l1, weight);
}

Regularizer Regularizer::parse(std::string_view name, double weight) {
  if (name == "none") return none();
  if (name == "l1") return l1(weight);
  throw unsupported_feature("unsupported regularizer '" + std::string(name) +
                            "' (expected none or l1)");
}

double Regularizer::value(std::span<const double> x) const {
  if (kind_ == Kind::none || weight_ == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return weight_ * s;
}

std::string Regularizer::describe() const {
  if (kind_ == Kind::none) return "none";
  return "l1(" + std::to_string(weight_) + ")";
}

FiniteSumProblem::FiniteSumProblem(Constants c, Regularizer psi)
    : n_(c.n),
      d_(c.d),
      ridge_(c.ridge),
      lipschitz_(std::move(c.lipschitz)),
      smoothness_(c.smoothness),
      mu_(c.mu),
      psi_(psi) {
  if (n_ < 1) throw std::invalid_argument("problem needs n >= 1 components");
  if (d_ < 1) throw std::invalid_argument("problem needs dimension >= 1");
  if (lipschitz_.size() != n_)
    throw std::invalid_argument("need one Lipschitz constant per component");
  if (!(ridge_ >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
  for (double l : lipschitz_)
    if (!(l > 0.0) || !std::isfinite(l))
      throw std::invalid_argument("component Lipschitz constants must be positive");
  const double max_l = *std::max_element(lipschitz_.begin(), lipschitz_.end());
  constexpr double slack = 1.0 + 1e-12;
  if (!(mu_ > 0.0)) throw std::invalid_argument("strong convexity must be > 0");
  if (mu_ > smoothness_ * slack)
    throw std::invalid_argument("strong convexity exceeds smoothness");
  if (smoothness_ > max_l * slack)
    throw std::invalid_argument("L exceeds max_i L_i");
}

void FiniteSumProblem::finalize_windows() {
  max_window_ = 0;
  total_window_ = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    const Window w = window(i);
    if (w.begin + w.size > d_) throw std::logic_error("component window out of range");
    max_window_ = std::max(max_window_, w.size);
    total_window_ += w.size;
  }
}

double FiniteSumProblem::smooth_value(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += local_value(i, x);
  return s / static_cast<double>(n_) + 0.5 * ridge_ * kernels::sq_norm(x);
}

bool FiniteSumProblem::hessian_apply(std::span<const double>, std::span<double>) const {
  return false;
}

void FiniteSumProblem::component_gradient(std::size_t i, std::span<const double> x,
                                          std::span<double> out) const {
  if (x.size() != d_ || out.size() != d_)
    throw std::invalid_argument("component_gradient: dimension mismatch");
  const Window w = window(i);
  std::fill(out.begin(), out.end(), 0.0);
  local_gradient(i, x, out.subspan(w.begin, w.size));
  if (ridge_ != 0.0) kernels::axpy(ridge_, x, out);
}

Vector FiniteSumProblem::component_gradient(std::size_t i,
                                            std::span<const double> x) const {
  Vector g(d_);
  component_gradient(i, x, g);
  return g;
}

double FiniteSumProblem::component_value(std::size_t i,
                                         std::span<const double> x) const {
  return local_value(i, x) + 0.5 * ridge_ * kernels::sq_norm(x);
}

double FiniteSumProblem::objective(std::span<const double> x) const {
  if (x.size() != d_) throw std::invalid_argument("objective: dimension mismatch");
  return smooth_value(x) + psi_.value(x);
}

std::span<const double> FiniteSumProblem::minimizer() const {
  if (!minimizer_) throw std::logic_error("problem has no known minimizer");
  return *minimizer_;
}

double FiniteSumProblem::optimal_value() const {
  if (!minimizer_) throw std::logic_error("problem has no known minimizer");
  return optimal_value_;
}

void FiniteSumProblem::set_minimizer(Vector x_star) {
  if (x_star.size() != d_) throw std::invalid_argument("minimizer has wrong dimension");
  if (psi_.is_none()) {
    const Vector g = full_grad(*this, x_star);
    const double norm = std::sqrt(kernels::sq_norm(g));
    if (norm > tol_min(*this))
      throw std::invalid_argument("known minimizer is not stationary (|grad F| = " +
                                  std::to_string(norm) + ")");
  }
  optimal_value_ = objective(x_star);
  minimizer_ = std::move(x_star);
}

double FiniteSumProblem::suboptimality(std::span<const double> x) const {
  const auto x_star = minimizer();
  if (psi_.is_none()) {
    Vector e(d_);
    for (std::size_t j = 0; j < d_; ++j) e[j] = x[j] - x_star[j];
    Vector he(d_);
    if (hessian_apply(e, he)) return 0.5 * kernels::dot(e, he);
  }
  return objective(x) - optimal_value_;
}

double FiniteSumProblem::dist_sq(std::span<const double> x) const {
  return kernels::sq_dist(x, minimizer());
}

SamplingDistribution SamplingDistribution::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("distribution needs n >= 1");
  return SamplingDistribution(Vector(n, 1.0 / static_cast<double>(n)), true);
}

SamplingDistribution::SamplingDistribution(Vector p) : p_(std::move(p)) {
  if (p_.empty()) throw std::invalid_argument("distribution needs n >= 1");
  double s = 0.0;
  for (double v : p_) {
    if (!(v > 0.0)) throw std::invalid_argument("sampling probabilities must be > 0");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12)
    throw std::invalid_argument("sampling probabilities must sum to 1");
  uniform_ = std::all_of(p_.begin(), p_.end(), [&](double v) { return v == p_[0]; });
}

void full_grad(const FiniteSumProblem& problem, std::span<const double> x,
               std::span<double> out, GradientMeter* meter) {
  const std::size_t d = problem.dimension();
  const std::size_t n = problem.components();
  if (x.size() != d || out.size() != d)
    throw std::invalid_argument("full_grad: dimension mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  Vector local(problem.max_window());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Window w = problem.window(i);
    std::span<double> buf(local.data(), w.size);
    problem.local_gradient(i, x, buf);
    kernels::axpy(inv_n, buf, out.subspan(w.begin, w.size));
  }
  if (problem.ridge() != 0.0) kernels::axpy(problem.ridge(), x, out);
  if (meter) meter->add(n);
}

Vector full_grad(const FiniteSumProblem& problem, std::span<const double> x,
                 GradientMeter* meter) {
  Vector g(problem.dimension());
  full_grad(problem, x, g, meter);
  return g;
}

double effective_lipschitz(std::span<const double> lipschitz,
                           const SamplingDistribution& p) {
  if (lipschitz.size() != p.size())
    throw std::invalid_argument("distribution size does not match component count");
  const double n = static_cast<double>(lipschitz.size());
  double best = 0.0;
  for (std::size_t i = 0; i < lipschitz.size(); ++i) {
    if (!(p[i] > 0.0)) throw std::invalid_argument("zero sampling probability");
    best = std::max(best, lipschitz[i] / (p[i] * n));
  }
  return best;
}

double effective_lipschitz(const FiniteSumProblem& problem,
                           const SamplingDistribution& p) {
  return effective_lipschitz(problem.component_lipschitz(), p);
}

double effective_condition(const FiniteSumProblem& problem,
                           const SamplingDistribution& p) {
  return effective_lipschitz(problem, p) / problem.strong_convexity();
}

namespace {

SamplingDistribution normalized(Vector w) {
  for (double v : w)
    if (!(v > 0.0)) throw std::invalid_argument("Lipschitz constants must be > 0");
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= s;
  // Renormalization can leave the sum a few ulps away from 1; fold the
  // residual into the largest entry.
  const double r = 1.0 - std::accumulate(w.begin(), w.end(), 0.0);
  *std::max_element(w.begin(), w.end()) += r;
  return SamplingDistribution(std::move(w));
}

}  // namespace

SamplingDistribution importance_distribution(std::span<const double> lipschitz) {
  return normalized(Vector(lipschitz.begin(), lipschitz.end()));
}

SamplingDistribution importance_distribution(const FiniteSumProblem& problem) {
  return importance_distribution(problem.component_lipschitz());
}

SamplingDistribution nonconvex_importance_distribution(
    std::span<const double> lipschitz) {
  Vector w(lipschitz.begin(), lipschitz.end());
  for (double& v : w) v *= v;
  return normalized(std::move(w));
}

SamplingDistribution nonconvex_importance_distribution(
    const FiniteSumProblem& problem) {
  return nonconvex_importance_distribution(problem.component_lipschitz());
}

double lbar(std::span<const double> lipschitz, const SamplingDistribution& p) {
  if (lipschitz.size() != p.size())
    throw std::invalid_argument("distribution size does not match component count");
  const double n = static_cast<double>(lipschitz.size());
  double s = 0.0;
  for (std::size_t i = 0; i < lipschitz.size(); ++i) {
    if (!(p[i] > 0.0)) throw std::invalid_argument("zero sampling probability");
    s += lipschitz[i] * lipschitz[i] / (n * n * p[i]);
  }
  return std::sqrt(s);
}

double lbar(const FiniteSumProblem& problem, const SamplingDistribution& p) {
  return lbar(problem.component_lipschitz(), p);
}

void prox_psi(const Regularizer& psi, double eta, std::span<double> v) {
  if (!(eta > 0.0)) throw std::invalid_argument("prox step must be > 0");
  switch (psi.kind()) {
    case Regularizer::Kind::none:
      return;
    case Regularizer::Kind::l1:
      if (psi.weight() > 0.0) kernels::soft_threshold(v, eta * psi.weight(), v);
      return;
  }
  throw unsupported_feature("unsupported regularizer");
}

Vector prox_psi(const FiniteSumProblem& problem, double eta,
                std::span<const double> v) {
  Vector out(v.begin(), v.end());
  prox_psi(problem.regularizer(), eta, out);
  return out;
}

double tol_min(const FiniteSumProblem& problem) {
  const Vector zero(problem.dimension(), 0.0);
  const Vector g = problem.component_gradient(0, zero);
  return 1e-8 * std::max(1.0, std::sqrt(kernels::sq_norm(g)));
}

}  // namespace spanbreaker
