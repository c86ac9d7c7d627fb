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

// Prox-SVRG with geometric or fixed epochs, SARAH, SAGA, proximal gradient
// descent and SDCA, plus the step-size/epoch-length selectors.

#ifndef SPANBREAKER_SOLVERS_HPP
#define SPANBREAKER_SOLVERS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spanbreaker/adversarial.hpp"
#include "spanbreaker/problem.hpp"
#include "spanbreaker/trace.hpp"

namespace spanbreaker {

enum class EpochMode { geometric, fixed };

// Emitted after every iterate update. `sampled` is the component drawn for
// the step; `full_pass` marks steps that used every component gradient
// (gradient descent). SVRG snapshots are not steps.
struct StepEvent {
  std::uint64_t iteration = 0;
  std::uint64_t epoch = 0;
  std::optional<std::size_t> sampled;
  bool full_pass = false;
  std::span<const double> x;
};
using StepObserver = std::function<void(const StepEvent&)>;

struct RunControl {
  std::optional<Vector> x0;
  std::optional<std::uint64_t> max_grad_units;
  // Used for suboptimality when the problem has no known minimizer.
  std::optional<double> reference_value;
  // Stop once a recorded suboptimality is at or below this.
  std::optional<double> target_suboptimality;
  StepObserver observer;
};

struct SvrgConfig {
  double eta = 0.0;
  double m = 1.0;
  EpochMode epoch_mode = EpochMode::geometric;
  std::uint64_t epochs = 1;
  std::optional<SamplingDistribution> sampling;  // uniform when empty
  std::uint64_t seed = 0;
  RunControl control;
};

struct SolveResult {
  Trace trace;
  Vector x;
};

// m = n + 121 kappa_Q, eta = sqrt(kappa_Q / m) / (2 L_Q).
struct SvrgParams {
  double m = 0.0;
  double eta = 0.0;
};
SvrgParams optimal_svrg_params(double n, double kappa_Q, double L_Q);

// (1 + mu eta (1 + 4 m L_Q eta)) / (mu eta m (1 - 4 L_Q eta)); needs eta < 1/(4 L_Q).
double theorem1_rate(double mu, double eta, double m, double L_Q);

// sqrt(100 / (121 + n / kappa_Q))
double corollary2_bound(double n, double kappa_Q);

// Convenience: the auto configuration for a problem and sampling distribution.
SvrgConfig auto_svrg_config(const FiniteSumProblem& problem,
                            const SamplingDistribution& p, std::uint64_t epochs,
                            std::uint64_t seed);

// One draw of the displayed estimator
//   anchor_grad + (grad f_i(w) - grad f_i(anchor)) / (n p_i).
Vector variance_reduced_gradient(const FiniteSumProblem& problem,
                                 const SamplingDistribution& p, std::size_t i,
                                 std::span<const double> w,
                                 std::span<const double> anchor,
                                 std::span<const double> anchor_grad);

SolveResult prox_svrg(const FiniteSumProblem& problem, const SvrgConfig& config);
SolveResult sarah(const FiniteSumProblem& problem, const SvrgConfig& config);

enum class TableInit { zero, anchor };

struct SagaConfig {
  std::optional<double> eta;  // 1 / (3 L_Q) when empty
  std::uint64_t iterations = 0;
  std::optional<SamplingDistribution> sampling;
  std::uint64_t seed = 0;
  TableInit table_init = TableInit::zero;
  std::uint64_t record_every = 0;  // 0 means n
  RunControl control;
};

SolveResult saga(const FiniteSumProblem& problem, const SagaConfig& config);

struct GdOptions {
  std::uint64_t record_every = 1;
  RunControl control;
};

SolveResult gradient_descent(const FiniteSumProblem& problem, double eta,
                             std::uint64_t iters, const GdOptions& options = {});

struct SdcaOptions {
  std::uint64_t record_every = 1;
  // Recompute x from alpha every this many steps and track the drift.
  std::uint64_t check_every = 64;
  std::optional<std::uint64_t> max_grad_units;
};

struct SdcaResult {
  Trace trace;
  Vector alpha;
  Vector x;
  // Dual objective D(alpha) at each recorded point.
  std::vector<double> dual_values;
  // Largest relative gap between the maintained x and (1/(lambda n)) sum alpha_i y_i.
  double max_primal_drift = 0.0;
};

// Exact coordinate minimizer of the dual for squared loss.
double sdca_coordinate_minimizer(double alpha_i, double y_sq_norm, double y_dot_x,
                                 double lambda, std::size_t n);
// x = (1/(lambda n)) sum_i alpha_i y_i
Vector sdca_primal_from_dual(const SdcaInstance& instance, std::span<const double> alpha);

SdcaResult sdca(const SdcaInstance& instance, std::span<const double> alpha0,
                std::uint64_t iters, std::uint64_t seed, const SdcaOptions& options = {});

struct NonconvexParams {
  double eta = 0.0;
  double tau = 0.0;  // (1/2) m eta mu
  double rho = 0.0;  // 1 / (1 + tau)
};
// eta = (1/2) min{1/L, (1/(lbar^2 m))^(1/2)}
NonconvexParams nonconvex_svrg_params(double n, double L, double lbar, double mu,
                                      double m);

}  // namespace spanbreaker

#endif  // SPANBREAKER_SOLVERS_HPP
