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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spanbreaker/solvers.hpp"

namespace spanbreaker {

SvrgParams optimal_svrg_params(double n, double kappa_Q, double L_Q) {
  if (!(n >= 0.0) || !(kappa_Q > 0.0) || !(L_Q > 0.0))
    throw std::invalid_argument("optimal_svrg_params: inputs must be positive");
  SvrgParams p;
  p.m = n + 121.0 * kappa_Q;
  p.eta = std::sqrt(kappa_Q / p.m) / (2.0 * L_Q);
  return p;
}

double theorem1_rate(double mu, double eta, double m, double L_Q) {
  if (!(mu > 0.0) || !(eta > 0.0) || !(m > 0.0) || !(L_Q > 0.0))
    throw std::invalid_argument("theorem1_rate: inputs must be positive");
  if (!(eta < 1.0 / (4.0 * L_Q)))
    throw std::invalid_argument("theorem1_rate: needs eta < 1/(4 L_Q)");
  return (1.0 + mu * eta * (1.0 + 4.0 * m * L_Q * eta)) /
         (mu * eta * m * (1.0 - 4.0 * L_Q * eta));
}

double corollary2_bound(double n, double kappa_Q) {
  if (!(kappa_Q > 0.0)) throw std::invalid_argument("corollary2_bound: kappa_Q must be > 0");
  return std::sqrt(100.0 / (121.0 + n / kappa_Q));
}

SvrgConfig auto_svrg_config(const FiniteSumProblem& problem, const SamplingDistribution& p,
                            std::uint64_t epochs, std::uint64_t seed) {
  const double lq = effective_lipschitz(problem, p);
  const double kq = lq / problem.strong_convexity();
  const SvrgParams params =
      optimal_svrg_params(static_cast<double>(problem.components()), kq, lq);
  SvrgConfig c;
  c.eta = params.eta;
  c.m = params.m;
  c.epochs = epochs;
  c.sampling = p;
  c.seed = seed;
  return c;
}

NonconvexParams nonconvex_svrg_params(double n, double L, double lbar, double mu, double m) {
  if (!(n > 0.0) || !(L > 0.0) || !(lbar > 0.0) || !(mu > 0.0) || !(m > 0.0))
    throw std::invalid_argument("nonconvex_svrg_params: inputs must be positive");
  NonconvexParams p;
  p.eta = 0.5 * std::min(1.0 / L, std::sqrt(1.0 / (lbar * lbar * m)));
  p.tau = 0.5 * m * p.eta * mu;
  p.rho = 1.0 / (1.0 + p.tau);
  return p;
}

}  // namespace spanbreaker
