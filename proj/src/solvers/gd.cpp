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

#include "detail.hpp"
#include "spanbreaker/kernels.hpp"
#include "spanbreaker/solvers.hpp"

namespace spanbreaker {

SolveResult gradient_descent(const FiniteSumProblem& problem, double eta,
                             std::uint64_t iters, const GdOptions& options) {
  // eta = 0 is allowed and gives a constant trace.
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("step size must be >= 0");
  const std::size_t n = problem.components();
  const RunControl& ctl = options.control;
  const std::uint64_t every = std::max<std::uint64_t>(1, options.record_every);
  const bool prox = !problem.regularizer().is_none();

  SolveResult out;
  Trace& trace = out.trace;
  trace.meta.solver = "gd";
  trace.meta.config = "gd:eta=" + detail::num(eta) + ",iterations=" + std::to_string(iters);
  trace.meta.seed = 0;
  trace.meta.instance = problem.descriptor();
  detail::Recorder rec(problem, ctl.reference_value, trace, ctl.target_suboptimality);

  Vector x = detail::initial_point(problem, ctl);
  Vector g(problem.dimension());
  GradientMeter meter;
  rec.record(0, 0, x);
  std::uint64_t done = 0;
  for (std::uint64_t k = 0; k < iters; ++k) {
    if (rec.reached()) break;
    if (!detail::affordable(ctl.max_grad_units, meter.units(), n)) {
      trace.complete = false;
      break;
    }
    full_grad(problem, x, g, &meter);
    kernels::axpy(-eta, g, x);
    if (prox) prox_psi(problem.regularizer(), eta, x);
    done = k + 1;
    if (ctl.observer) ctl.observer(StepEvent{done, done, std::nullopt, true, x});
    if (done % every == 0 || done == iters) rec.record(meter.units(), done, x);
  }
  if (!trace.complete) rec.record(meter.units(), done, x);
  out.x = std::move(x);
  return out;
}

}  // namespace spanbreaker
