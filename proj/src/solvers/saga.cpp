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
#include "spanbreaker/rng.hpp"
#include "spanbreaker/solvers.hpp"

namespace spanbreaker {

// The table only holds windowed grad h_i. The shared ridge term is applied
// exactly at the current iterate, which keeps memory at O(sum of windows).
SolveResult saga(const FiniteSumProblem& problem, const SagaConfig& config) {
  const std::size_t n = problem.components();
  const std::size_t d = problem.dimension();
  const SamplingDistribution p = detail::resolve_sampling(problem, config.sampling);
  const double eta = config.eta ? *config.eta : 1.0 / (3.0 * effective_lipschitz(problem, p));
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("step size must be > 0");
  if (problem.total_window() > 4 * detail::kMaxPackedEntries)
    throw std::invalid_argument("gradient table too large");
  const RunControl& ctl = config.control;
  const std::uint64_t every = config.record_every == 0 ? n : config.record_every;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double ridge = problem.ridge();
  const bool prox = !problem.regularizer().is_none();

  SolveResult out;
  Trace& trace = out.trace;
  trace.meta.solver = "saga";
  trace.meta.config = "saga:eta=" + detail::num(eta) +
                      ",iterations=" + std::to_string(config.iterations) +
                      ",init=" + (config.table_init == TableInit::zero ? "zero" : "anchor") +
                      ",sampling=" + (p.is_uniform() ? "uniform" : "custom");
  trace.meta.seed = config.seed;
  trace.meta.instance = problem.descriptor();
  detail::Recorder rec(problem, ctl.reference_value, trace, ctl.target_suboptimality);

  Vector x = detail::initial_point(problem, ctl);
  const std::vector<std::size_t> offsets = detail::window_offsets(problem);
  Vector table(problem.total_window(), 0.0);
  Vector mean(d, 0.0);
  Vector tmp(problem.max_window());
  GradientMeter meter;

  rec.record(0, 0, x);
  if (config.table_init == TableInit::anchor) {
    if (!detail::affordable(ctl.max_grad_units, 0, n)) {
      trace.complete = false;
      out.x = std::move(x);
      return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Window win = problem.window(i);
      std::span<double> slot(table.data() + offsets[i], win.size);
      problem.local_gradient(i, x, slot);
      kernels::axpy(inv_n, slot, std::span<double>(mean).subspan(win.begin, win.size));
    }
    meter.add(n);
  }

  Rng rng(config.seed);
  IndexSampler sampler(p);
  std::uint64_t done = 0;
  for (std::uint64_t k = 0; k < config.iterations; ++k) {
    if (rec.reached()) break;
    if (!detail::affordable(ctl.max_grad_units, meter.units(), 1)) {
      trace.complete = false;
      break;
    }
    const std::size_t i = sampler(rng);
    const Window win = problem.window(i);
    const double s = 1.0 / (static_cast<double>(n) * p[i]);
    std::span<double> g(tmp.data(), win.size);
    std::span<double> slot(table.data() + offsets[i], win.size);
    problem.local_gradient(i, x, g);
    meter.add(1);
    // g <- grad h_i(x) - table_i, the table is refreshed after the step.
    kernels::axpy(-1.0, slot, g);
    std::span<double> xw = std::span<double>(x).subspan(win.begin, win.size);
    // Dense part: x <- x - eta (mean + ridge x)
    kernels::axpby(-eta, mean, 1.0 - eta * ridge, x);
    kernels::axpy(-eta * s, g, xw);
    if (prox) prox_psi(problem.regularizer(), eta, x);
    kernels::axpy(inv_n, g, std::span<double>(mean).subspan(win.begin, win.size));
    kernels::axpy(1.0, g, slot);
    done = k + 1;
    if (ctl.observer) ctl.observer(StepEvent{k + 1, k + 1, i, false, x});
    if ((k + 1) % every == 0 || k + 1 == config.iterations) rec.record(meter.units(), k + 1, x);
  }
  // A truncated run still reports where it stopped.
  if (!trace.complete) rec.record(meter.units(), done, x);
  out.x = std::move(x);
  return out;
}

}  // namespace spanbreaker
