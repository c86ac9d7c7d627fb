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
#include "spanbreaker/errors.hpp"
#include "spanbreaker/kernels.hpp"
#include "spanbreaker/rng.hpp"
#include "spanbreaker/solvers.hpp"

namespace spanbreaker {
namespace {

void validate(const FiniteSumProblem& problem, const SvrgConfig& c) {
  if (!(c.eta > 0.0) || !std::isfinite(c.eta))
    throw std::invalid_argument("step size must be > 0");
  if (!(c.m >= 1.0) || !std::isfinite(c.m))
    throw std::invalid_argument("epoch parameter m must be >= 1");
  if (c.epochs < 1) throw std::invalid_argument("need at least one epoch");
  (void)problem;
}

std::uint64_t trip_count(Rng& rng, const SvrgConfig& c) {
  if (c.epoch_mode == EpochMode::fixed)
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(c.m)));
  return sample_geometric(rng, c.m) + 1;
}

std::string echo(const char* name, const SvrgConfig& c) {
  return std::string(name) + ":eta=" + detail::num(c.eta) + ",m=" + detail::num(c.m) +
         ",mode=" + (c.epoch_mode == EpochMode::geometric ? "geometric" : "fixed") +
         ",epochs=" + std::to_string(c.epochs) +
         ",sampling=" + (c.sampling && !c.sampling->is_uniform() ? "custom" : "uniform");
}

}  // namespace

Vector variance_reduced_gradient(const FiniteSumProblem& problem,
                                 const SamplingDistribution& p, std::size_t i,
                                 std::span<const double> w,
                                 std::span<const double> anchor,
                                 std::span<const double> anchor_grad) {
  const std::size_t d = problem.dimension();
  Vector gw = problem.component_gradient(i, w);
  const Vector ga = problem.component_gradient(i, anchor);
  const double s = 1.0 / (static_cast<double>(problem.components()) * p[i]);
  for (std::size_t j = 0; j < d; ++j) gw[j] = anchor_grad[j] + s * (gw[j] - ga[j]);
  return gw;
}

SolveResult prox_svrg(const FiniteSumProblem& problem, const SvrgConfig& config) {
  validate(problem, config);
  const std::size_t n = problem.components();
  const std::size_t d = problem.dimension();
  const SamplingDistribution p = detail::resolve_sampling(problem, config.sampling);
  const RunControl& ctl = config.control;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double ridge = problem.ridge();
  const bool prox = !problem.regularizer().is_none();

  // The snapshot pass already evaluates every grad h_i(anchor); keeping the
  // windows makes each inner step cost one component gradient.
  const bool packed = problem.total_window() <= detail::kMaxPackedEntries;
  const std::vector<std::size_t> offsets = detail::window_offsets(problem);
  Vector cache(packed ? problem.total_window() : 0);

  Rng rng(config.seed);
  IndexSampler sampler(p);
  GradientMeter meter;

  SolveResult out;
  Trace& trace = out.trace;
  trace.meta.solver = "svrg";
  trace.meta.config = echo("svrg", config);
  trace.meta.seed = config.seed;
  trace.meta.instance = problem.descriptor();
  detail::Recorder rec(problem, ctl.reference_value, trace, ctl.target_suboptimality);

  Vector x = detail::initial_point(problem, ctl);
  Vector anchor(d), mu(d), w(d);
  Vector tmp(problem.max_window()), tmp_anchor(problem.max_window());
  std::uint64_t iteration = 0;
  rec.record(0, 0, x);

  for (std::uint64_t k = 0; k < config.epochs; ++k) {
    if (rec.reached()) break;
    const std::uint64_t trips = trip_count(rng, config);
    trace.epoch_lengths.push_back(trips - 1);
    if (!detail::affordable(ctl.max_grad_units, meter.units(), n + 1)) {
      trace.complete = false;
      break;
    }

    anchor = x;
    std::fill(mu.begin(), mu.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const Window win = problem.window(i);
      std::span<double> slot = packed ? std::span<double>(cache.data() + offsets[i], win.size)
                                      : std::span<double>(tmp.data(), win.size);
      problem.local_gradient(i, anchor, slot);
      kernels::axpy(inv_n, slot, std::span<double>(mu).subspan(win.begin, win.size));
    }
    if (ridge != 0.0) kernels::axpy(ridge, anchor, mu);
    meter.add(n);

    w = anchor;
    const std::uint64_t step_cost = packed ? 1 : 2;
    bool stopped = false;
    for (std::uint64_t t = 0; t < trips; ++t) {
      if (!detail::affordable(ctl.max_grad_units, meter.units(), step_cost)) {
        stopped = true;
        break;
      }
      const std::size_t i = sampler(rng);
      const Window win = problem.window(i);
      const double s = 1.0 / (static_cast<double>(n) * p[i]);
      std::span<double> gw(tmp.data(), win.size);
      problem.local_gradient(i, w, gw);
      if (packed) {
        kernels::axpy(-1.0, std::span<const double>(cache.data() + offsets[i], win.size), gw);
      } else {
        std::span<double> ga(tmp_anchor.data(), win.size);
        problem.local_gradient(i, anchor, ga);
        kernels::axpy(-1.0, ga, gw);
      }
      meter.add(step_cost);
      // Dense part: snapshot gradient plus the ridge difference.
      kernels::vr_step(w, anchor, mu, config.eta, s * ridge);
      kernels::axpy(-config.eta * s, gw, std::span<double>(w).subspan(win.begin, win.size));
      if (prox) prox_psi(problem.regularizer(), config.eta, w);
      ++iteration;
      if (ctl.observer) ctl.observer(StepEvent{iteration, k, i, false, w});
    }
    x = w;
    rec.record(meter.units(), k + 1, x);
    if (stopped) {
      trace.complete = false;
      break;
    }
  }
  out.x = std::move(x);
  return out;
}

SolveResult sarah(const FiniteSumProblem& problem, const SvrgConfig& config) {
  validate(problem, config);
  if (!problem.regularizer().is_none())
    throw unsupported_feature("sarah requires psi = none");
  const std::size_t n = problem.components();
  const std::size_t d = problem.dimension();
  const SamplingDistribution p = detail::resolve_sampling(problem, config.sampling);
  const RunControl& ctl = config.control;
  const double ridge = problem.ridge();

  Rng rng(config.seed);
  IndexSampler sampler(p);
  GradientMeter meter;

  SolveResult out;
  Trace& trace = out.trace;
  trace.meta.solver = "sarah";
  trace.meta.config = echo("sarah", config);
  trace.meta.seed = config.seed;
  trace.meta.instance = problem.descriptor();
  detail::Recorder rec(problem, ctl.reference_value, trace, ctl.target_suboptimality);

  Vector x = detail::initial_point(problem, ctl);
  Vector v(d), w(d), w_prev(d);
  Vector ga(problem.max_window()), gb(problem.max_window());
  std::uint64_t iteration = 0;
  rec.record(0, 0, x);

  for (std::uint64_t k = 0; k < config.epochs; ++k) {
    if (rec.reached()) break;
    const std::uint64_t trips = trip_count(rng, config);
    trace.epoch_lengths.push_back(trips - 1);
    if (!detail::affordable(ctl.max_grad_units, meter.units(), n)) {
      trace.complete = false;
      break;
    }
    full_grad(problem, x, v, &meter);
    w = x;
    kernels::axpy(-config.eta, v, w);
    ++iteration;
    if (ctl.observer) ctl.observer(StepEvent{iteration, k, std::nullopt, true, w});

    bool stopped = false;
    for (std::uint64_t t = 1; t < trips; ++t) {
      if (!detail::affordable(ctl.max_grad_units, meter.units(), 2)) {
        stopped = true;
        break;
      }
      const std::size_t i = sampler(rng);
      const Window win = problem.window(i);
      const double s = 1.0 / (static_cast<double>(n) * p[i]);
      // Recursive estimator v += (grad f_i(w) - grad f_i(w_prev)) / (n p_i).
      if (t == 1) w_prev = x;
      std::span<double> a(ga.data(), win.size), b(gb.data(), win.size);
      problem.local_gradient(i, w, a);
      problem.local_gradient(i, w_prev, b);
      meter.add(2);
      kernels::axpy(-1.0, b, a);
      kernels::axpy(s, a, std::span<double>(v).subspan(win.begin, win.size));
      if (ridge != 0.0) {
        kernels::axpy(s * ridge, w, v);
        kernels::axpy(-s * ridge, w_prev, v);
      }
      w_prev = w;
      kernels::axpy(-config.eta, v, w);
      ++iteration;
      if (ctl.observer) ctl.observer(StepEvent{iteration, k, i, false, w});
    }
    x = w;
    rec.record(meter.units(), k + 1, x);
    if (stopped) {
      trace.complete = false;
      break;
    }
  }
  out.x = std::move(x);
  return out;
}

}  // namespace spanbreaker
