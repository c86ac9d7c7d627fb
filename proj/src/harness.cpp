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

#include "spanbreaker/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "spanbreaker/errors.hpp"
#include "spanbreaker/kernels.hpp"

namespace spanbreaker {

RateEstimate estimate_rate(std::span<const double> epochs, std::span<const double> values) {
  if (epochs.size() != values.size()) throw std::invalid_argument("epochs/values size mismatch");
  std::size_t used = 0;
  while (used < values.size() && values[used] > 0.0 && std::isfinite(values[used])) ++used;
  if (used < 3) throw insufficient_data("rate fit needs >= 3 positive points, got " + std::to_string(used));

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    mx += epochs[i];
    my += std::log(values[i]);
  }
  mx /= static_cast<double>(used);
  my /= static_cast<double>(used);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < used; ++i) {
    const double dx = epochs[i] - mx;
    const double dy = std::log(values[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw insufficient_data("rate fit needs distinct epochs");
  const double slope = sxy / sxx;
  RateEstimate r;
  r.rho_hat = std::exp(slope);
  r.window = {static_cast<std::uint64_t>(epochs.front()),
              static_cast<std::uint64_t>(epochs[used - 1])};
  // A flat sequence is fit exactly.
  r.r_squared = syy <= 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return r;
}

RateEstimate estimate_rate(const Trace& trace, std::optional<EpochWindow> window) {
  if (trace.points.empty()) throw insufficient_data("empty trace");
  EpochWindow w;
  if (window) {
    w = *window;
  } else {
    const std::uint64_t last = trace.points.back().epoch;
    w = {last / 2, last};
  }
  if (w.first > w.last) throw std::invalid_argument("rate window is reversed");
  std::vector<double> ep, val;
  for (const TracePoint& p : trace.points) {
    if (p.epoch < w.first || p.epoch > w.last) continue;
    ep.push_back(static_cast<double>(p.epoch));
    val.push_back(p.suboptimality);
  }
  return estimate_rate(ep, val);
}

std::optional<std::uint64_t> complexity_to_eps(const Trace& trace, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
  for (const TracePoint& p : trace.points)
    if (p.suboptimality <= eps) return p.grad_units;
  return std::nullopt;
}

Vector sdca_expectation_step(const SdcaInstance& instance, std::span<const double> alpha) {
  if (instance.n == 0) throw std::invalid_argument("expectation operator needs the structured instance");
  const std::size_t n = instance.n;
  if (alpha.size() != n) throw std::invalid_argument("alpha has wrong size");
  const double r = sdca_coupling(n, instance.L, instance.mu);
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (double a : alpha) total += a;
  // (1 - 1/n) a_i - r (sum_j a_j - a_i) / n
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (1.0 - 1.0 / nd) * alpha[i] - r * (total - alpha[i]) / nd;
  return out;
}

double stationarity_bound(const FiniteSumProblem& problem, std::span<const double> x,
                          GradientMeter* meter) {
  Vector g = full_grad(problem, x, meter);
  if (!problem.regularizer().is_none()) {
    const double step = 1.0 / problem.smoothness();
    Vector v(x.begin(), x.end());
    kernels::axpy(-step, g, v);
    prox_psi(problem.regularizer(), step, v);
    for (std::size_t j = 0; j < g.size(); ++j) g[j] = (x[j] - v[j]) / step;
  }
  return kernels::sq_norm(g) / (2.0 * problem.strong_convexity());
}

ReferenceSolution reference_solve(const FiniteSumProblem& problem, double target_tol,
                                  const ReferenceOptions& options) {
  if (std::isnan(target_tol) || !(target_tol > 0.0))
    throw std::invalid_argument("target_tol must be > 0");
  ReferenceSolution sol;
  sol.x = options.x0 ? *options.x0 : Vector(problem.dimension(), 0.0);
  if (sol.x.size() != problem.dimension()) throw std::invalid_argument("x0 has wrong dimension");
  if (std::isinf(target_tol)) {
    sol.value = problem.objective(sol.x);
    sol.gap_bound = std::numeric_limits<double>::infinity();
    return sol;
  }

  const SamplingDistribution p = importance_distribution(problem);
  GradientMeter meter;
  double bound = stationarity_bound(problem, sol.x, &meter);
  double best = bound;
  for (std::uint64_t epoch = 0; bound > target_tol; ++epoch) {
    SvrgConfig cfg = auto_svrg_config(problem, p, 1, options.seed + epoch);
    const std::uint64_t used = meter.units();
    if (used >= options.max_grad_units) {
      throw budget_exceeded("reference_solve: " + std::to_string(used) +
                            " gradient units spent, bound " + std::to_string(bound) +
                            " (best " + std::to_string(best) + ") > tol " +
                            std::to_string(target_tol));
    }
    cfg.control.x0 = sol.x;
    cfg.control.max_grad_units = options.max_grad_units - used;
    SolveResult r = prox_svrg(problem, cfg);
    meter.add(r.trace.back().grad_units);
    sol.x = std::move(r.x);
    bound = stationarity_bound(problem, sol.x, &meter);
    best = std::min(best, bound);
  }
  sol.value = problem.objective(sol.x);
  sol.gap_bound = bound;
  sol.grad_units = meter.units();
  return sol;
}

std::vector<SpeedupRow> speedup_experiment(const SpeedupOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0) || !(options.beta > 0.0 && options.beta < 1.0))
    throw std::invalid_argument("alpha and beta must lie in (0, 1)");
  if (options.n_list.empty()) throw std::invalid_argument("n_list is empty");
  if (options.seeds.empty()) throw std::invalid_argument("seed list is empty");
  for (std::size_t i = 1; i < options.n_list.size(); ++i)
    if (options.n_list[i] <= options.n_list[i - 1])
      throw std::invalid_argument("n_list must be increasing");

  std::vector<SpeedupRow> rows;
  for (std::size_t n : options.n_list) {
    if (n < 2) throw std::invalid_argument("speedup needs n >= 2");
    const double nd = static_cast<double>(n);
    const double kappa = std::pow(nd, options.beta);
    if (!(kappa > 1.0)) throw std::invalid_argument("kappa must exceed 1");
    // mu = n sigma = 1 and L_Q = n L = kappa.
    auto problem = block_adversarial(n, kappa / nd, 1.0 / nd, options.block_dim);
    const SamplingDistribution uniform = SamplingDistribution::uniform(n);
    const Vector x0(problem->dimension(), 0.0);
    const double eps = std::pow(nd, -options.alpha);
    const double target = eps * problem->suboptimality(x0);

    const std::size_t s = options.seeds.size();
    std::vector<std::optional<std::uint64_t>> k_svrg(s), k_saga(s);
    parallel_for(2 * s, [&](std::size_t job) {
      const std::uint64_t seed = options.seeds[job % s];
      if (job < s) {
        SvrgConfig cfg = auto_svrg_config(*problem, uniform, options.max_svrg_epochs, seed);
        cfg.control.target_suboptimality = target;
        k_svrg[job] = complexity_to_eps(prox_svrg(*problem, cfg).trace, target);
      } else {
        SagaConfig cfg;
        cfg.iterations = options.max_saga_passes * n;
        cfg.seed = seed;
        cfg.record_every = std::max<std::uint64_t>(1, n / 64);
        cfg.control.target_suboptimality = target;
        k_saga[job - s] = complexity_to_eps(saga(*problem, cfg).trace, target);
      }
    });

    SpeedupRow row;
    row.n = n;
    row.kappa = kappa;
    row.eps = eps;
    auto mean = [&](const std::vector<std::optional<std::uint64_t>>& ks) {
      double sum = 0.0;
      std::size_t hits = 0;
      for (const auto& k : ks) {
        if (k) {
          sum += static_cast<double>(*k);
          ++hits;
        } else {
          row.flagged = true;
        }
      }
      return hits == 0 ? std::uint64_t{0} : static_cast<std::uint64_t>(std::llround(sum / hits));
    };
    row.K_svrg = mean(k_svrg);
    row.K_saga = mean(k_saga);
    row.ratio = row.K_svrg == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : static_cast<double>(row.K_saga) / static_cast<double>(row.K_svrg);
    rows.push_back(row);
  }
  return rows;
}

SupportTracker::SupportTracker(std::size_t blocks, std::size_t block_dim)
    : blocks_(blocks), block_dim_(block_dim), info_(blocks, 0), support_(blocks, 0) {
  if (blocks == 0 || block_dim == 0) throw std::invalid_argument("empty support tracker");
}

void SupportTracker::full_pass() {
  for (auto& v : info_) ++v;
}

void SupportTracker::observe(const StepEvent& e) {
  if (e.x.size() != blocks_ * block_dim_) throw std::invalid_argument("iterate size mismatch");
  if (e.full_pass) {
    full_pass();
  } else if (e.sampled) {
    if (*e.sampled >= blocks_) throw std::out_of_range("sampled index out of range");
    ++info_[*e.sampled];
  }
  ++steps_;
  for (std::size_t b = 0; b < blocks_; ++b) {
    const std::size_t N = last_nonzero(e.x.subspan(b * block_dim_, block_dim_));
    support_[b] = N;
    if (N > info_[b]) {
      ++violations_;
      max_excess_ = std::max<std::size_t>(max_excess_, N - info_[b]);
      if (!first_violation_) {
        first_violation_ = e.iteration;
        first_epoch_ = e.epoch;
      }
    }
  }
}

StepObserver SupportTracker::observer() {
  return [this](const StepEvent& e) { observe(e); };
}

std::size_t worker_count() {
  if (const char* env = std::getenv("SPANBREAKER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace spanbreaker
