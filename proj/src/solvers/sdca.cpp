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
#include <limits>
#include <stdexcept>

#include "detail.hpp"
#include "spanbreaker/errors.hpp"
#include "spanbreaker/kernels.hpp"
#include "spanbreaker/rng.hpp"
#include "spanbreaker/solvers.hpp"

namespace spanbreaker {

double sdca_coordinate_minimizer(double alpha_i, double y_sq_norm, double y_dot_x,
                                 double lambda, std::size_t n) {
  const double a = y_sq_norm / (lambda * static_cast<double>(n));
  return (alpha_i * a - y_dot_x) / (1.0 + a);
}

Vector sdca_primal_from_dual(const SdcaInstance& instance, std::span<const double> alpha) {
  const SdcaColumns& cols = *instance.columns;
  const std::size_t n = cols.count();
  if (alpha.size() != n) throw std::invalid_argument("alpha has wrong size");
  Vector x(cols.dimension(), 0.0);
  const double scale = 1.0 / (instance.lambda * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    if (alpha[i] != 0.0) cols.axpy(i, scale * alpha[i], x);
  return x;
}

namespace {

// D(alpha) = (1/2n)|alpha|^2 + (lambda/2)|x(alpha)|^2, minimized by SDCA.
double dual_value(const SdcaInstance& instance, std::span<const double> alpha,
                  std::span<const double> x) {
  const double n = static_cast<double>(alpha.size());
  return 0.5 * kernels::sq_norm(alpha) / n + 0.5 * instance.lambda * kernels::sq_norm(x);
}

}  // namespace

SdcaResult sdca(const SdcaInstance& instance, std::span<const double> alpha0,
                std::uint64_t iters, std::uint64_t seed, const SdcaOptions& options) {
  if (instance.loss != SdcaLoss::squared)
    throw unsupported_feature("sdca supports the squared loss only");
  if (!instance.columns || !instance.primal) throw std::invalid_argument("empty SDCA instance");
  const SdcaColumns& cols = *instance.columns;
  const std::size_t n = cols.count();
  if (alpha0.size() != n) throw std::invalid_argument("alpha0 has wrong size");
  const double lambda = instance.lambda;
  const double scale_factor = 1.0 / (lambda * static_cast<double>(n));
  const std::uint64_t every = std::max<std::uint64_t>(1, options.record_every);

  SdcaResult out;
  Trace& trace = out.trace;
  trace.meta.solver = "sdca";
  trace.meta.config = "sdca:iterations=" + std::to_string(iters) + ",lambda=" + detail::num(lambda);
  trace.meta.seed = seed;
  trace.meta.instance = instance.primal->descriptor();
  detail::Recorder rec(*instance.primal, std::nullopt, trace);

  out.alpha.assign(alpha0.begin(), alpha0.end());
  out.x = sdca_primal_from_dual(instance, out.alpha);
  Vector& alpha = out.alpha;
  Vector& x = out.x;
  std::vector<double> y_sq(n);
  for (std::size_t i = 0; i < n; ++i) y_sq[i] = cols.sq_norm(i);

  auto record = [&](std::uint64_t units, std::uint64_t k) {
    const std::size_t before = trace.points.size();
    rec.record(units, k, x);
    if (trace.points.size() > before) out.dual_values.push_back(dual_value(instance, alpha, x));
  };
  record(0, 0);

  double mass = std::sqrt(kernels::sq_norm(x));
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uint64_t done = 0;
  for (std::uint64_t k = 0; k < iters; ++k) {
    if (options.max_grad_units && k + 1 > *options.max_grad_units) {
      trace.complete = false;
      break;
    }
    const std::size_t i = pick(rng.engine());
    const double z = sdca_coordinate_minimizer(alpha[i], y_sq[i], cols.dot(i, x), lambda, n);
    const double delta = z - alpha[i];
    alpha[i] = z;
    if (delta != 0.0) {
      cols.axpy(i, delta * scale_factor, x);
      mass += std::abs(delta * scale_factor) * std::sqrt(y_sq[i]);
    }
    done = k + 1;
    if (options.check_every != 0 && done % options.check_every == 0) {
      // Drift is measured against the total magnitude added since the last
      // resync, the scale of the accumulated round-off. Resyncing keeps that
      // round-off from lingering once x has shrunk.
      Vector fresh = sdca_primal_from_dual(instance, alpha);
      const double gap = std::sqrt(kernels::sq_dist(fresh, x));
      const double ref = std::max(mass, std::sqrt(kernels::sq_norm(fresh)));
      if (ref > 0.0) out.max_primal_drift = std::max(out.max_primal_drift, gap / ref);
      x = std::move(fresh);
      mass = std::sqrt(kernels::sq_norm(x));
    }
    if (done % every == 0 || done == iters) record(done, done);
  }
  if (!trace.complete) record(done, done);
  return out;
}

}  // namespace spanbreaker
