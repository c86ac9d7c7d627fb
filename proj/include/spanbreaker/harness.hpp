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

// Experiment plumbing: rate fits, K(eps), expectation oracles, reference
// solves, the n vs n ln n speedup table and support tracking.

#ifndef SPANBREAKER_HARNESS_HPP
#define SPANBREAKER_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "spanbreaker/adversarial.hpp"
#include "spanbreaker/problem.hpp"
#include "spanbreaker/solvers.hpp"
#include "spanbreaker/trace.hpp"

namespace spanbreaker {

struct EpochWindow {
  std::uint64_t first = 0;
  std::uint64_t last = 0;
};

struct RateEstimate {
  double rho_hat = 0.0;
  EpochWindow window;
  double r_squared = 0.0;
};

// Least squares of ln(suboptimality) on epoch over the window; the default
// window is the last half of the recorded epochs. Points at or below zero
// end the window.
RateEstimate estimate_rate(const Trace& trace, std::optional<EpochWindow> window = std::nullopt);
// Same fit on an explicit (epoch, value) sequence.
RateEstimate estimate_rate(std::span<const double> epochs, std::span<const double> values);

// First grad_units with suboptimality <= eps.
std::optional<std::uint64_t> complexity_to_eps(const Trace& trace, double eps);

// T alpha in O(n) for the structured SDCA instance.
Vector sdca_expectation_step(const SdcaInstance& instance, std::span<const double> alpha);

struct ReferenceOptions {
  std::uint64_t max_grad_units = 2'000'000'000ULL;
  std::uint64_t seed = 0;
  std::optional<Vector> x0;
};

struct ReferenceSolution {
  Vector x;
  double value = 0.0;
  // Certified upper bound on F(x) - F*.
  double gap_bound = 0.0;
  std::uint64_t grad_units = 0;
};

// Upper bound on F(x) - F* from strong convexity: |grad F|^2 / (2 mu), with
// the gradient mapping at step 1/L standing in for the gradient when psi
// is nonzero.
double stationarity_bound(const FiniteSumProblem& problem, std::span<const double> x,
                          GradientMeter* meter = nullptr);

// Runs auto-parameter SVRG epochs until stationarity_bound <= target_tol.
ReferenceSolution reference_solve(const FiniteSumProblem& problem, double target_tol,
                                  const ReferenceOptions& options = {});

struct SpeedupOptions {
  std::vector<std::size_t> n_list;
  double alpha = 0.5;
  double beta = 0.5;
  std::vector<std::uint64_t> seeds;
  std::size_t block_dim = 4;
  std::uint64_t max_svrg_epochs = 200;
  std::uint64_t max_saga_passes = 500;
};

struct SpeedupRow {
  std::size_t n = 0;
  double kappa = 0.0;
  double eps = 0.0;
  std::uint64_t K_svrg = 0;
  std::uint64_t K_saga = 0;
  double ratio = 0.0;
  // Some seed never reached eps; the K columns then only average the rest.
  bool flagged = false;
};

// kappa = n^beta, mu = 1, eps = n^-alpha relative to F(0) - F*.
std::vector<SpeedupRow> speedup_experiment(const SpeedupOptions& options);

// Tracks I_{k,i} (how many gradients of component i have been seen) and
// checks N(x_i) <= I_{k,i} on every block after every step. Sampled steps
// add one to the sampled component, full passes add one to all.
class SupportTracker {
 public:
  SupportTracker(std::size_t blocks, std::size_t block_dim);

  void observe(const StepEvent& event);
  StepObserver observer();
  // Counts a full pass without a step, e.g. a table initialized at x0.
  void full_pass();

  std::span<const std::uint64_t> information() const noexcept { return info_; }
  std::uint64_t violations() const noexcept { return violations_; }
  std::optional<std::uint64_t> first_violation() const noexcept { return first_violation_; }
  std::optional<std::uint64_t> first_violation_epoch() const noexcept { return first_epoch_; }
  std::size_t max_excess() const noexcept { return max_excess_; }
  std::uint64_t steps() const noexcept { return steps_; }

 private:
  std::size_t blocks_;
  std::size_t block_dim_;
  std::vector<std::uint64_t> info_;
  std::vector<std::size_t> support_;
  std::uint64_t violations_ = 0;
  std::uint64_t steps_ = 0;
  std::optional<std::uint64_t> first_violation_;
  std::optional<std::uint64_t> first_epoch_;
  std::size_t max_excess_ = 0;
};

// Worker count: SPANBREAKER_THREADS if set and positive, else the number of
// logical cores.
std::size_t worker_count();

// Calls fn(i) for i in [0, count) over worker_count() threads. Every index
// runs exactly once; the first exception is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex guard;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace spanbreaker

#endif  // SPANBREAKER_HARNESS_HPP
