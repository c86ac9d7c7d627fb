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

#ifndef SPANBREAKER_SOLVERS_DETAIL_HPP
#define SPANBREAKER_SOLVERS_DETAIL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "spanbreaker/problem.hpp"
#include "spanbreaker/solvers.hpp"
#include "spanbreaker/trace.hpp"

namespace spanbreaker::detail {

class Recorder {
 public:
  Recorder(const FiniteSumProblem& problem, std::optional<double> reference, Trace& trace,
           std::optional<double> target = std::nullopt)
      : problem_(problem), reference_(reference), trace_(trace), target_(target) {}

  // Returns true once the stopping target has been met.
  bool record(std::uint64_t units, std::uint64_t epoch, std::span<const double> x) {
    if (!trace_.points.empty() && trace_.points.back().grad_units >= units) return reached_;
    TracePoint p;
    p.grad_units = units;
    p.epoch = epoch;
    if (problem_.has_minimizer()) {
      p.suboptimality = problem_.suboptimality(x);
      p.dist_sq = problem_.dist_sq(x);
    } else if (reference_) {
      p.suboptimality = problem_.objective(x) - *reference_;
    } else {
      p.suboptimality = std::numeric_limits<double>::quiet_NaN();
    }
    trace_.points.push_back(p);
    if (target_ && p.suboptimality <= *target_) reached_ = true;
    return reached_;
  }

  bool reached() const noexcept { return reached_; }

 private:
  const FiniteSumProblem& problem_;
  std::optional<double> reference_;
  Trace& trace_;
  std::optional<double> target_;
  bool reached_ = false;
};

inline bool affordable(const std::optional<std::uint64_t>& cap, std::uint64_t used,
                       std::uint64_t cost) {
  return !cap || used + cost <= *cap;
}

inline Vector initial_point(const FiniteSumProblem& problem, const RunControl& control) {
  if (!control.x0) return Vector(problem.dimension(), 0.0);
  if (control.x0->size() != problem.dimension())
    throw std::invalid_argument("x0 has wrong dimension");
  return *control.x0;
}

inline SamplingDistribution resolve_sampling(const FiniteSumProblem& problem,
                                             const std::optional<SamplingDistribution>& p) {
  if (!p) return SamplingDistribution::uniform(problem.components());
  if (p->size() != problem.components())
    throw std::invalid_argument("sampling distribution size does not match n");
  return *p;
}

// Offsets of each component window inside a packed per-component buffer.
inline std::vector<std::size_t> window_offsets(const FiniteSumProblem& problem) {
  std::vector<std::size_t> off(problem.components() + 1, 0);
  for (std::size_t i = 0; i < problem.components(); ++i)
    off[i + 1] = off[i] + problem.window(i).size;
  return off;
}

inline std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Packed per-component state larger than this falls back to recomputation.
inline constexpr std::size_t kMaxPackedEntries = std::size_t{1} << 25;

}  // namespace spanbreaker::detail

#endif  // SPANBREAKER_SOLVERS_DETAIL_HPP
