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

#ifndef SPANBREAKER_TRACE_HPP
#define SPANBREAKER_TRACE_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace spanbreaker {

struct TracePoint {
  std::uint64_t grad_units = 0;
  // Outer counter of the solver: the epoch for SVRG/SARAH, the iteration
  // for SAGA, gradient descent and SDCA.
  std::uint64_t epoch = 0;
  double suboptimality = 0.0;
  // NaN when the problem has no known minimizer.
  double dist_sq = std::numeric_limits<double>::quiet_NaN();
};

struct TraceMeta {
  std::string solver;
  std::string config;
  std::uint64_t seed = 0;
  std::string instance;
};

struct Trace {
  std::vector<TracePoint> points;
  TraceMeta meta;
  bool complete = true;
  // Sampled M^k per epoch (SVRG/SARAH only).
  std::vector<std::uint64_t> epoch_lengths;

  const TracePoint& front() const { return points.front(); }
  const TracePoint& back() const { return points.back(); }
};

}  // namespace spanbreaker

#endif  // SPANBREAKER_TRACE_HPP
