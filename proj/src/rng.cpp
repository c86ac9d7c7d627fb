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

#include "spanbreaker/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spanbreaker {

IndexSampler::IndexSampler(const SamplingDistribution& p)
    : uniform_(p.is_uniform()),
      flat_(0, p.size() - 1),
      weighted_(p.probabilities().begin(), p.probabilities().end()) {}

std::size_t IndexSampler::operator()(Rng& rng) {
  return uniform_ ? flat_(rng.engine()) : weighted_(rng.engine());
}

std::uint64_t sample_geometric(Rng& rng, double m) {
  if (!(m >= 1.0)) throw std::invalid_argument("geometric epoch mean must be >= 1");
  const double u = rng.uniform_open();
  if (m == 1.0) return 0;
  const double draw = std::floor(std::log(u) / std::log1p(-1.0 / m));
  if (draw >= static_cast<double>(std::numeric_limits<std::uint32_t>::max()))
    return std::numeric_limits<std::uint32_t>::max();
  return static_cast<std::uint64_t>(draw);
}

}  // namespace spanbreaker
