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

#ifndef SPANBREAKER_RNG_HPP
#define SPANBREAKER_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>

#include "spanbreaker/problem.hpp"

namespace spanbreaker {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Draws component indices i ~ P.
class IndexSampler {
 public:
  explicit IndexSampler(const SamplingDistribution& p);
  std::size_t operator()(Rng& rng);

 private:
  bool uniform_;
  std::uniform_int_distribution<std::size_t> flat_;
  std::discrete_distribution<std::size_t> weighted_;
};

// M ~ Geom(1/m) on {0, 1, 2, ...}, sampled as floor(ln U / ln(1 - 1/m)).
// The inner loop runs M + 1 steps, so the expected trip count is m.
std::uint64_t sample_geometric(Rng& rng, double m);

}  // namespace spanbreaker

#endif  // SPANBREAKER_RNG_HPP
