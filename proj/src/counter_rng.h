// Copyright 2026 The Polyform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLYFORM_SRC_COUNTER_RNG_H_
#define POLYFORM_SRC_COUNTER_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>

namespace polyform::internal {

// Stateless counter-based generator: every draw is a pure function of
// (seed, stream, counter), so results do not depend on visiting order or
// on the standard library's distribution implementations.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(Mix(seed ^ Mix(stream + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t Bits(std::uint64_t counter) const {
    return Mix(key_ + counter * 0x9E3779B97F4A7C15ULL);
  }

  // [0, 1) with 53 random bits.
  double Uniform(std::uint64_t counter) const {
    return static_cast<double>(Bits(counter) >> 11) * 0x1.0p-53;
  }

  // Standard normal by Box-Muller; consumes counters 2k and 2k + 1.
  double Normal(std::uint64_t k) const {
    const double u1 = 1.0 - Uniform(2 * k);  // (0, 1]
    const double u2 = Uniform(2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  // SplitMix64 finalizer.
  static std::uint64_t Mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace polyform::internal

#endif  // POLYFORM_SRC_COUNTER_RNG_H_
