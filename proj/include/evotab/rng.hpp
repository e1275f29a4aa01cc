// Copyright 2026 The evotab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

namespace evotab {

// The engine output sequence of std::mt19937_64 is fixed by the standard,
// but the std:: distributions are not. Every draw in the library goes
// through the helpers below so that a seed reproduces bit-identically on
// any conforming toolchain.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform integer in [0, n). n must be positive.
///
/// Lemire's multiply-and-reject method: unbiased, and uses one engine call
/// in the common case.
template <class Engine>
std::size_t uniform_index(Engine& rng, std::size_t n) {
  const auto range = static_cast<std::uint64_t>(n);
  std::uint64_t x = rng();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      x = rng();
      m = static_cast<unsigned __int128>(x) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

/// Uniform double in [0, 1) with 53 random bits.
template <class Engine>
double uniform_unit(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Bernoulli(p) draw. p <= 0 never fires and p >= 1 always fires.
template <class Engine>
bool bernoulli(Engine& rng, double p) {
  return uniform_unit(rng) < p;
}

/// Standard normal variate (Box-Muller, one value per call).
template <class Engine>
double standard_normal(Engine& rng) {
  const double u1 = 1.0 - uniform_unit(rng);  // (0, 1]
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace evotab
