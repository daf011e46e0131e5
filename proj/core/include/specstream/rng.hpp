// Copyright 2026 The specstream Authors
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
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace specstream {

// Derives the seed of an independent sub-stream from (base, index).
// splitmix64 finalizer; avalanching keeps neighboring indices uncorrelated.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(base, a), b);
}

// Deterministic N(0,1) stream: Box-Muller over mt19937_64. Self-contained so
// identical seeds reproduce identical values on every platform.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1], u2 in [0,1)
    const double u1 = 1.0 - std::ldexp(static_cast<double>(eng_() >> 11), -53);
    const double u2 = std::ldexp(static_cast<double>(eng_() >> 11), -53);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  // Standard complex Gaussian: unit total variance, Re/Im each N(0, 1/2).
  std::complex<double> next_complex() {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const double re = next();
    const double im = next();
    return {re * inv_sqrt2, im * inv_sqrt2};
  }

  double uniform() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace specstream
