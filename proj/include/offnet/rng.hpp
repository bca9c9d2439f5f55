/** Copyright 2026 The offnet Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace offnet {

/// Seeded generator with bit-reproducible draws on every platform: the
/// engine is mt19937_64 (fully specified by the standard) and all derived
/// variates are computed here rather than by std:: distributions, whose
/// algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased; n > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

  /// Poisson variate by sequential inversion; large means are split into
  /// chunks so exp(-mean) never underflows.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 0.0) {
      const double chunk = std::min(mean, 256.0);
      mean -= chunk;
      double p = std::exp(-chunk);
      double cdf = p;
      const double u = uniform01();
      std::uint64_t k = 0;
      while (u >= cdf && k < 100000) {
        ++k;
        p *= chunk / static_cast<double>(k);
        cdf += p;
        if (p == 0.0) break;
      }
      total += k;
    }
    return total;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace offnet
