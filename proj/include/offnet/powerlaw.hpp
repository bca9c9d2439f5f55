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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "offnet/rng.hpp"

namespace offnet {

/// How the exponent is estimated for a given cutoff.
enum class MleMethod : std::uint8_t {
  /// alpha = 1 + n / sum ln(x / (xmin - 1/2)).
  ContinuousApprox,
  /// Maximizes the discrete likelihood with the Hurwitz-zeta normalizer.
  ExactZeta,
};

std::string_view to_string(MleMethod method);

struct XminCandidate {
  std::int64_t xmin = 1;
  double alpha = 0.0;
  double ks_statistic = 0.0;
  std::size_t n_tail = 0;
};

struct PowerLawFit {
  double alpha = 0.0;
  std::int64_t xmin = 1;
  double ks_statistic = 0.0;
  std::size_t n_tail = 0;
  std::size_t n_total = 0;
  MleMethod method = MleMethod::ContinuousApprox;
  bool xmin_scanned = false;
  std::size_t min_tail = 10;
  std::optional<double> p_value;
  /// Every cutoff evaluated during the scan (a single row if xmin was fixed).
  std::vector<XminCandidate> scan;
};

struct FitOptions {
  /// Fixed cutoff; when absent the cutoff minimizing the KS distance wins.
  std::optional<std::int64_t> xmin;
  MleMethod method = MleMethod::ContinuousApprox;
  /// Smallest tail the scan will consider.
  std::size_t min_tail = 10;
};

/// Hurwitz zeta(s, q) = sum_{k>=0} (k + q)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

/// P(X >= x) for the discrete power law with exponent alpha above xmin.
double power_law_ccdf(double alpha, std::int64_t xmin, std::int64_t x);

/// Discrete power-law MLE with KS-based cutoff selection. Requires at least
/// ten samples, all positive and not all equal; throws DataError otherwise or
/// when fewer than two samples reach the cutoff.
PowerLawFit fit_power_law(std::span<const std::int64_t> samples, const FitOptions& options = {});

/// Exact inverse-CDF sampler for the discrete power law above xmin.
class DiscretePowerLawSampler {
 public:
  DiscretePowerLawSampler(double alpha, std::int64_t xmin);
  std::int64_t operator()(Rng& rng) const;

 private:
  double alpha_;
  std::int64_t xmin_;
  std::vector<double> cdf_;  // P(X <= xmin + k)
};

struct BootstrapOptions {
  std::size_t n_boot = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Semi-parametric bootstrap: each replicate draws the tail from the fitted
/// law and the body by resampling observations below xmin, refits with the
/// same procedure, and counts replicates whose KS distance exceeds the
/// observed one. Replicate i uses seed + i. Requires n_boot >= 100.
double bootstrap_gof(std::span<const std::int64_t> samples, const PowerLawFit& fit,
                     const BootstrapOptions& options);

/// Empirical CCDF points (x, P(X >= x)) over the distinct sample values.
std::vector<std::pair<std::int64_t, double>> empirical_ccdf(std::span<const std::int64_t> samples);

}  // namespace offnet
