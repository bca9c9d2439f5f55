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

#include "offnet/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include "offnet/error.hpp"
#include "offnet/parallel.hpp"

namespace offnet {

namespace {

/// Gaps up to this length are bridged by direct summation instead of a
/// fresh zeta evaluation.
constexpr std::int64_t kDirectSumGap = 48;
constexpr double kAlphaLow = 1.0 + 1e-6;
constexpr double kAlphaHigh = 50.0;

void silence_gsl() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

/// Distinct sample values with counts and suffix aggregates.
struct Prepared {
  std::vector<std::int64_t> values;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> tail_count;  // samples >= values[j]
  std::vector<double> tail_log_sum;     // sum of ln x over samples >= values[j]
  std::size_t n = 0;
};

Prepared prepare(std::span<const std::int64_t> samples) {
  std::vector<std::int64_t> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  Prepared p;
  p.n = sorted.size();
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    p.values.push_back(sorted[i]);
    p.counts.push_back(j - i);
    i = j;
  }
  const std::size_t u = p.values.size();
  p.tail_count.assign(u + 1, 0);
  p.tail_log_sum.assign(u + 1, 0.0);
  for (std::size_t j = u; j-- > 0;) {
    p.tail_count[j] = p.tail_count[j + 1] + p.counts[j];
    p.tail_log_sum[j] =
        p.tail_log_sum[j + 1] + static_cast<double>(p.counts[j]) * std::log(static_cast<double>(p.values[j]));
  }
  return p;
}

double approximate_alpha(std::size_t n_tail, double log_sum, std::int64_t xmin) {
  const double denom = log_sum - static_cast<double>(n_tail) * std::log(static_cast<double>(xmin) - 0.5);
  return 1.0 + static_cast<double>(n_tail) / denom;
}

double exact_alpha(std::size_t n_tail, double log_sum, std::int64_t xmin) {
  const double q = static_cast<double>(xmin);
  auto negative_log_likelihood = [&](double alpha) {
    return alpha * log_sum + static_cast<double>(n_tail) * std::log(hurwitz_zeta(alpha, q));
  };
  // 1e-6 absolute tolerance on alpha needs about 20 bits over this bracket;
  // ask for more so the bound holds comfortably.
  const auto result = boost::math::tools::brent_find_minima(negative_log_likelihood, kAlphaLow,
                                                            kAlphaHigh, 40);
  return result.first;
}

/// KS distance between the empirical tail CDF starting at values[first] and
/// the fitted discrete law, evaluated at the observed tail values.
double ks_distance(const Prepared& p, std::size_t first, std::int64_t xmin, double alpha) {
  const double z0 = hurwitz_zeta(alpha, static_cast<double>(xmin));
  const double n_tail = static_cast<double>(p.tail_count[first]);
  double worst = 0.0;
  double z = z0;             // zeta(alpha, q)
  std::int64_t q = xmin;
  std::size_t seen = 0;
  for (std::size_t k = first; k < p.values.size(); ++k) {
    seen += p.counts[k];
    const std::int64_t target = p.values[k] + 1;
    if (target - q <= kDirectSumGap) {
      for (; q < target; ++q) z -= std::pow(static_cast<double>(q), -alpha);
    } else {
      z = hurwitz_zeta(alpha, static_cast<double>(target));
      q = target;
    }
    const double model = 1.0 - std::max(z, 0.0) / z0;
    const double empirical = static_cast<double>(seen) / n_tail;
    worst = std::max(worst, std::abs(empirical - model));
  }
  return worst;
}

XminCandidate evaluate(const Prepared& p, std::size_t first, std::int64_t xmin, MleMethod method) {
  XminCandidate c;
  c.xmin = xmin;
  c.n_tail = p.tail_count[first];
  const double log_sum = p.tail_log_sum[first];
  c.alpha = method == MleMethod::ExactZeta ? exact_alpha(c.n_tail, log_sum, xmin)
                                           : approximate_alpha(c.n_tail, log_sum, xmin);
  if (!std::isfinite(c.alpha) || c.alpha <= 1.0)
    throw DataError("power-law fit diverged at xmin=" + std::to_string(xmin));
  c.ks_statistic = ks_distance(p, first, xmin, c.alpha);
  return c;
}

PowerLawFit fit_prepared(const Prepared& p, const FitOptions& options) {
  if (p.n < 10) throw DataError("power-law fit needs at least 10 samples");
  if (p.values.front() < 1) throw DataError("power-law samples must be >= 1");
  if (p.values.size() == 1) throw DataError("degenerate distribution: all samples equal");

  PowerLawFit fit;
  fit.n_total = p.n;
  fit.method = options.method;
  fit.min_tail = options.min_tail;
  if (options.xmin) {
    const std::int64_t xmin = *options.xmin;
    if (xmin < 1) throw DataError("xmin must be >= 1");
    const auto first = static_cast<std::size_t>(
        std::lower_bound(p.values.begin(), p.values.end(), xmin) - p.values.begin());
    if (p.tail_count[first] < 2)
      throw DataError("fewer than 2 samples at or above xmin=" + std::to_string(xmin));
    fit.scan.push_back(evaluate(p, first, xmin, options.method));
  } else {
    fit.xmin_scanned = true;
    std::size_t min_tail = std::max<std::size_t>(2, options.min_tail);
    if (p.tail_count[0] < min_tail) min_tail = 2;
    for (std::size_t j = 0; j < p.values.size() && p.tail_count[j] >= min_tail; ++j)
      fit.scan.push_back(evaluate(p, j, p.values[j], options.method));
  }
  const auto best = std::min_element(fit.scan.begin(), fit.scan.end(), [](const auto& a, const auto& b) {
    return a.ks_statistic < b.ks_statistic;
  });
  fit.alpha = best->alpha;
  fit.xmin = best->xmin;
  fit.ks_statistic = best->ks_statistic;
  fit.n_tail = best->n_tail;
  return fit;
}

}  // namespace

std::string_view to_string(MleMethod method) {
  return method == MleMethod::ExactZeta ? "exact_zeta" : "continuous_approx";
}

double hurwitz_zeta(double s, double q) {
  silence_gsl();
  gsl_sf_result result;
  const int status = gsl_sf_hzeta_e(s, q, &result);
  if (status != GSL_SUCCESS && status != GSL_EUNDRFLW)
    throw DataError("Hurwitz zeta failed for s=" + std::to_string(s) + ", q=" + std::to_string(q));
  return status == GSL_EUNDRFLW ? 0.0 : result.val;
}

double power_law_ccdf(double alpha, std::int64_t xmin, std::int64_t x) {
  if (x <= xmin) return 1.0;
  return hurwitz_zeta(alpha, static_cast<double>(x)) / hurwitz_zeta(alpha, static_cast<double>(xmin));
}

PowerLawFit fit_power_law(std::span<const std::int64_t> samples, const FitOptions& options) {
  return fit_prepared(prepare(samples), options);
}

DiscretePowerLawSampler::DiscretePowerLawSampler(double alpha, std::int64_t xmin)
    : alpha_(alpha), xmin_(xmin) {
  if (alpha <= 1.0 || xmin < 1) throw DataError("invalid power-law parameters");
  constexpr std::size_t kTable = 1 << 15;
  const double z = hurwitz_zeta(alpha, static_cast<double>(xmin));
  cdf_.reserve(kTable);
  double acc = 0.0;
  for (std::size_t k = 0; k < kTable; ++k) {
    acc += std::pow(static_cast<double>(xmin) + static_cast<double>(k), -alpha) / z;
    cdf_.push_back(acc);
    if (acc >= 1.0 - 1e-15) break;
  }
}

std::int64_t DiscretePowerLawSampler::operator()(Rng& rng) const {
  const double u = rng.uniform01();
  if (u < cdf_.back()) {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return xmin_ + static_cast<std::int64_t>(it - cdf_.begin());
  }
  // Beyond the table the law is smooth enough for the continuous inverse.
  const double base = static_cast<double>(xmin_) + static_cast<double>(cdf_.size()) - 0.5;
  const double tail_u = (u - cdf_.back()) / (1.0 - cdf_.back());
  const double x = std::floor(base * std::pow(1.0 - tail_u, -1.0 / (alpha_ - 1.0)) + 0.5);
  constexpr double kCap = 4.0e18;
  return static_cast<std::int64_t>(std::min(x, kCap));
}

double bootstrap_gof(std::span<const std::int64_t> samples, const PowerLawFit& fit,
                     const BootstrapOptions& options) {
  if (options.n_boot < 100) throw UsageError("bootstrap needs n_boot >= 100");
  const std::size_t n = samples.size();
  std::vector<std::int64_t> body;
  for (auto x : samples)
    if (x < fit.xmin) body.push_back(x);
  std::sort(body.begin(), body.end());
  const double p_tail = static_cast<double>(n - body.size()) / static_cast<double>(n);
  const DiscretePowerLawSampler sampler(fit.alpha, fit.xmin);

  FitOptions refit;
  refit.method = fit.method;
  refit.min_tail = fit.min_tail;
  if (!fit.xmin_scanned) refit.xmin = fit.xmin;

  std::vector<std::uint8_t> exceeds(options.n_boot, 0);
  parallel_for(options.n_boot, options.threads, [&](std::size_t i) {
    Rng rng(options.seed + i);
    std::vector<std::int64_t> synthetic(n);
    for (auto& x : synthetic) {
      if (body.empty() || rng.uniform01() < p_tail)
        x = sampler(rng);
      else
        x = body[rng.uniform_index(body.size())];
    }
    try {
      const auto replicate = fit_power_law(synthetic, refit);
      exceeds[i] = replicate.ks_statistic > fit.ks_statistic;
    } catch (const DataError&) {
      // A replicate too degenerate to fit is as far from the law as it gets.
      exceeds[i] = 1;
    }
  });
  std::size_t count = 0;
  for (auto e : exceeds) count += e;
  return static_cast<double>(count) / static_cast<double>(options.n_boot);
}

std::vector<std::pair<std::int64_t, double>> empirical_ccdf(std::span<const std::int64_t> samples) {
  const auto p = prepare(samples);
  std::vector<std::pair<std::int64_t, double>> out;
  for (std::size_t j = 0; j < p.values.size(); ++j)
    out.emplace_back(p.values[j], static_cast<double>(p.tail_count[j]) / static_cast<double>(p.n));
  return out;
}

}  // namespace offnet
