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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "offnet/graph.hpp"
#include "offnet/metrics.hpp"

namespace offnet {

enum class Criterion : std::uint8_t { DegreeTop, BetweennessTop, Random };
enum class Metric : std::uint8_t { Size, Triangles, Redundancy, Clustering };

inline constexpr std::array<Metric, 4> kAllMetrics{Metric::Size, Metric::Triangles, Metric::Redundancy,
                                                   Metric::Clustering};

std::string_view to_string(Criterion criterion);
std::string_view to_string(Metric metric);
std::optional<Criterion> parse_criterion(std::string_view text);

/// Only intermediaries are ever removed.
struct AttackStrategy {
  Criterion criterion = Criterion::DegreeTop;
  std::size_t k_max = 3;
  /// Re-rank the remaining intermediaries after every removal instead of
  /// ranking once on the initial graph.
  bool recompute = false;
  std::uint64_t seed = 0;
};

struct KnockoutOptions {
  /// Use the largest connected component as the step-0 graph.
  bool lgc_only = false;
  unsigned threads = 0;
};

struct NormalizedSnapshot {
  std::size_t step = 0;
  double size = 1.0;
  std::optional<double> triangles;
  std::optional<double> redundancy;
  std::optional<double> clustering;

  std::optional<double> get(Metric metric) const;
};

struct KnockoutTrajectory {
  std::string country;
  GraphMode mode = GraphMode::Bipartite;
  AttackStrategy strategy;
  /// Raw metrics for k = 0..k (k may stop short of k_max).
  std::vector<RobustnessSnapshot> steps;
  std::vector<NormalizedSnapshot> normalized;
  /// Victims in removal order.
  std::vector<NodeId> removed;
  std::vector<std::string> warnings;
  bool truncated = false;

  double raw(Metric metric, std::size_t k) const;
};

/// Iterative targeted removal. Step 0 is the slice graph with isolated nodes
/// pruned (optionally reduced to its LGC); each step removes the top-ranked
/// remaining intermediary (ties by ascending id), prunes isolated nodes, and
/// records size, triangles, redundancy and clustering. Metrics that are
/// identically zero at step 0 are reported as absent with a warning.
KnockoutTrajectory run_knockout(const CountrySlice& slice, const AttackStrategy& strategy,
                                const KnockoutOptions& options = {});

/// Intermediaries in attack order for the given graph.
std::vector<NodeId> rank_intermediaries(const AnalysisGraph& graph, const AttackStrategy& strategy,
                                        unsigned threads = 0);

struct RatioEntry {
  std::size_t k = 0;
  Metric metric = Metric::Size;
  /// normalized(betweenness attack) / normalized(degree attack). Absent when
  /// either side is absent; +inf with `infinite` on a zero denominator.
  std::optional<double> r;
  bool infinite = false;
  bool victims_equal = false;
};

struct StrategyRatio {
  KnockoutTrajectory degree;
  KnockoutTrajectory betweenness;
  std::vector<RatioEntry> entries;
};

/// r(k, metric) for k = 0..k_max. r = 1 exactly whenever both attacks have
/// removed the same set of victims; r > 1 means the degree attack did more
/// damage.
StrategyRatio strategy_ratio(const CountrySlice& slice, std::size_t k_max,
                             const KnockoutOptions& options = {}, bool recompute = false);

struct MetricStats {
  std::optional<double> mean;
  std::optional<double> stddev;
};

struct BaselineStep {
  std::size_t k = 0;
  std::size_t trials = 0;  // trials that reached step k
  std::array<MetricStats, 4> metrics;  // indexed like kAllMetrics

  const MetricStats& get(Metric metric) const { return metrics[static_cast<std::size_t>(metric)]; }
};

struct RandomBaseline {
  std::size_t n_trials = 0;
  std::uint64_t seed = 0;
  std::vector<BaselineStep> steps;
  std::vector<std::string> warnings;
};

/// Mean and sample standard deviation of normalized metrics over n_trials
/// uniform-random removal runs; trial t is seeded with seed + t.
RandomBaseline random_baseline(const CountrySlice& slice, std::size_t k_max, std::size_t n_trials,
                               std::uint64_t seed, const KnockoutOptions& options = {});

}  // namespace offnet
