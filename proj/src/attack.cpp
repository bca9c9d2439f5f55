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

#include "offnet/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "offnet/error.hpp"
#include "offnet/parallel.hpp"
#include "offnet/rng.hpp"

namespace offnet {

using Index = AnalysisGraph::Index;

std::string_view to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::DegreeTop: return "degree";
    case Criterion::BetweennessTop: return "betweenness";
    case Criterion::Random: return "random";
  }
  return "degree";
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::Size: return "size";
    case Metric::Triangles: return "triangles";
    case Metric::Redundancy: return "redundancy";
    case Metric::Clustering: return "clustering";
  }
  return "size";
}

std::optional<Criterion> parse_criterion(std::string_view text) {
  if (text == "degree") return Criterion::DegreeTop;
  if (text == "betweenness") return Criterion::BetweennessTop;
  if (text == "random") return Criterion::Random;
  return std::nullopt;
}

std::optional<double> NormalizedSnapshot::get(Metric metric) const {
  switch (metric) {
    case Metric::Size: return size;
    case Metric::Triangles: return triangles;
    case Metric::Redundancy: return redundancy;
    case Metric::Clustering: return clustering;
  }
  return std::nullopt;
}

double KnockoutTrajectory::raw(Metric metric, std::size_t k) const {
  const auto& s = steps.at(k);
  switch (metric) {
    case Metric::Size: return static_cast<double>(s.size);
    case Metric::Triangles: return static_cast<double>(s.triangles);
    case Metric::Redundancy: return static_cast<double>(s.redundancy_raw);
    case Metric::Clustering: return s.clustering;
  }
  return 0.0;
}

std::vector<NodeId> rank_intermediaries(const AnalysisGraph& graph, const AttackStrategy& strategy,
                                        unsigned threads) {
  std::vector<Index> candidates;
  for (Index v = 0; v < graph.node_count(); ++v)
    if (graph.role(v) == NodeRole::Intermediary) candidates.push_back(v);

  switch (strategy.criterion) {
    case Criterion::DegreeTop:
      std::stable_sort(candidates.begin(), candidates.end(),
                       [&](Index a, Index b) { return graph.degree(a) > graph.degree(b); });
      break;
    case Criterion::BetweennessTop: {
      BetweennessOptions bopts;
      bopts.threads = threads;
      const auto scores = betweenness_scores(graph, bopts);
      std::stable_sort(candidates.begin(), candidates.end(),
                       [&](Index a, Index b) { return scores[a] > scores[b]; });
      break;
    }
    case Criterion::Random: {
      Rng rng(strategy.seed);
      for (std::size_t i = candidates.size(); i > 1; --i) {
        const auto j = rng.uniform_index(i);
        std::swap(candidates[i - 1], candidates[j]);
      }
      break;
    }
  }
  std::vector<NodeId> out;
  out.reserve(candidates.size());
  for (auto v : candidates) out.push_back(graph.id(v));
  return out;
}

KnockoutTrajectory run_knockout(const CountrySlice& slice, const AttackStrategy& strategy,
                                const KnockoutOptions& options) {
  if (strategy.k_max < 1) throw UsageError("k_max must be >= 1");
  KnockoutTrajectory t;
  t.country = slice.country;
  t.mode = slice.graph.mode();
  t.strategy = strategy;

  AnalysisGraph graph = remove_nodes(slice.graph, {}, true);
  if (options.lgc_only) graph = largest_component(graph);

  const std::size_t available = graph.count(NodeRole::Intermediary);
  std::size_t k_max = strategy.k_max;
  if (k_max > available) {
    t.truncated = true;
    t.warnings.push_back("k_max " + std::to_string(k_max) + " exceeds the " + std::to_string(available) +
                         " intermediaries present; trajectory truncated");
    k_max = available;
  }

  t.steps.push_back(robustness_snapshot(graph, 0));
  const bool recompute = strategy.recompute && strategy.criterion != Criterion::Random;
  std::vector<NodeId> ranking;
  std::size_t cursor = 0;
  if (!recompute) ranking = rank_intermediaries(graph, strategy, options.threads);

  for (std::size_t k = 1; k <= k_max; ++k) {
    NodeId victim = 0;
    if (recompute) {
      const auto current = rank_intermediaries(graph, strategy, options.threads);
      if (current.empty()) break;
      victim = current.front();
    } else {
      while (cursor < ranking.size() && !graph.index_of(ranking[cursor])) ++cursor;
      if (cursor == ranking.size()) break;
      victim = ranking[cursor++];
    }
    const NodeId victims[] = {victim};
    graph = remove_nodes(graph, victims, true);
    t.removed.push_back(victim);
    t.steps.push_back(robustness_snapshot(graph, k));
  }
  if (t.removed.size() < k_max) {
    t.truncated = true;
    t.warnings.push_back("no intermediary left after " + std::to_string(t.removed.size()) +
                         " removals; trajectory truncated");
  }

  const auto& base = t.steps.front();
  const bool bipartite = t.mode == GraphMode::Bipartite;
  if (bipartite) {
    t.warnings.push_back("triangles and clustering are identically zero in bipartite mode; reported as absent");
  } else {
    if (base.triangles == 0) t.warnings.push_back("no triangles at step 0; triangles reported as absent");
    if (base.clustering == 0.0) t.warnings.push_back("zero clustering at step 0; clustering reported as absent");
  }
  if (base.redundancy_raw == 0) t.warnings.push_back("no connected pairs at step 0; redundancy reported as absent");

  for (const auto& s : t.steps) {
    NormalizedSnapshot n;
    n.step = s.step;
    n.size = base.size == 0 ? 1.0 : static_cast<double>(s.size) / static_cast<double>(base.size);
    if (!bipartite && base.triangles != 0)
      n.triangles = static_cast<double>(s.triangles) / static_cast<double>(base.triangles);
    if (!bipartite && base.clustering != 0.0) n.clustering = s.clustering / base.clustering;
    if (base.redundancy_raw != 0)
      n.redundancy = static_cast<double>(s.redundancy_raw) / static_cast<double>(base.redundancy_raw);
    t.normalized.push_back(n);
  }
  return t;
}

StrategyRatio strategy_ratio(const CountrySlice& slice, std::size_t k_max, const KnockoutOptions& options,
                             bool recompute) {
  StrategyRatio out;
  AttackStrategy strategy;
  strategy.k_max = k_max;
  strategy.recompute = recompute;
  strategy.criterion = Criterion::DegreeTop;
  out.degree = run_knockout(slice, strategy, options);
  strategy.criterion = Criterion::BetweennessTop;
  out.betweenness = run_knockout(slice, strategy, options);

  const std::size_t steps = std::min(out.degree.normalized.size(), out.betweenness.normalized.size());
  for (std::size_t k = 0; k < steps; ++k) {
    std::vector<NodeId> a(out.degree.removed.begin(), out.degree.removed.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<NodeId> b(out.betweenness.removed.begin(),
                          out.betweenness.removed.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const bool same = a == b;
    for (Metric metric : kAllMetrics) {
      RatioEntry e;
      e.k = k;
      e.metric = metric;
      e.victims_equal = same;
      const auto num = out.betweenness.normalized[k].get(metric);
      const auto den = out.degree.normalized[k].get(metric);
      if (num && den) {
        if (same) {
          e.r = 1.0;
        } else if (*den == 0.0) {
          e.r = std::numeric_limits<double>::infinity();
          e.infinite = true;
        } else {
          e.r = *num / *den;
        }
      }
      out.entries.push_back(e);
    }
  }
  return out;
}

RandomBaseline random_baseline(const CountrySlice& slice, std::size_t k_max, std::size_t n_trials,
                               std::uint64_t seed, const KnockoutOptions& options) {
  if (n_trials < 1) throw UsageError("random baseline needs at least one trial");
  RandomBaseline out;
  out.n_trials = n_trials;
  out.seed = seed;

  std::vector<KnockoutTrajectory> trials(n_trials);
  KnockoutOptions inner = options;
  inner.threads = 1;
  parallel_for(n_trials, options.threads, [&](std::size_t t) {
    AttackStrategy strategy;
    strategy.criterion = Criterion::Random;
    strategy.k_max = k_max;
    strategy.seed = seed + t;
    trials[t] = run_knockout(slice, strategy, inner);
  });
  out.warnings = trials.front().warnings;

  std::size_t steps = 0;
  for (const auto& t : trials) steps = std::max(steps, t.normalized.size());
  for (std::size_t k = 0; k < steps; ++k) {
    BaselineStep step;
    step.k = k;
    for (Metric metric : kAllMetrics) {
      std::vector<double> values;
      for (const auto& t : trials)
        if (k < t.normalized.size())
          if (auto v = t.normalized[k].get(metric)) values.push_back(*v);
      step.trials = 0;
      for (const auto& t : trials) step.trials += k < t.normalized.size();
      if (values.empty()) continue;
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = sum / static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      auto& stats = step.metrics[static_cast<std::size_t>(metric)];
      stats.mean = mean;
      stats.stddev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    }
    out.steps.push_back(step);
  }
  return out;
}

}  // namespace offnet
