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

#include "offnet/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "offnet/error.hpp"
#include "offnet/parallel.hpp"
#include "offnet/rng.hpp"

namespace offnet {

using Index = AnalysisGraph::Index;

std::string_view to_string(NodeClass cls) {
  switch (cls) {
    case NodeClass::Clients: return "clients";
    case NodeClass::Intermediaries: return "intermediaries";
    case NodeClass::All: return "all";
  }
  return "all";
}

bool in_class(NodeRole role, NodeClass cls) {
  switch (cls) {
    case NodeClass::Clients: return role == NodeRole::Client;
    case NodeClass::Intermediaries: return role == NodeRole::Intermediary;
    case NodeClass::All: return true;
  }
  return false;
}

std::size_t DegreeDistribution::node_count() const {
  std::size_t n = 0;
  for (const auto& [k, count] : histogram) n += count;
  return n;
}

DegreeDistribution degree_distribution(const AnalysisGraph& graph, NodeClass cls, bool weighted) {
  DegreeDistribution out;
  out.node_class = cls;
  out.weighted = weighted;
  std::uint64_t total = 0;
  std::size_t n = 0;
  for (Index v = 0; v < graph.node_count(); ++v) {
    if (!in_class(graph.role(v), cls)) continue;
    const std::uint64_t k = weighted ? graph.weighted_degree(v) : graph.degree(v);
    ++out.histogram[k];
    total += k;
    ++n;
  }
  if (n != 0) out.mean = static_cast<double>(total) / static_cast<double>(n);
  return out;
}

std::vector<std::int64_t> degree_samples(const AnalysisGraph& graph, NodeClass cls) {
  std::vector<std::int64_t> out;
  for (Index v = 0; v < graph.node_count(); ++v)
    if (in_class(graph.role(v), cls)) out.push_back(static_cast<std::int64_t>(graph.degree(v)));
  return out;
}

double client_intermediary_ratio(const CountrySlice& slice) {
  if (slice.intermediaries.empty())
    throw DataError("slice " + slice.country + " has no intermediaries; ratio undefined");
  return static_cast<double>(slice.clients.size()) / static_cast<double>(slice.intermediaries.size());
}

std::uint64_t count_triangles(const AnalysisGraph& graph) {
  const std::size_t n = graph.node_count();
  // Orient each edge from lower to higher (degree, index) rank.
  auto before = [&](Index a, Index b) {
    const auto da = graph.degree(a), db = graph.degree(b);
    return da != db ? da < db : a < b;
  };
  std::vector<std::vector<Index>> forward(n);
  for (Index v = 0; v < n; ++v)
    for (auto w : graph.neighbors(v))
      if (before(v, w)) forward[v].push_back(w);

  std::vector<std::uint8_t> mark(n, 0);
  std::uint64_t triangles = 0;
  for (Index u = 0; u < n; ++u) {
    for (auto v : forward[u]) mark[v] = 1;
    for (auto v : forward[u])
      for (auto w : forward[v]) triangles += mark[w];
    for (auto v : forward[u]) mark[v] = 0;
  }
  return triangles;
}

std::uint64_t count_triplets(const AnalysisGraph& graph) {
  std::uint64_t total = 0;
  for (Index v = 0; v < graph.node_count(); ++v) {
    const std::uint64_t d = graph.degree(v);
    total += d * (d - (d > 0 ? 1 : 0)) / 2;
  }
  return total;
}

double clustering_coefficient(const AnalysisGraph& graph) {
  const auto triplets = count_triplets(graph);
  if (triplets == 0) return 0.0;
  return 3.0 * static_cast<double>(count_triangles(graph)) / static_cast<double>(triplets);
}

std::uint64_t redundancy_raw(const AnalysisGraph& graph) {
  std::size_t count = 0;
  const auto labels = component_labels(graph, &count);
  std::vector<std::uint64_t> size(count, 0);
  for (auto l : labels) ++size[l];
  std::uint64_t total = 0;
  for (auto s : size) total += s * (s - 1);
  return total;
}

double redundancy(const AnalysisGraph& now, const AnalysisGraph& baseline) {
  const auto base = redundancy_raw(baseline);
  if (base == 0) throw DataError("baseline graph has no connected pairs; redundancy undefined");
  return static_cast<double>(redundancy_raw(now)) / static_cast<double>(base);
}

RobustnessSnapshot robustness_snapshot(const AnalysisGraph& graph, std::size_t step) {
  RobustnessSnapshot s;
  s.step = step;
  s.size = graph.node_count();
  s.edges = graph.edge_count();
  s.triangles = count_triangles(graph);
  const auto triplets = count_triplets(graph);
  s.clustering = triplets == 0 ? 0.0 : 3.0 * static_cast<double>(s.triangles) / static_cast<double>(triplets);
  s.redundancy_raw = redundancy_raw(graph);
  return s;
}

namespace {

/// Single-source Brandes pass; adds weight * dependency to `scores`.
class BrandesWorkspace {
 public:
  explicit BrandesWorkspace(std::size_t n) : sigma_(n, 0.0), delta_(n, 0.0), dist_(n, -1) {
    order_.reserve(n);
  }

  void accumulate(const AnalysisGraph& g, Index source, double weight, std::vector<double>& scores) {
    order_.clear();
    dist_[source] = 0;
    sigma_[source] = 1.0;
    order_.push_back(source);
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const Index v = order_[head];
      for (auto w : g.neighbors(v)) {
        if (dist_[w] < 0) {
          dist_[w] = dist_[v] + 1;
          order_.push_back(w);
        }
        if (dist_[w] == dist_[v] + 1) sigma_[w] += sigma_[v];
      }
    }
    for (std::size_t k = order_.size(); k-- > 1;) {
      const Index w = order_[k];
      const double coeff = (1.0 + delta_[w]) / sigma_[w];
      for (auto v : g.neighbors(w))
        if (dist_[v] == dist_[w] - 1) delta_[v] += sigma_[v] * coeff;
      scores[w] += weight * delta_[w];
    }
    for (auto v : order_) {
      sigma_[v] = 0.0;
      delta_[v] = 0.0;
      dist_[v] = -1;
    }
  }

 private:
  std::vector<double> sigma_;
  std::vector<double> delta_;
  std::vector<int> dist_;
  std::vector<Index> order_;
};

/// Sums weighted single-source dependencies over `sources`. The source list
/// is cut into a number of fixed blocks that depends only on its length, and
/// block partials are added in block order, so the floating-point result is
/// the same for every thread count.
std::vector<double> accumulate_sources(const AnalysisGraph& g, const std::vector<Index>& sources,
                                       const std::vector<double>& weights, unsigned threads) {
  const std::size_t n = g.node_count();
  std::vector<double> total(n, 0.0);
  if (sources.empty()) return total;
  const std::size_t block = std::max<std::size_t>(256, (sources.size() + 63) / 64);
  const std::size_t blocks = (sources.size() + block - 1) / block;
  std::vector<std::vector<double>> partial(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    std::vector<double> local(n, 0.0);
    BrandesWorkspace ws(n);
    const std::size_t end = std::min(sources.size(), (b + 1) * block);
    for (std::size_t k = b * block; k < end; ++k) ws.accumulate(g, sources[k], weights[k], local);
    partial[b] = std::move(local);
  });
  for (const auto& p : partial)
    for (std::size_t v = 0; v < n; ++v) total[v] += p[v];
  return total;
}

}  // namespace

std::vector<double> betweenness_scores(const AnalysisGraph& g, const BetweennessOptions& options) {
  const std::size_t n = g.node_count();
  std::vector<Index> sources;
  std::vector<double> weights;

  if (options.sampled_sources != 0 && options.sampled_sources < n) {
    std::vector<Index> all(n);
    std::iota(all.begin(), all.end(), Index{0});
    Rng rng(options.seed);
    for (std::size_t k = 0; k < options.sampled_sources; ++k) {
      const auto j = k + rng.uniform_index(n - k);
      std::swap(all[k], all[j]);
    }
    sources.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(options.sampled_sources));
    std::sort(sources.begin(), sources.end());
    weights.assign(sources.size(), static_cast<double>(n) / static_cast<double>(sources.size()));
    auto scores = accumulate_sources(g, sources, weights, options.threads);
    for (auto& s : scores) s /= 2.0;
    return scores;
  }

  // A degree-one node hanging off a hub sees exactly the hub's shortest-path
  // DAG, so its source pass is the hub's pass plus (|C| - 2) dependency on the
  // hub itself. Such leaves are folded into their neighbor's weight.
  std::size_t comp_count = 0;
  const auto label = component_labels(g, &comp_count);
  std::vector<std::size_t> comp_size(comp_count, 0);
  for (auto l : label) ++comp_size[l];

  auto foldable = [&](Index v) { return g.degree(v) == 1 && g.degree(g.neighbors(v)[0]) > 1; };
  std::vector<std::size_t> leaf_count(n, 0);
  for (Index v = 0; v < n; ++v)
    if (foldable(v)) ++leaf_count[g.neighbors(v)[0]];
  for (Index v = 0; v < n; ++v) {
    if (g.degree(v) == 0 || foldable(v)) continue;
    sources.push_back(v);
    weights.push_back(1.0 + static_cast<double>(leaf_count[v]));
  }
  auto scores = accumulate_sources(g, sources, weights, options.threads);
  for (Index v = 0; v < n; ++v)
    if (leaf_count[v] != 0)
      scores[v] += static_cast<double>(leaf_count[v]) * static_cast<double>(comp_size[label[v]] - 2);
  for (auto& s : scores) s /= 2.0;
  return scores;
}

std::map<NodeId, double> betweenness(const AnalysisGraph& graph, NodeClass cls,
                                     const BetweennessOptions& options) {
  const auto scores = betweenness_scores(graph, options);
  std::map<NodeId, double> out;
  for (Index v = 0; v < graph.node_count(); ++v)
    if (in_class(graph.role(v), cls)) out.emplace(graph.id(v), scores[v]);
  return out;
}

DiversityReport diversity_index(const CountrySlice& slice,
                                const std::function<std::optional<std::string>(NodeId)>& location_of) {
  if (slice.intermediaries.empty())
    throw DataError("slice " + slice.country + " has no intermediaries; diversity undefined");
  DiversityReport report;
  for (NodeId i : slice.intermediaries) {
    auto where = location_of(i);
    if (!where || where->empty()) {
      ++report.unknown_count;
      ++report.counts[kUnknownJurisdiction];
    } else {
      ++report.counts[*where];
    }
  }
  const double total = static_cast<double>(slice.intermediaries.size());
  report.hhi = 0.0;
  for (const auto& [place, count] : report.counts) {
    const double share = static_cast<double>(count) / total;
    report.shares[place] = share;
    report.hhi += share * share;
  }
  report.category_count = report.counts.size();
  report.di_effective_count = 1.0 / report.hhi;
  report.di_normalized = report.di_effective_count / static_cast<double>(report.category_count);
  report.degenerate = report.category_count == 1;
  return report;
}

DiversityReport diversity_index(const CountrySlice& slice, const Corpus& corpus) {
  std::size_t multi = 0;
  auto report = diversity_index(slice, [&](NodeId id) -> std::optional<std::string> {
    const auto* node = corpus.find(id);
    if (!node || node->countries.empty()) return std::nullopt;
    if (node->countries.size() > 1) ++multi;
    return node->countries.front();
  });
  report.multi_country_count = multi;
  return report;
}

}  // namespace offnet
