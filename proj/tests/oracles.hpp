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

// Brute-force reference implementations. They share nothing with the library
// beyond the graph accessors, and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "offnet/graph.hpp"

namespace oracle {

using offnet::AnalysisGraph;
using offnet::GraphBuilder;
using offnet::GraphMode;
using offnet::NodeId;
using offnet::NodeRole;

/// Dense 0/1 adjacency matrix of the simple graph.
inline std::vector<std::vector<int>> adjacency_matrix(const AnalysisGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (std::size_t u = 0; u < n; ++u)
    for (auto v : g.neighbors(static_cast<AnalysisGraph::Index>(u))) a[u][v] = 1;
  return a;
}

/// Random graph with n nodes of random roles and up to max_edges edges drawn
/// uniformly among the pairs the mode allows. Ids are shuffled so that index
/// order differs from insertion order.
inline AnalysisGraph random_graph(std::uint64_t seed, std::size_t n, std::size_t max_edges,
                                  GraphMode mode = GraphMode::TripartiteInduced) {
  std::mt19937_64 gen(seed);
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), NodeId{100});
  std::shuffle(ids.begin(), ids.end(), gen);
  std::vector<NodeRole> roles(n);
  GraphBuilder b(mode);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = gen() % 3;
    roles[i] = mode == GraphMode::Bipartite ? (r == 0 ? NodeRole::Intermediary : NodeRole::Client)
                                            : static_cast<NodeRole>(r);
    b.add_node(ids[i], roles[i]);
  }
  std::set<std::pair<std::size_t, std::size_t>> chosen;
  const std::size_t attempts = max_edges * 3;
  for (std::size_t t = 0; t < attempts && chosen.size() < max_edges; ++t) {
    std::size_t u = gen() % n, v = gen() % n;
    if (u == v || !offnet::edge_allowed(mode, roles[u], roles[v])) continue;
    if (u > v) std::swap(u, v);
    if (chosen.insert({u, v}).second) b.add_edge(ids[u], ids[v], 1 + static_cast<std::uint32_t>(gen() % 3));
  }
  return std::move(b).build();
}

/// All-pairs hop distances by Floyd-Warshall; -1 when unreachable.
inline std::vector<std::vector<long>> all_pairs_distance(const AnalysisGraph& g) {
  const std::size_t n = g.node_count();
  const long inf = std::numeric_limits<long>::max() / 4;
  auto a = adjacency_matrix(g);
  std::vector<std::vector<long>> d(n, std::vector<long>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j]) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (auto& row : d)
    for (auto& x : row)
      if (x >= inf) x = -1;
  return d;
}

/// Betweenness by counting shortest paths pair by pair: for every unordered
/// pair {s, t} and every v off the pair lying on a shortest s-t path, add
/// sigma(s,v) sigma(v,t) / sigma(s,t).
inline std::vector<double> betweenness(const AnalysisGraph& g) {
  const std::size_t n = g.node_count();
  auto d = all_pairs_distance(g);
  auto a = adjacency_matrix(g);
  // sigma[s][t] by increasing distance from s.
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return d[s][x] < d[s][y]; });
    sigma[s][s] = 1.0;
    for (auto t : order) {
      if (d[s][t] <= 0) continue;
      for (std::size_t w = 0; w < n; ++w)
        if (a[w][t] && d[s][w] == d[s][t] - 1) sigma[s][t] += sigma[s][w];
    }
  }
  std::vector<double> bc(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      if (d[s][t] < 0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == s || v == t || d[s][v] < 0 || d[v][t] < 0) continue;
        if (d[s][v] + d[v][t] == d[s][t]) bc[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
      }
    }
  return bc;
}

inline std::uint64_t triangles(const AnalysisGraph& g) {
  auto a = adjacency_matrix(g);
  const std::size_t n = a.size();
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (a[i][j] && a[j][k] && a[i][k]) ++t;
  return t;
}

/// Connected triples (closed and open), enumerated as (center, {x, y}).
inline std::uint64_t triplets(const AnalysisGraph& g) {
  auto a = adjacency_matrix(g);
  const std::size_t n = a.size();
  std::uint64_t t = 0;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        if (a[c][x] && a[c][y]) ++t;
  return t;
}

inline double clustering(const AnalysisGraph& g) {
  const auto trip = triplets(g);
  return trip == 0 ? 0.0 : 3.0 * static_cast<double>(triangles(g)) / static_cast<double>(trip);
}

/// Components by repeated BFS from the smallest unvisited id; each component
/// is a sorted id list.
inline std::vector<std::vector<NodeId>> components(const AnalysisGraph& g) {
  auto a = adjacency_matrix(g);
  const std::size_t n = a.size();
  std::vector<int> seen(n, 0);
  std::vector<std::vector<NodeId>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> queue{s};
    seen[s] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (std::size_t w = 0; w < n; ++w)
        if (a[queue[h]][w] && !seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
    std::vector<NodeId> ids;
    for (auto v : queue) ids.push_back(g.id(static_cast<AnalysisGraph::Index>(v)));
    std::sort(ids.begin(), ids.end());
    out.push_back(ids);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() > y.size() : x.front() < y.front();
  });
  return out;
}

/// Ordered connected pairs: number of (u, v), u != v, joined by a path.
inline std::uint64_t connected_ordered_pairs(const AnalysisGraph& g) {
  auto d = all_pairs_distance(g);
  std::uint64_t pairs = 0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      if (i != j && d[i][j] > 0) ++pairs;
  return pairs;
}

/// Client-intermediary pairs sharing an entity, with the shared count.
inline std::map<std::pair<NodeId, NodeId>, std::uint32_t> induced_pairs(const AnalysisGraph& g) {
  auto a = adjacency_matrix(g);
  const std::size_t n = a.size();
  std::map<std::pair<NodeId, NodeId>, std::uint32_t> out;
  for (std::size_t b = 0; b < n; ++b) {
    if (g.role(static_cast<AnalysisGraph::Index>(b)) != NodeRole::Client) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (g.role(static_cast<AnalysisGraph::Index>(i)) != NodeRole::Intermediary) continue;
      std::uint32_t shared = 0;
      for (std::size_t e = 0; e < n; ++e)
        if (g.role(static_cast<AnalysisGraph::Index>(e)) == NodeRole::Entity && a[b][e] && a[i][e]) ++shared;
      if (shared > 0) out[{g.id(static_cast<AnalysisGraph::Index>(b)), g.id(static_cast<AnalysisGraph::Index>(i))}] = shared;
    }
  }
  return out;
}

/// Discrete power law above xmin by inverse-CDF with the normalizer and the
/// CDF built by direct summation up to `cutoff`; the remaining mass is
/// spread by the continuous tail x = (xmin' - 1/2) u^(-1/(alpha-1)).
class PowerLawSampler {
 public:
  PowerLawSampler(double alpha, std::int64_t xmin, std::int64_t cutoff = 2'000'000)
      : alpha_(alpha), xmin_(xmin) {
    double z = 0.0;
    std::vector<double> terms;
    for (std::int64_t x = xmin; x < cutoff; ++x) terms.push_back(std::pow(static_cast<double>(x), -alpha));
    // Tail beyond the cutoff by the Euler-Maclaurin leading terms.
    const double c = static_cast<double>(cutoff);
    const double tail = std::pow(c, 1.0 - alpha) / (alpha - 1.0) + 0.5 * std::pow(c, -alpha);
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) z += *it;
    z += tail;
    double acc = 0.0;
    cdf_.reserve(terms.size());
    for (double t : terms) {
      acc += t / z;
      cdf_.push_back(acc);
    }
    norm_ = z;
  }

  std::int64_t operator()(std::mt19937_64& gen) const {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it != cdf_.end()) return xmin_ + (it - cdf_.begin());
    const double rest = (1.0 - u) / (1.0 - cdf_.back());
    const double start = static_cast<double>(xmin_ + static_cast<std::int64_t>(cdf_.size()));
    return static_cast<std::int64_t>(std::floor((start - 0.5) * std::pow(rest, -1.0 / (alpha_ - 1.0)) + 0.5));
  }

  /// P(X >= x) from the summed table.
  double ccdf(std::int64_t x) const {
    if (x <= xmin_) return 1.0;
    return 1.0 - cdf_[static_cast<std::size_t>(x - xmin_ - 1)];
  }
  double normalizer() const { return norm_; }

 private:
  double alpha_;
  std::int64_t xmin_;
  double norm_ = 0.0;
  std::vector<double> cdf_;
};

}  // namespace oracle
