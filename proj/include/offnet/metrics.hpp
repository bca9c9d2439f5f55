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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "offnet/graph.hpp"

namespace offnet {

enum class NodeClass : std::uint8_t { Clients, Intermediaries, All };

std::string_view to_string(NodeClass cls);
bool in_class(NodeRole role, NodeClass cls);

struct DegreeDistribution {
  NodeClass node_class = NodeClass::All;
  bool weighted = false;
  std::map<std::uint64_t, std::size_t> histogram;
  /// Absent when the class is empty.
  std::optional<double> mean;

  std::size_t node_count() const;
};

/// Exact degree histogram of the nodes in `cls`. Degrees count distinct
/// neighbors unless `weighted`, which sums edge multiplicities.
DegreeDistribution degree_distribution(const AnalysisGraph& graph, NodeClass cls,
                                       bool weighted = false);

/// Degrees of the nodes in `cls`, in node-id order.
std::vector<std::int64_t> degree_samples(const AnalysisGraph& graph, NodeClass cls);

/// Clients per intermediary in the slice. Throws DataError when there are no intermediaries.
double client_intermediary_ratio(const CountrySlice& slice);

std::uint64_t count_triangles(const AnalysisGraph& graph);

/// Connected triples (paths of length two), open and closed: sum of d(d-1)/2.
std::uint64_t count_triplets(const AnalysisGraph& graph);

/// Global transitivity 3T / triplets; 0 when there are no triplets.
double clustering_coefficient(const AnalysisGraph& graph);

/// Sum over connected components of |a|(|a|-1).
std::uint64_t redundancy_raw(const AnalysisGraph& graph);

/// Normalized redundancy of `now` against `baseline`. Throws DataError when
/// the baseline has no connected pairs.
double redundancy(const AnalysisGraph& now, const AnalysisGraph& baseline);

struct RobustnessSnapshot {
  std::size_t step = 0;
  std::size_t size = 0;
  std::size_t edges = 0;
  std::uint64_t triangles = 0;
  double clustering = 0.0;
  std::uint64_t redundancy_raw = 0;
};

RobustnessSnapshot robustness_snapshot(const AnalysisGraph& graph, std::size_t step);

struct BetweennessOptions {
  unsigned threads = 0;
  /// 0 selects the exact computation. Otherwise this many sources are drawn
  /// without replacement and scores are scaled by n / sources.
  std::size_t sampled_sources = 0;
  std::uint64_t seed = 0;
};

/// Unnormalized shortest-path betweenness of every node (indexed by node
/// index) on the simple undirected graph; each unordered pair counts once.
std::vector<double> betweenness_scores(const AnalysisGraph& graph, const BetweennessOptions& options = {});

/// Betweenness restricted to the nodes of a class, keyed by node id.
std::map<NodeId, double> betweenness(const AnalysisGraph& graph, NodeClass cls,
                                     const BetweennessOptions& options = {});

struct DiversityReport {
  /// Jurisdiction -> share of intermediaries.
  std::map<std::string, double> shares;
  std::map<std::string, std::size_t> counts;
  double hhi = 1.0;
  double di_effective_count = 1.0;
  double di_normalized = 1.0;
  std::size_t category_count = 0;
  std::size_t unknown_count = 0;
  std::size_t multi_country_count = 0;
  bool degenerate = false;  // only one jurisdiction observed
};

inline constexpr const char* kUnknownJurisdiction = "UNKNOWN";

/// Concentration of the slice intermediaries over jurisdictions. Intermediaries without a
/// jurisdiction are counted under "UNKNOWN". Throws DataError when there are none.
DiversityReport diversity_index(const CountrySlice& slice,
                                const std::function<std::optional<std::string>(NodeId)>& location_of);

/// Same, locating each intermediary by the first country code on its record.
DiversityReport diversity_index(const CountrySlice& slice, const Corpus& corpus);

}  // namespace offnet
