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
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "offnet/graph.hpp"
#include "offnet/ingest.hpp"

namespace offnet {

enum class MatchMethod : std::uint8_t { ExactNormalized, TokenSet, EditRatio };

std::string_view to_string(MatchMethod method);
std::optional<MatchMethod> parse_match_method(std::string_view text);

/// Case-folds, folds Latin diacritics to ASCII, turns punctuation into
/// spaces, and sorts the tokens: "Rotenberg, Boris" -> "boris rotenberg".
std::string normalize_name(std::string_view name);

/// Sorted distinct tokens of the normalized name.
std::vector<std::string> name_tokens(std::string_view name);

/// 2 * LCS(a, b) / (|a| + |b|) on bytes; 1 for two empty strings.
double indel_ratio(std::string_view a, std::string_view b);

/// Similarity in [0, 1] of two raw names under `method`.
double name_similarity(std::string_view a, std::string_view b, MatchMethod method);

struct SanctionQuery {
  std::string name;
  /// "name,node_id" rows pin the match to a node.
  std::optional<NodeId> pinned;
};

/// One name per line; blank lines and '#' comments are skipped.
std::vector<SanctionQuery> parse_seed_list(std::istream& in);

struct MatchCandidate {
  NodeId node = 0;
  std::string name;
  double score = 0.0;
};

struct SanctionMatch {
  std::string query_name;
  std::optional<NodeId> matched_node;
  double score = 0.0;
  MatchMethod method = MatchMethod::TokenSet;
  bool pinned = false;
  /// Best candidates, score descending then id ascending (at most five).
  std::vector<MatchCandidate> candidates;
  /// Set when the row could not be processed (empty query, bad pin).
  std::optional<std::string> error;
};

/// Matches each query against officer names. Candidates are officers sharing
/// at least one normalized token with the query; the best one is accepted
/// when its score reaches `threshold` (which must lie in (0, 1]).
std::vector<SanctionMatch> match_names(std::span<const SanctionQuery> queries, const Corpus& corpus,
                                       double threshold, MatchMethod method, unsigned threads = 0);

struct EgoEdge {
  NodeId u = 0;
  NodeId v = 0;
  friend bool operator==(const EgoEdge&, const EgoEdge&) = default;
};

struct EgoSubgraph {
  std::vector<NodeId> seeds;
  std::vector<NodeId> nodes;
  std::vector<EgoEdge> edges;
  /// Component id of every node before stitching; ids follow the smallest
  /// node id of each component.
  std::map<NodeId, std::size_t> component_map;
  std::size_t component_count = 0;
};

/// Union of the seeds' closed neighborhoods of the given radius with all
/// induced edges. Seeds must resolve to graph nodes.
EgoSubgraph build_ego_subgraph(const CorpusGraph& graph, std::span<const NodeId> seeds,
                               std::size_t radius = 1);

struct StitchPath {
  std::size_t component_a = 0;
  std::size_t component_b = 0;
  /// Seed of component_a first, seed of component_b last.
  std::vector<NodeId> nodes;
};

struct StitchResult {
  std::vector<StitchPath> paths;
  std::vector<std::pair<std::size_t, std::size_t>> unbridged;
};

/// For every pair of ego components, a shortest seed-to-seed path in the full
/// graph whose interior avoids all seeds, within `hop_budget` edges; ties go
/// to the lexicographically smallest node-id sequence.
StitchResult stitch_components(const CorpusGraph& graph, const EgoSubgraph& ego,
                               std::size_t hop_budget = 6);

/// Ego subgraph extended by the stitching paths (component_map unchanged).
EgoSubgraph merge_paths(const CorpusGraph& graph, const EgoSubgraph& ego, const StitchResult& stitched);

struct TabulationRow {
  NodeId intermediary = 0;
  std::string name;
  std::size_t sanctioned_clients = 0;
  std::size_t entity_count = 0;
  std::size_t total_clients = 0;
};

/// Rows sorted by sanctioned_clients descending, then entity_count
/// ascending, then id.
struct IntermediaryTabulation {
  std::vector<TabulationRow> rows;
};

/// For every intermediary that created an entity a seed is a beneficiary of:
/// distinct seeds served, distinct entities it created, and distinct
/// beneficiaries across those entities.
IntermediaryTabulation tabulate_intermediaries(const Corpus& corpus, std::span<const NodeId> seeds);

/// Plot label of a node in the sanctioned-network export.
std::string_view ego_label(const CorpusGraph& graph, CorpusGraph::Index v, bool is_seed);

}  // namespace offnet
