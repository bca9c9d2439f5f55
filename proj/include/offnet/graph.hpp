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
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "offnet/ingest.hpp"

namespace offnet {

enum class NodeRole : std::uint8_t { Client, Entity, Intermediary };
enum class GraphMode : std::uint8_t { Bipartite, TripartiteInduced };

std::string_view to_string(NodeRole role);
std::string_view to_string(GraphMode mode);
std::optional<NodeRole> parse_node_role(std::string_view text);
std::optional<GraphMode> parse_graph_mode(std::string_view text);

/// Immutable simple undirected graph over role-tagged nodes.
///
/// Nodes are stored in ascending NodeId order, so a node's index is its rank
/// among the ids; every iteration over indices is therefore in id order.
/// Parallel input edges are collapsed and their count kept as multiplicity.
class AnalysisGraph {
 public:
  using Index = std::uint32_t;

  AnalysisGraph() = default;

  GraphMode mode() const { return mode_; }
  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  bool empty() const { return ids_.empty(); }

  NodeId id(Index v) const { return ids_[v]; }
  NodeRole role(Index v) const { return roles_[v]; }
  std::span<const NodeId> ids() const { return ids_; }
  std::optional<Index> index_of(NodeId id) const;

  std::span<const Index> neighbors(Index v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::span<const std::uint32_t> multiplicities(Index v) const {
    return {multiplicity_.data() + offsets_[v], multiplicity_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Index v) const { return offsets_[v + 1] - offsets_[v]; }
  std::uint64_t weighted_degree(Index v) const;

  std::size_t count(NodeRole role) const;

  /// Calls f(u, v, multiplicity) once per edge with u < v.
  template <class F>
  void for_each_edge(F&& f) const {
    for (Index u = 0; u < node_count(); ++u) {
      auto nbrs = neighbors(u);
      auto mult = multiplicities(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k)
        if (u < nbrs[k]) f(u, nbrs[k], mult[k]);
    }
  }

 private:
  friend class GraphBuilder;
  friend AnalysisGraph induced_subgraph(const AnalysisGraph&, std::span<const std::uint8_t>);

  GraphMode mode_ = GraphMode::Bipartite;
  std::vector<NodeId> ids_;
  std::vector<NodeRole> roles_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> adjacency_;
  std::vector<std::uint32_t> multiplicity_;
};

/// Accumulates nodes and edges, then freezes them into an AnalysisGraph.
/// Edges that violate the mode's role constraints, self-loops, and edges to
/// undeclared nodes throw DataError.
class GraphBuilder {
 public:
  explicit GraphBuilder(GraphMode mode) : mode_(mode) {}

  void add_node(NodeId id, NodeRole role);
  void add_edge(NodeId u, NodeId v, std::uint32_t multiplicity = 1);

  AnalysisGraph build() &&;

 private:
  struct PendingEdge {
    NodeId u, v;
    std::uint32_t multiplicity;
  };
  GraphMode mode_;
  std::vector<std::pair<NodeId, NodeRole>> nodes_;
  std::vector<PendingEdge> edges_;
};

/// Subgraph on the nodes whose keep flag is non-zero (indexed by node index).
AnalysisGraph induced_subgraph(const AnalysisGraph& graph, std::span<const std::uint8_t> keep);

/// True iff an edge between the two roles is allowed in the mode.
bool edge_allowed(GraphMode mode, NodeRole a, NodeRole b);

/// Country-level network: clients (beneficiary officers of the country),
/// the entities they are beneficiaries of, the intermediaries that created
/// those entities, and the graph assembled over them.
struct CountrySlice {
  std::string country;
  std::vector<NodeId> clients;
  std::vector<NodeId> entities;
  std::vector<NodeId> intermediaries;
  AnalysisGraph graph;
};

/// Builds the slice for `country`. Throws DataError listing the available
/// codes when no node carries the code; a known code without beneficiaries
/// yields an empty slice.
CountrySlice build_country_slice(const Corpus& corpus, std::string_view country, GraphMode mode);

/// Client-intermediary projection of a tripartite slice: b ~ i iff they share
/// an entity; multiplicity is the number of shared entities. Entities are
/// dropped; every client and intermediary is kept.
AnalysisGraph induce_bipartite(const AnalysisGraph& tripartite);
CountrySlice induce_bipartite(const CountrySlice& slice);

/// Recovers node sets from a graph (used when a slice is read back from an
/// edge-list file).
CountrySlice slice_from_graph(AnalysisGraph graph, std::string country);

struct Components {
  /// Node ids of each component, sorted ascending; components ordered by
  /// size descending, then by smallest id.
  std::vector<std::vector<NodeId>> members;
  /// |largest component| / |V|; 0 for an empty graph.
  double lgc_fraction = 0.0;
};

Components connected_components(const AnalysisGraph& graph);

/// Component label per node index; labels are dense in first-seen index order.
std::vector<std::uint32_t> component_labels(const AnalysisGraph& graph, std::size_t* count = nullptr);

/// Removes the victims and their edges. With prune_isolated, every node left
/// with degree zero is removed too. Throws DataError for an unknown victim.
AnalysisGraph remove_nodes(const AnalysisGraph& graph, std::span<const NodeId> victims,
                           bool prune_isolated);

/// Subgraph induced by the largest connected component.
AnalysisGraph largest_component(const AnalysisGraph& graph);

/// Text edge list: "u v multiplicity kind_u kind_v" per edge, preceded by
/// "# mode <mode>" and "# node <id> <kind>" lines for isolated nodes.
void write_edge_list(std::ostream& out, const AnalysisGraph& graph);
AnalysisGraph read_edge_list(std::istream& in);

/// Undirected simple graph over every corpus node (addresses optional), used
/// for neighborhood and path queries on the full relational data.
class CorpusGraph {
 public:
  using Index = std::uint32_t;

  CorpusGraph(const Corpus& corpus, bool include_addresses = false);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  NodeId id(Index v) const { return ids_[v]; }
  NodeKind kind(Index v) const { return kinds_[v]; }
  bool included(Index v) const { return included_[v] != 0; }
  std::optional<Index> index_of(NodeId id) const;
  std::span<const Index> neighbors(Index v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

 private:
  std::vector<NodeId> ids_;
  std::vector<NodeKind> kinds_;
  std::vector<std::uint8_t> included_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> adjacency_;
};

}  // namespace offnet
