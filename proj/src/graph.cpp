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

#include "offnet/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <string>

#include "offnet/error.hpp"

namespace offnet {

std::string_view to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Client: return "client";
    case NodeRole::Entity: return "entity";
    case NodeRole::Intermediary: return "intermediary";
  }
  return "unknown";
}

std::string_view to_string(GraphMode mode) {
  return mode == GraphMode::Bipartite ? "bipartite" : "tripartite";
}

std::optional<NodeRole> parse_node_role(std::string_view text) {
  if (text == "client") return NodeRole::Client;
  if (text == "entity") return NodeRole::Entity;
  if (text == "intermediary") return NodeRole::Intermediary;
  return std::nullopt;
}

std::optional<GraphMode> parse_graph_mode(std::string_view text) {
  if (text == "bipartite") return GraphMode::Bipartite;
  if (text == "tripartite" || text == "tripartite-induced" || text == "tripartite_induced")
    return GraphMode::TripartiteInduced;
  return std::nullopt;
}

bool edge_allowed(GraphMode mode, NodeRole a, NodeRole b) {
  if (a == b) return false;
  if (mode == GraphMode::Bipartite)
    return (a == NodeRole::Client && b == NodeRole::Intermediary) ||
           (a == NodeRole::Intermediary && b == NodeRole::Client);
  return true;
}

std::optional<AnalysisGraph::Index> AnalysisGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - ids_.begin());
}

std::uint64_t AnalysisGraph::weighted_degree(Index v) const {
  auto m = multiplicities(v);
  return std::accumulate(m.begin(), m.end(), std::uint64_t{0});
}

std::size_t AnalysisGraph::count(NodeRole role) const {
  return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), role));
}

void GraphBuilder::add_node(NodeId id, NodeRole role) { nodes_.emplace_back(id, role); }

void GraphBuilder::add_edge(NodeId u, NodeId v, std::uint32_t multiplicity) {
  if (u == v) throw DataError("self-loop on node " + std::to_string(u));
  edges_.push_back({u, v, multiplicity});
}

AnalysisGraph GraphBuilder::build() && {
  AnalysisGraph g;
  g.mode_ = mode_;
  std::sort(nodes_.begin(), nodes_.end());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i > 0 && nodes_[i].first == nodes_[i - 1].first) {
      if (nodes_[i].second != nodes_[i - 1].second)
        throw DataError("node " + std::to_string(nodes_[i].first) + " declared with two roles");
      continue;
    }
    g.ids_.push_back(nodes_[i].first);
    g.roles_.push_back(nodes_[i].second);
  }
  nodes_.clear();

  struct Arc {
    AnalysisGraph::Index from, to;
    std::uint32_t multiplicity;
  };
  std::vector<Arc> arcs;
  arcs.reserve(edges_.size() * 2);
  for (const auto& e : edges_) {
    auto a = g.index_of(e.u);
    auto b = g.index_of(e.v);
    if (!a || !b)
      throw DataError("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) +
                      " references an undeclared node");
    if (!edge_allowed(mode_, g.roles_[*a], g.roles_[*b]))
      throw DataError("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " joins " +
                      std::string(to_string(g.roles_[*a])) + " and " +
                      std::string(to_string(g.roles_[*b])) + ", not allowed in " +
                      std::string(to_string(mode_)) + " mode");
    arcs.push_back({*a, *b, e.multiplicity});
    arcs.push_back({*b, *a, e.multiplicity});
  }
  edges_.clear();
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& x, const Arc& y) { return x.from != y.from ? x.from < y.from : x.to < y.to; });

  g.offsets_.assign(g.ids_.size() + 1, 0);
  for (std::size_t i = 0; i < arcs.size();) {
    std::size_t j = i;
    std::uint32_t mult = 0;
    while (j < arcs.size() && arcs[j].from == arcs[i].from && arcs[j].to == arcs[i].to)
      mult += arcs[j++].multiplicity;
    g.adjacency_.push_back(arcs[i].to);
    g.multiplicity_.push_back(mult);
    ++g.offsets_[arcs[i].from + 1];
    i = j;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  return g;
}

AnalysisGraph induced_subgraph(const AnalysisGraph& graph, std::span<const std::uint8_t> keep) {
  using Index = AnalysisGraph::Index;
  AnalysisGraph out;
  out.mode_ = graph.mode_;
  const std::size_t n = graph.node_count();
  std::vector<Index> remap(n, 0);
  for (Index v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    remap[v] = static_cast<Index>(out.ids_.size());
    out.ids_.push_back(graph.ids_[v]);
    out.roles_.push_back(graph.roles_[v]);
  }
  out.offsets_.clear();
  out.offsets_.reserve(out.ids_.size() + 1);
  out.offsets_.push_back(0);
  for (Index v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    auto nbrs = graph.neighbors(v);
    auto mult = graph.multiplicities(v);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (!keep[nbrs[k]]) continue;
      out.adjacency_.push_back(remap[nbrs[k]]);
      out.multiplicity_.push_back(mult[k]);
    }
    out.offsets_.push_back(out.adjacency_.size());
  }
  return out;
}

namespace {

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool links(const EdgeRecord& e, NodeKind a, NodeKind b, const Corpus& corpus, std::size_t& pa,
           std::size_t& pb) {
  auto s = corpus.position(e.start_id);
  auto t = corpus.position(e.end_id);
  if (!s || !t) return false;
  const auto ks = corpus.nodes()[*s].kind;
  const auto kt = corpus.nodes()[*t].kind;
  if (ks == a && kt == b) {
    pa = *s;
    pb = *t;
    return true;
  }
  if (ks == b && kt == a) {
    pa = *t;
    pb = *s;
    return true;
  }
  return false;
}

/// Adds induced client-intermediary pairs, one per shared entity.
void add_induced_edges(GraphBuilder& builder, std::vector<std::pair<NodeId, NodeId>> client_entity,
                       std::vector<std::pair<NodeId, NodeId>> intermediary_entity) {
  // Both lists keyed by entity.
  auto by_entity = [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second < y.second : x.first < y.first;
  };
  std::sort(client_entity.begin(), client_entity.end(), by_entity);
  std::sort(intermediary_entity.begin(), intermediary_entity.end(), by_entity);
  client_entity.erase(std::unique(client_entity.begin(), client_entity.end()), client_entity.end());
  intermediary_entity.erase(std::unique(intermediary_entity.begin(), intermediary_entity.end()),
                            intermediary_entity.end());

  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::size_t i = 0, j = 0;
  while (i < client_entity.size() && j < intermediary_entity.size()) {
    const NodeId e = client_entity[i].second;
    if (intermediary_entity[j].second < e) {
      ++j;
      continue;
    }
    if (intermediary_entity[j].second > e) {
      ++i;
      continue;
    }
    std::size_t i_end = i, j_end = j;
    while (i_end < client_entity.size() && client_entity[i_end].second == e) ++i_end;
    while (j_end < intermediary_entity.size() && intermediary_entity[j_end].second == e) ++j_end;
    for (std::size_t a = i; a < i_end; ++a)
      for (std::size_t b = j; b < j_end; ++b)
        pairs.emplace_back(client_entity[a].first, intermediary_entity[b].first);
    i = i_end;
    j = j_end;
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t k = 0; k < pairs.size();) {
    std::size_t l = k;
    while (l < pairs.size() && pairs[l] == pairs[k]) ++l;
    builder.add_edge(pairs[k].first, pairs[k].second, static_cast<std::uint32_t>(l - k));
    k = l;
  }
}

}  // namespace

CountrySlice build_country_slice(const Corpus& corpus, std::string_view country, GraphMode mode) {
  const auto codes = corpus.country_codes();
  if (!std::binary_search(codes.begin(), codes.end(), country)) {
    std::string msg = "unknown country code '" + std::string(country) + "'; available:";
    for (const auto& c : codes) msg += " " + c;
    throw DataError(msg);
  }
  const auto& nodes = corpus.nodes();

  // Clients and their entities via beneficiary links.
  std::vector<std::pair<NodeId, NodeId>> client_entity;  // (client, entity), with repeats
  for (const auto& edge : corpus.edges()) {
    if (edge.link_class != LinkClass::Beneficiary) continue;
    std::size_t officer = 0, entity = 0;
    if (!links(edge, NodeKind::Officer, NodeKind::Entity, corpus, officer, entity)) continue;
    if (!nodes[officer].has_country(country)) continue;
    client_entity.emplace_back(nodes[officer].node_id, nodes[entity].node_id);
  }
  CountrySlice slice;
  slice.country = std::string(country);
  for (const auto& [b, e] : client_entity) {
    slice.clients.push_back(b);
    slice.entities.push_back(e);
  }
  sort_unique(slice.clients);
  sort_unique(slice.entities);

  // Intermediaries that created one of those entities.
  std::vector<std::pair<NodeId, NodeId>> intermediary_entity;
  for (const auto& edge : corpus.edges()) {
    if (edge.link_class != LinkClass::IntermediaryOf) continue;
    std::size_t inter = 0, entity = 0;
    if (!links(edge, NodeKind::Intermediary, NodeKind::Entity, corpus, inter, entity)) continue;
    const NodeId e = nodes[entity].node_id;
    if (!std::binary_search(slice.entities.begin(), slice.entities.end(), e)) continue;
    intermediary_entity.emplace_back(nodes[inter].node_id, e);
  }
  for (const auto& [i, e] : intermediary_entity) slice.intermediaries.push_back(i);
  sort_unique(slice.intermediaries);

  GraphBuilder builder(GraphMode::TripartiteInduced);
  for (NodeId b : slice.clients) builder.add_node(b, NodeRole::Client);
  for (NodeId e : slice.entities) builder.add_node(e, NodeRole::Entity);
  for (NodeId i : slice.intermediaries) builder.add_node(i, NodeRole::Intermediary);
  for (const auto& [b, e] : client_entity) builder.add_edge(b, e);
  for (const auto& [i, e] : intermediary_entity) builder.add_edge(i, e);
  add_induced_edges(builder, client_entity, intermediary_entity);
  slice.graph = std::move(builder).build();
  if (mode == GraphMode::Bipartite) slice.graph = induce_bipartite(slice.graph);
  return slice;
}

AnalysisGraph induce_bipartite(const AnalysisGraph& tripartite) {
  GraphBuilder builder(GraphMode::Bipartite);
  std::vector<std::pair<NodeId, NodeId>> client_entity, intermediary_entity;
  for (AnalysisGraph::Index v = 0; v < tripartite.node_count(); ++v) {
    const auto role = tripartite.role(v);
    if (role != NodeRole::Entity) {
      builder.add_node(tripartite.id(v), role);
      continue;
    }
    for (auto w : tripartite.neighbors(v)) {
      if (tripartite.role(w) == NodeRole::Client)
        client_entity.emplace_back(tripartite.id(w), tripartite.id(v));
      else if (tripartite.role(w) == NodeRole::Intermediary)
        intermediary_entity.emplace_back(tripartite.id(w), tripartite.id(v));
    }
  }
  add_induced_edges(builder, std::move(client_entity), std::move(intermediary_entity));
  return std::move(builder).build();
}

CountrySlice induce_bipartite(const CountrySlice& slice) {
  CountrySlice out;
  out.country = slice.country;
  out.clients = slice.clients;
  out.entities = slice.entities;
  out.intermediaries = slice.intermediaries;
  out.graph = slice.graph.mode() == GraphMode::Bipartite ? slice.graph : induce_bipartite(slice.graph);
  return out;
}

CountrySlice slice_from_graph(AnalysisGraph graph, std::string country) {
  CountrySlice slice;
  slice.country = std::move(country);
  for (AnalysisGraph::Index v = 0; v < graph.node_count(); ++v) {
    switch (graph.role(v)) {
      case NodeRole::Client: slice.clients.push_back(graph.id(v)); break;
      case NodeRole::Entity: slice.entities.push_back(graph.id(v)); break;
      case NodeRole::Intermediary: slice.intermediaries.push_back(graph.id(v)); break;
    }
  }
  slice.graph = std::move(graph);
  return slice;
}

std::vector<std::uint32_t> component_labels(const AnalysisGraph& graph, std::size_t* count) {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  const std::size_t n = graph.node_count();
  std::vector<std::uint32_t> label(n, kUnset);
  std::vector<AnalysisGraph::Index> stack;
  std::uint32_t next = 0;
  for (AnalysisGraph::Index s = 0; s < n; ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : graph.neighbors(v)) {
        if (label[w] == kUnset) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

Components connected_components(const AnalysisGraph& graph) {
  std::size_t count = 0;
  const auto label = component_labels(graph, &count);
  Components out;
  out.members.resize(count);
  for (AnalysisGraph::Index v = 0; v < graph.node_count(); ++v)
    out.members[label[v]].push_back(graph.id(v));
  // Labels are assigned in index (= id) order, so a stable sort on size keeps
  // the smallest-id tie-break.
  std::stable_sort(out.members.begin(), out.members.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  if (!graph.empty()) out.lgc_fraction = static_cast<double>(out.members.front().size()) / graph.node_count();
  return out;
}

AnalysisGraph remove_nodes(const AnalysisGraph& graph, std::span<const NodeId> victims,
                           bool prune_isolated) {
  const std::size_t n = graph.node_count();
  std::vector<std::uint8_t> keep(n, 1);
  for (NodeId id : victims) {
    auto v = graph.index_of(id);
    if (!v) throw DataError("cannot remove node " + std::to_string(id) + ": not in graph");
    keep[*v] = 0;
  }
  if (prune_isolated) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (AnalysisGraph::Index v = 0; v < n; ++v) {
        if (!keep[v]) continue;
        auto nbrs = graph.neighbors(v);
        const bool alive = std::any_of(nbrs.begin(), nbrs.end(), [&](auto w) { return keep[w] != 0; });
        if (!alive) {
          keep[v] = 0;
          changed = true;
        }
      }
    }
  }
  return induced_subgraph(graph, keep);
}

AnalysisGraph largest_component(const AnalysisGraph& graph) {
  if (graph.empty()) return graph;
  std::size_t count = 0;
  const auto label = component_labels(graph, &count);
  std::vector<std::size_t> size(count, 0);
  for (auto l : label) ++size[l];
  // First label with maximal size is the one with the smallest member id.
  const auto best = static_cast<std::uint32_t>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<std::uint8_t> keep(graph.node_count());
  for (std::size_t v = 0; v < keep.size(); ++v) keep[v] = label[v] == best;
  return induced_subgraph(graph, keep);
}

void write_edge_list(std::ostream& out, const AnalysisGraph& graph) {
  out << "# mode " << to_string(graph.mode()) << '\n';
  for (AnalysisGraph::Index v = 0; v < graph.node_count(); ++v)
    if (graph.degree(v) == 0) out << "# node " << graph.id(v) << ' ' << to_string(graph.role(v)) << '\n';
  graph.for_each_edge([&](auto u, auto v, std::uint32_t m) {
    out << graph.id(u) << ' ' << graph.id(v) << ' ' << m << ' ' << to_string(graph.role(u)) << ' '
        << to_string(graph.role(v)) << '\n';
  });
}

AnalysisGraph read_edge_list(std::istream& in) {
  std::optional<GraphMode> mode;
  std::vector<std::pair<NodeId, NodeRole>> nodes;
  struct Row {
    NodeId u, v;
    std::uint32_t m;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw DataError("edge list line " + std::to_string(lineno) + ": " + why);
  };
  auto role_of = [&](const std::string& text) {
    auto r = parse_node_role(text);
    if (!r) fail("unknown node kind '" + text + "'");
    return *r;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line.front() == '#') {
      std::string hash, key;
      fields >> hash >> key;
      if (key == "mode") {
        std::string m;
        fields >> m;
        mode = parse_graph_mode(m);
        if (!mode) fail("unknown mode '" + m + "'");
      } else if (key == "node") {
        NodeId id = 0;
        std::string kind;
        if (!(fields >> id >> kind)) fail("malformed node line");
        nodes.emplace_back(id, role_of(kind));
      }
      continue;
    }
    NodeId u = 0, v = 0;
    std::uint32_t m = 0;
    std::string ku, kv;
    if (!(fields >> u >> v >> m >> ku >> kv)) fail("expected 'u v multiplicity kind_u kind_v'");
    nodes.emplace_back(u, role_of(ku));
    nodes.emplace_back(v, role_of(kv));
    rows.push_back({u, v, m});
  }
  if (!mode) {
    // Infer: any non client-intermediary edge means tripartite.
    mode = GraphMode::Bipartite;
    for (const auto& [id, role] : nodes)
      if (role == NodeRole::Entity) mode = GraphMode::TripartiteInduced;
  }
  GraphBuilder builder(*mode);
  for (const auto& [id, role] : nodes) builder.add_node(id, role);
  for (const auto& r : rows) builder.add_edge(r.u, r.v, r.m);
  return std::move(builder).build();
}

CorpusGraph::CorpusGraph(const Corpus& corpus, bool include_addresses) {
  const auto& nodes = corpus.nodes();
  ids_.reserve(nodes.size());
  for (const auto& node : nodes) {
    ids_.push_back(node.node_id);
    kinds_.push_back(node.kind);
    included_.push_back(include_addresses || node.kind != NodeKind::Address);
  }
  std::vector<std::pair<Index, Index>> arcs;
  arcs.reserve(corpus.edges().size() * 2);
  for (const auto& edge : corpus.edges()) {
    auto a = corpus.position(edge.start_id);
    auto b = corpus.position(edge.end_id);
    if (!a || !b || *a == *b) continue;
    if (!included_[*a] || !included_[*b]) continue;
    arcs.emplace_back(static_cast<Index>(*a), static_cast<Index>(*b));
    arcs.emplace_back(static_cast<Index>(*b), static_cast<Index>(*a));
  }
  sort_unique(arcs);
  offsets_.assign(ids_.size() + 1, 0);
  adjacency_.reserve(arcs.size());
  for (const auto& [from, to] : arcs) {
    ++offsets_[from + 1];
    adjacency_.push_back(to);
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
}

std::optional<CorpusGraph::Index> CorpusGraph::index_of(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - ids_.begin());
}

}  // namespace offnet
