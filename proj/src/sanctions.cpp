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

#include "offnet/sanctions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <unordered_map>

#include "offnet/error.hpp"
#include "offnet/parallel.hpp"

namespace offnet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// ASCII folding of U+00C0..U+00FF; " " marks a separator symbol.
constexpr const char* kLatin1[64] = {
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", " ", "o", "u", "u", "u", "u", "y", "th", "ss",
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", " ", "o", "u", "u", "u", "u", "y", "th", "y"};

/// ASCII folding of U+0100..U+017F, by code point range.
const char* fold_latin_extended(std::uint32_t cp) {
  struct Range {
    std::uint32_t last;
    const char* ascii;
  };
  static constexpr Range kRanges[] = {
      {0x0105, "a"}, {0x010D, "c"}, {0x0111, "d"},  {0x011B, "e"}, {0x0123, "g"}, {0x0127, "h"},
      {0x0131, "i"}, {0x0133, "ij"}, {0x0135, "j"}, {0x0138, "k"}, {0x0142, "l"}, {0x014B, "n"},
      {0x0151, "o"}, {0x0153, "oe"}, {0x0159, "r"}, {0x0161, "s"}, {0x0167, "t"}, {0x0173, "u"},
      {0x0175, "w"}, {0x0178, "y"},  {0x017E, "z"}, {0x017F, "s"}};
  for (const auto& r : kRanges)
    if (cp <= r.last) return r.ascii;
  return nullptr;
}

std::string fold(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  const auto* s = reinterpret_cast<const unsigned char*>(name.data());
  const std::size_t n = name.size();
  for (std::size_t i = 0; i < n;) {
    const unsigned char c = s[i];
    if (c < 0x80) {
      if (std::isalnum(c))
        out.push_back(static_cast<char>(std::tolower(c)));
      else
        out.push_back(' ');
      ++i;
      continue;
    }
    std::size_t len = (c & 0xE0) == 0xC0 ? 2 : (c & 0xF0) == 0xE0 ? 3 : (c & 0xF8) == 0xF0 ? 4 : 1;
    if (i + len > n) len = 1;
    std::uint32_t cp = len == 2 ? ((c & 0x1Fu) << 6) | (s[i + 1] & 0x3Fu) : 0;
    if (len == 2 && cp >= 0xC0 && cp <= 0xFF) {
      out += kLatin1[cp - 0xC0];
    } else if (len == 2 && cp >= 0x100 && cp <= 0x17F) {
      out += fold_latin_extended(cp);
    } else if (len == 2 && cp < 0xC0) {
      out.push_back(' ');  // Latin-1 punctuation and symbols
    } else {
      out.append(name.substr(i, len));
    }
    i += len;
  }
  return out;
}

std::vector<std::string> split_tokens(const std::string& folded) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < folded.size()) {
    while (i < folded.size() && folded[i] == ' ') ++i;
    std::size_t j = i;
    while (j < folded.size() && folded[j] != ' ') ++j;
    if (j > i) tokens.emplace_back(folded.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

double token_set_ratio(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  // Both inputs sorted and distinct.
  std::vector<std::string> common, only_a, only_b;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
  if (a.empty() && b.empty()) return 1.0;
  if (!common.empty() && (only_a.empty() || only_b.empty())) return 1.0;
  const std::string t0 = join_tokens(common);
  auto extend = [&](const std::vector<std::string>& rest) {
    std::string s = t0;
    const std::string tail = join_tokens(rest);
    if (!s.empty() && !tail.empty()) s.push_back(' ');
    return s + tail;
  };
  const std::string t1 = extend(only_a);
  const std::string t2 = extend(only_b);
  double best = indel_ratio(t1, t2);
  if (!t0.empty()) best = std::max({best, indel_ratio(t0, t1), indel_ratio(t0, t2)});
  return best;
}

struct PreparedName {
  std::string sorted;                // tokens sorted, space joined
  std::vector<std::string> tokens;   // sorted, distinct
};

PreparedName prepare_name(std::string_view raw) {
  PreparedName p;
  auto tokens = split_tokens(fold(raw));
  std::sort(tokens.begin(), tokens.end());
  p.sorted = join_tokens(tokens);
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  p.tokens = std::move(tokens);
  return p;
}

double score(const PreparedName& a, const PreparedName& b, MatchMethod method) {
  switch (method) {
    case MatchMethod::ExactNormalized: return a.sorted == b.sorted ? 1.0 : 0.0;
    case MatchMethod::EditRatio: return indel_ratio(a.sorted, b.sorted);
    case MatchMethod::TokenSet: return token_set_ratio(a.tokens, b.tokens);
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(MatchMethod method) {
  switch (method) {
    case MatchMethod::ExactNormalized: return "exact";
    case MatchMethod::TokenSet: return "token_set";
    case MatchMethod::EditRatio: return "edit_ratio";
  }
  return "token_set";
}

std::optional<MatchMethod> parse_match_method(std::string_view text) {
  if (text == "exact") return MatchMethod::ExactNormalized;
  if (text == "token_set" || text == "token-set") return MatchMethod::TokenSet;
  if (text == "edit_ratio" || text == "edit-ratio" || text == "edit") return MatchMethod::EditRatio;
  return std::nullopt;
}

std::string normalize_name(std::string_view name) { return prepare_name(name).sorted; }

std::vector<std::string> name_tokens(std::string_view name) { return prepare_name(name).tokens; }

double indel_ratio(std::string_view a, std::string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return 2.0 * static_cast<double>(prev[b.size()]) / static_cast<double>(total);
}

double name_similarity(std::string_view a, std::string_view b, MatchMethod method) {
  return score(prepare_name(a), prepare_name(b), method);
}

std::vector<SanctionQuery> parse_seed_list(std::istream& in) {
  std::vector<SanctionQuery> out;
  std::string line;
  while (std::getline(in, line)) {
    auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    SanctionQuery q;
    const auto comma = text.rfind(',');
    if (comma != std::string_view::npos) {
      const auto id_text = trim(text.substr(comma + 1));
      NodeId id = 0;
      auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(), id);
      if (ec == std::errc{} && ptr == id_text.data() + id_text.size() && !id_text.empty()) {
        q.pinned = id;
        text = trim(text.substr(0, comma));
      }
    }
    q.name = std::string(text);
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<SanctionMatch> match_names(std::span<const SanctionQuery> queries, const Corpus& corpus,
                                       double threshold, MatchMethod method, unsigned threads) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw UsageError("match threshold must lie in (0, 1]");

  const auto& nodes = corpus.nodes();
  std::vector<std::size_t> officers;
  std::vector<PreparedName> prepared;
  std::unordered_map<std::string, std::vector<std::uint32_t>> postings;
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    if (nodes[p].kind != NodeKind::Officer) continue;
    const auto slot = static_cast<std::uint32_t>(officers.size());
    officers.push_back(p);
    prepared.push_back(prepare_name(nodes[p].name));
    for (const auto& t : prepared.back().tokens) postings[t].push_back(slot);
  }

  std::vector<SanctionMatch> out(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t qi) {
    const auto& query = queries[qi];
    SanctionMatch& m = out[qi];
    m.query_name = query.name;
    m.method = method;
    if (query.pinned) {
      const auto* node = corpus.find(*query.pinned);
      if (!node) {
        m.error = "pinned node_id " + std::to_string(*query.pinned) + " not in corpus";
        return;
      }
      m.matched_node = node->node_id;
      m.score = 1.0;
      m.pinned = true;
      m.candidates.push_back({node->node_id, node->name, 1.0});
      return;
    }
    const auto q = prepare_name(query.name);
    if (q.tokens.empty()) {
      m.error = "empty query name";
      return;
    }
    std::vector<std::uint32_t> pool;
    for (const auto& t : q.tokens) {
      auto it = postings.find(t);
      if (it != postings.end()) pool.insert(pool.end(), it->second.begin(), it->second.end());
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    std::vector<MatchCandidate> scored;
    scored.reserve(pool.size());
    for (auto slot : pool) {
      const auto& node = nodes[officers[slot]];
      scored.push_back({node.node_id, node.name, score(q, prepared[slot], method)});
    }
    const std::size_t keep = std::min<std::size_t>(5, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                      [](const MatchCandidate& a, const MatchCandidate& b) {
                        return a.score != b.score ? a.score > b.score : a.node < b.node;
                      });
    scored.resize(keep);
    m.candidates = std::move(scored);
    if (!m.candidates.empty()) {
      m.score = m.candidates.front().score;
      if (m.score >= threshold) m.matched_node = m.candidates.front().node;
    }
  });
  return out;
}

EgoSubgraph build_ego_subgraph(const CorpusGraph& graph, std::span<const NodeId> seeds, std::size_t radius) {
  if (seeds.empty()) throw UsageError("ego subgraph needs at least one seed");
  using Index = CorpusGraph::Index;
  const std::size_t n = graph.node_count();
  constexpr auto kFar = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(n, kFar);
  std::vector<Index> frontier;

  EgoSubgraph ego;
  for (NodeId id : seeds) {
    auto v = graph.index_of(id);
    if (!v || !graph.included(*v)) throw DataError("seed " + std::to_string(id) + " is not in the graph");
    if (dist[*v] == 0) continue;
    dist[*v] = 0;
    frontier.push_back(*v);
    ego.seeds.push_back(id);
  }
  std::sort(ego.seeds.begin(), ego.seeds.end());

  std::vector<Index> members = frontier;
  for (std::size_t depth = 0; depth < radius; ++depth) {
    std::vector<Index> next;
    for (auto v : frontier)
      for (auto w : graph.neighbors(v))
        if (dist[w] == kFar) {
          dist[w] = depth + 1;
          next.push_back(w);
        }
    members.insert(members.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::sort(members.begin(), members.end());
  for (auto v : members) ego.nodes.push_back(graph.id(v));
  for (auto v : members)
    for (auto w : graph.neighbors(v))
      if (v < w && dist[w] != kFar) ego.edges.push_back({graph.id(v), graph.id(w)});

  // Components of the ego subgraph, numbered by smallest member.
  std::vector<std::size_t> comp(n, kFar);
  for (auto s : members) {
    if (comp[s] != kFar) continue;
    const std::size_t label = ego.component_count++;
    std::vector<Index> stack{s};
    comp[s] = label;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : graph.neighbors(v))
        if (dist[w] != kFar && comp[w] == kFar) {
          comp[w] = label;
          stack.push_back(w);
        }
    }
  }
  for (auto v : members) ego.component_map.emplace(graph.id(v), comp[v]);
  return ego;
}

StitchResult stitch_components(const CorpusGraph& graph, const EgoSubgraph& ego, std::size_t hop_budget) {
  using Index = CorpusGraph::Index;
  StitchResult result;
  if (ego.component_count < 2) return result;
  const std::size_t n = graph.node_count();
  constexpr auto kFar = static_cast<std::size_t>(-1);

  std::vector<std::uint8_t> is_seed(n, 0);
  std::vector<std::vector<Index>> comp_seeds(ego.component_count);
  for (NodeId id : ego.seeds) {
    const auto v = *graph.index_of(id);
    is_seed[v] = 1;
    comp_seeds[ego.component_map.at(id)].push_back(v);
  }

  std::vector<std::size_t> dist(n, kFar);
  std::vector<Index> touched;
  for (std::size_t b = 1; b < ego.component_count; ++b) {
    // BFS from component b's seeds; other seeds are reachable but opaque.
    touched.clear();
    std::vector<Index> frontier;
    for (auto s : comp_seeds[b]) {
      dist[s] = 0;
      frontier.push_back(s);
      touched.push_back(s);
    }
    for (std::size_t depth = 0; depth < hop_budget && !frontier.empty(); ++depth) {
      std::vector<Index> next;
      for (auto v : frontier) {
        if (is_seed[v] && dist[v] != 0) continue;
        for (auto w : graph.neighbors(v)) {
          if (!graph.included(w) || dist[w] != kFar) continue;
          dist[w] = depth + 1;
          touched.push_back(w);
          next.push_back(w);
        }
      }
      frontier = std::move(next);
    }

    for (std::size_t a = 0; a < b; ++a) {
      Index start = 0;
      std::size_t best = kFar;
      for (auto s : comp_seeds[a])  // ascending index = ascending id
        if (dist[s] < best) {
          best = dist[s];
          start = s;
        }
      if (best == kFar) {
        result.unbridged.emplace_back(a, b);
        continue;
      }
      StitchPath path;
      path.component_a = a;
      path.component_b = b;
      Index cur = start;
      path.nodes.push_back(graph.id(cur));
      while (dist[cur] != 0) {
        Index step = static_cast<Index>(n);
        for (auto w : graph.neighbors(cur)) {
          if (dist[w] != dist[cur] - 1) continue;
          if (is_seed[w] && dist[w] != 0) continue;
          if (w < step) step = w;
        }
        cur = step;
        path.nodes.push_back(graph.id(cur));
      }
      result.paths.push_back(std::move(path));
    }
    for (auto v : touched) dist[v] = kFar;
  }
  std::sort(result.paths.begin(), result.paths.end(), [](const StitchPath& x, const StitchPath& y) {
    return std::pair(x.component_a, x.component_b) < std::pair(y.component_a, y.component_b);
  });
  std::sort(result.unbridged.begin(), result.unbridged.end());
  return result;
}

EgoSubgraph merge_paths(const CorpusGraph& graph, const EgoSubgraph& ego, const StitchResult& stitched) {
  EgoSubgraph out = ego;
  std::set<NodeId> nodes(ego.nodes.begin(), ego.nodes.end());
  for (const auto& path : stitched.paths) nodes.insert(path.nodes.begin(), path.nodes.end());
  out.nodes.assign(nodes.begin(), nodes.end());
  out.edges.clear();
  for (NodeId id : out.nodes) {
    const auto v = *graph.index_of(id);
    for (auto w : graph.neighbors(v)) {
      const NodeId wid = graph.id(w);
      if (id < wid && nodes.count(wid)) out.edges.push_back({id, wid});
    }
  }
  return out;
}

IntermediaryTabulation tabulate_intermediaries(const Corpus& corpus, std::span<const NodeId> seeds) {
  const auto& nodes = corpus.nodes();
  std::vector<std::pair<std::size_t, std::size_t>> created;      // (intermediary, entity) positions
  std::vector<std::pair<std::size_t, std::size_t>> beneficiary;  // (entity, officer) positions
  for (const auto& edge : corpus.edges()) {
    const auto s = corpus.position(edge.start_id);
    const auto t = corpus.position(edge.end_id);
    if (!s || !t) continue;
    auto kind = [&](std::size_t p) { return nodes[p].kind; };
    auto oriented = [&](NodeKind a, NodeKind b) -> std::optional<std::pair<std::size_t, std::size_t>> {
      if (kind(*s) == a && kind(*t) == b) return std::pair(*s, *t);
      if (kind(*s) == b && kind(*t) == a) return std::pair(*t, *s);
      return std::nullopt;
    };
    if (edge.link_class == LinkClass::IntermediaryOf) {
      if (auto p = oriented(NodeKind::Intermediary, NodeKind::Entity)) created.push_back(*p);
    } else if (edge.link_class == LinkClass::Beneficiary) {
      if (auto p = oriented(NodeKind::Entity, NodeKind::Officer)) beneficiary.push_back(*p);
    }
  }
  std::sort(created.begin(), created.end());
  created.erase(std::unique(created.begin(), created.end()), created.end());
  std::sort(beneficiary.begin(), beneficiary.end());
  beneficiary.erase(std::unique(beneficiary.begin(), beneficiary.end()), beneficiary.end());

  std::set<std::size_t> seed_pos;
  for (NodeId id : seeds)
    if (auto p = corpus.position(id)) seed_pos.insert(*p);

  auto clients_of = [&](std::size_t entity) {
    auto lo = std::lower_bound(beneficiary.begin(), beneficiary.end(), std::pair(entity, std::size_t{0}));
    auto hi = std::lower_bound(beneficiary.begin(), beneficiary.end(), std::pair(entity + 1, std::size_t{0}));
    return std::span(lo, hi);
  };

  IntermediaryTabulation table;
  for (std::size_t i = 0; i < created.size();) {
    std::size_t j = i;
    while (j < created.size() && created[j].first == created[i].first) ++j;
    std::set<std::size_t> clients, served;
    for (std::size_t k = i; k < j; ++k)
      for (const auto& [e, officer] : clients_of(created[k].second)) {
        clients.insert(officer);
        if (seed_pos.count(officer)) served.insert(officer);
      }
    if (!served.empty()) {
      const auto& node = nodes[created[i].first];
      table.rows.push_back({node.node_id, node.name, served.size(), j - i, clients.size()});
    }
    i = j;
  }
  std::sort(table.rows.begin(), table.rows.end(), [](const TabulationRow& a, const TabulationRow& b) {
    if (a.sanctioned_clients != b.sanctioned_clients) return a.sanctioned_clients > b.sanctioned_clients;
    if (a.entity_count != b.entity_count) return a.entity_count < b.entity_count;
    return a.intermediary < b.intermediary;
  });
  return table;
}

std::string_view ego_label(const CorpusGraph& graph, CorpusGraph::Index v, bool is_seed) {
  if (is_seed) return "oligarch";
  switch (graph.kind(v)) {
    case NodeKind::Officer: return "officer";
    case NodeKind::Entity: return "entity";
    case NodeKind::Intermediary: return "intermediary";
    case NodeKind::Address: return "address";
  }
  return "officer";
}

}  // namespace offnet
