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

#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "offnet/error.hpp"
#include "offnet/sanctions.hpp"

using namespace offnet;

namespace {

NodeRecord officer(NodeId id, std::string name) { return {id, NodeKind::Officer, std::move(name), {"RUS"}, ""}; }
NodeRecord entity(NodeId id) { return {id, NodeKind::Entity, "Entity " + std::to_string(id), {}, ""}; }
NodeRecord inter(NodeId id, std::string name) { return {id, NodeKind::Intermediary, std::move(name), {"CYP"}, ""}; }
EdgeRecord link(NodeId a, NodeId b, const char* text) { return {a, b, "", text, LinkClass::Other, 0}; }

/// Officers 1..7, entities 20..23, intermediaries 30 and 31, address 40.
///   1 -20- 30 -21- 5      (1 and 2 both own 20; 4 and 5 own 21)
///   4 -23- 31 -22- 3      (7 owns 23)
Corpus network() {
  std::vector<NodeRecord> nodes{officer(1, "BORIS ROMANOVICH ROTENBERG"),
                                officer(2, "Arkady Romanovich Rotenberg"),
                                officer(3, "Gennady Timchenko"),
                                officer(4, "John Smith"),
                                officer(5, "Ivan Petrov"),
                                officer(6, "Pyotr Isolated"),
                                officer(7, "Mary Major"),
                                entity(20),
                                entity(21),
                                entity(22),
                                entity(23),
                                inter(30, "Markom Management Ltd."),
                                inter(31, "Second Agent SA"),
                                {40, NodeKind::Address, "1 Main St", {}, ""}};
  std::vector<EdgeRecord> edges{link(1, 20, "shareholder of"),   link(2, 20, "beneficial owner of"),
                                link(30, 20, "intermediary of"), link(30, 21, "intermediary of"),
                                link(4, 21, "shareholder of"),   link(5, 21, "shareholder of"),
                                link(3, 22, "shareholder of"),   link(31, 22, "intermediary of"),
                                link(31, 23, "intermediary of"), link(4, 23, "director of"),
                                link(7, 23, "shareholder of"),   link(20, 40, "registered address")};
  return Corpus::from_records(std::move(nodes), std::move(edges), LinkClassMap::defaults());
}

std::vector<SanctionQuery> queries(std::initializer_list<const char*> names) {
  std::vector<SanctionQuery> out;
  for (const char* n : names) out.push_back({n, std::nullopt});
  return out;
}

}  // namespace

TEST_CASE("name normalization") {
  CHECK(normalize_name("Rotenberg, Boris") == "boris rotenberg");
  CHECK(normalize_name("  ÁLVAREZ-Núñez  José ") == "alvarez jose nunez");
  CHECK(normalize_name("Łukasz Żółć") == "lukasz zolc");
  CHECK(normalize_name("O'Brien & Co.") == "brien co o");
  CHECK(name_tokens("Anna anna ANNA Maria") == std::vector<std::string>{"anna", "maria"});
  CHECK(normalize_name("") == "");
}

TEST_CASE("indel ratio") {
  CHECK(indel_ratio("", "") == 1.0);
  CHECK(indel_ratio("abc", "abc") == 1.0);
  CHECK(indel_ratio("abc", "") == 0.0);
  // LCS("kitten", "sitting") = 4 ("ittn").
  CHECK(indel_ratio("kitten", "sitting") == doctest::Approx(8.0 / 13.0).epsilon(1e-15));
}

TEST_CASE("similarity methods") {
  CHECK(name_similarity("Boris Rotenberg", "boris rotenberg", MatchMethod::ExactNormalized) == 1.0);
  CHECK(name_similarity("Boris Rotenberg", "Boris Rotenburg", MatchMethod::ExactNormalized) == 0.0);
  CHECK(name_similarity("Rotenberg Boris", "BORIS ROMANOVICH ROTENBERG", MatchMethod::TokenSet) >= 0.85);
  CHECK(name_similarity("Rotenberg Boris", "Arkady Romanovich Rotenberg", MatchMethod::TokenSet) <
        doctest::Approx(0.85));
  CHECK(name_similarity("Boris Rotenberg", "Boris Rotenburg", MatchMethod::EditRatio) ==
        doctest::Approx(28.0 / 30.0).epsilon(1e-15));
}

TEST_CASE("token-set score is symmetric and order free") {
  const char* a = "Gennady Nikolayevich Timchenko";
  const char* b = "Timchenko Gennady";
  CHECK(name_similarity(a, b, MatchMethod::TokenSet) == name_similarity(b, a, MatchMethod::TokenSet));
  CHECK(name_similarity("Timchenko Gennady", "Gennady Timchenko", MatchMethod::TokenSet) == 1.0);
  CHECK(name_similarity("Ivan Petrov Sidorov", "Sidorov Ivan Petrov", MatchMethod::TokenSet) == 1.0);
}

TEST_CASE("seed list parsing with pins and comments") {
  std::istringstream in("# sanctioned\nRotenberg Boris\n\nTimchenko, Gennady\nIvan Petrov,5\n");
  const auto q = parse_seed_list(in);
  REQUIRE(q.size() == 3);
  CHECK(q[0].name == "Rotenberg Boris");
  CHECK(q[1].name == "Timchenko, Gennady");
  CHECK_FALSE(q[1].pinned);
  CHECK(q[2].name == "Ivan Petrov");
  CHECK(q[2].pinned == 5);
}

TEST_CASE("matching against officer names") {
  const auto corpus = network();
  std::vector<SanctionQuery> qs{{"Rotenberg Boris", std::nullopt},
                                {"BORIS ROMANOVICH ROTENBERG", std::nullopt},
                                {"Nobody Known", std::nullopt},
                                {"  ", std::nullopt},
                                {"whatever", 3},
                                {"pinned missing", 999}};
  const auto m = match_names(qs, corpus, 0.85, MatchMethod::TokenSet);
  REQUIRE(m.size() == 6);
  CHECK(m[0].matched_node == 1);
  CHECK(m[0].score >= 0.85);
  REQUIRE(m[0].candidates.size() == 2);
  CHECK(m[0].candidates[0].node == 1);
  CHECK(m[0].candidates[1].node == 2);
  CHECK(m[1].score == 1.0);
  CHECK_FALSE(m[2].matched_node);
  CHECK(m[2].candidates.empty());
  CHECK(m[3].error.has_value());
  CHECK_FALSE(m[3].matched_node);
  CHECK(m[4].pinned);
  CHECK(m[4].matched_node == 3);
  CHECK(m[5].error.has_value());
  for (const auto& r : m)
    if (!r.pinned && !r.error) CHECK(r.matched_node.has_value() == (r.score >= 0.85));
}

TEST_CASE("below-threshold best candidates are reported but not matched") {
  const auto corpus = network();
  const auto m = match_names(queries({"Arkady Rotenberg Junior"}), corpus, 0.99, MatchMethod::EditRatio);
  REQUIRE(m.size() == 1);
  CHECK_FALSE(m[0].matched_node);
  CHECK_FALSE(m[0].candidates.empty());
  CHECK(m[0].candidates.size() <= 5);
  for (std::size_t i = 1; i < m[0].candidates.size(); ++i)
    CHECK(m[0].candidates[i - 1].score >= m[0].candidates[i].score);
}

TEST_CASE("threshold must lie in (0, 1]") {
  const auto corpus = network();
  CHECK_THROWS_AS(match_names(queries({"x"}), corpus, 0.0, MatchMethod::TokenSet), UsageError);
  CHECK_THROWS_AS(match_names(queries({"x"}), corpus, 1.5, MatchMethod::TokenSet), UsageError);
}

TEST_CASE("matching is independent of the thread count") {
  const auto corpus = network();
  const auto qs = queries({"Rotenberg Boris", "Timchenko", "Ivan Petrov", "Smith John", "Mary"});
  const auto a = match_names(qs, corpus, 0.85, MatchMethod::TokenSet, 1);
  const auto b = match_names(qs, corpus, 0.85, MatchMethod::TokenSet, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].matched_node == b[i].matched_node);
    CHECK(a[i].score == b[i].score);
    CHECK(a[i].candidates.size() == b[i].candidates.size());
  }
}

TEST_CASE("ego subgraph examples") {
  const auto corpus = network();
  const CorpusGraph graph(corpus);
  const NodeId lone[] = {6};
  const auto single = build_ego_subgraph(graph, lone);
  CHECK(single.nodes == std::vector<NodeId>{6});
  CHECK(single.edges.empty());
  CHECK(single.component_count == 1);

  const NodeId pair[] = {1, 2};
  const auto shared = build_ego_subgraph(graph, pair);
  CHECK(shared.nodes == std::vector<NodeId>{1, 2, 20});
  CHECK(shared.edges.size() == 2);
  CHECK(shared.component_count == 1);

  const NodeId unknown[] = {12345};
  CHECK_THROWS_AS(build_ego_subgraph(graph, unknown), DataError);
}

TEST_CASE("ego subgraph is a subgraph of the corpus graph") {
  const auto corpus = network();
  const CorpusGraph graph(corpus);
  const NodeId seeds[] = {1, 3, 5};
  const auto ego = build_ego_subgraph(graph, seeds, 2);
  for (const auto& e : ego.edges) {
    const auto u = *graph.index_of(e.u);
    const auto v = *graph.index_of(e.v);
    const auto nb = graph.neighbors(u);
    CHECK(std::find(nb.begin(), nb.end(), v) != nb.end());
  }
  for (NodeId s : seeds) CHECK(std::binary_search(ego.nodes.begin(), ego.nodes.end(), s));
}

TEST_CASE("stitching finds shortest seed-to-seed paths within the budget") {
  const auto corpus = network();
  const CorpusGraph graph(corpus);
  const NodeId seeds[] = {1, 3, 5};
  const auto ego = build_ego_subgraph(graph, seeds);
  REQUIRE(ego.component_count == 3);
  CHECK(ego.component_map.at(1) == 0);
  CHECK(ego.component_map.at(20) == 0);
  CHECK(ego.component_map.at(3) == 1);
  CHECK(ego.component_map.at(5) == 2);

  const auto st = stitch_components(graph, ego, 6);
  REQUIRE(st.paths.size() == 2);
  CHECK(st.paths[0].component_a == 0);
  CHECK(st.paths[0].component_b == 2);
  CHECK(st.paths[0].nodes == std::vector<NodeId>{1, 20, 30, 21, 5});
  CHECK(st.paths[1].component_a == 1);
  CHECK(st.paths[1].component_b == 2);
  CHECK(st.paths[1].nodes == std::vector<NodeId>{3, 22, 31, 23, 4, 21, 5});
  REQUIRE(st.unbridged.size() == 1);
  CHECK(st.unbridged[0] == std::pair<std::size_t, std::size_t>{0, 1});

  const auto wide = stitch_components(graph, ego, 8);
  CHECK(wide.unbridged.empty());
  REQUIRE(wide.paths.size() == 3);
  CHECK(wide.paths[0].nodes == std::vector<NodeId>{1, 20, 30, 21, 4, 23, 31, 22, 3});
  for (const auto& p : wide.paths)
    for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k)
      CHECK(std::find(std::begin(seeds), std::end(seeds), p.nodes[k]) == std::end(seeds));

  const auto merged = merge_paths(graph, ego, st);
  CHECK(merged.nodes.size() == 10);
  CHECK(merged.component_map == ego.component_map);
}

TEST_CASE("stitching a single component or disconnected halves") {
  const auto corpus = network();
  const CorpusGraph graph(corpus);
  const NodeId pair[] = {1, 2};
  CHECK(stitch_components(graph, build_ego_subgraph(graph, pair)).paths.empty());
  const NodeId apart[] = {1, 6};
  const auto st = stitch_components(graph, build_ego_subgraph(graph, apart));
  CHECK(st.paths.empty());
  CHECK(st.unbridged.size() == 1);
}

TEST_CASE("tabulation counts distinct seeds, entities and clients") {
  const auto corpus = network();
  const NodeId one[] = {3};
  const auto t = tabulate_intermediaries(corpus, one);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].intermediary == 31);
  CHECK(t.rows[0].sanctioned_clients == 1);
  CHECK(t.rows[0].entity_count == 2);
  CHECK(t.rows[0].total_clients == 2);  // 3 and 7; 4 is a director, not a beneficiary

  const NodeId several[] = {1, 2, 5, 3};
  const auto all = tabulate_intermediaries(corpus, several);
  REQUIRE(all.rows.size() == 2);
  CHECK(all.rows[0].intermediary == 30);
  CHECK(all.rows[0].name == "Markom Management Ltd.");
  CHECK(all.rows[0].sanctioned_clients == 3);
  CHECK(all.rows[0].entity_count == 2);
  CHECK(all.rows[0].total_clients == 4);
  CHECK(all.rows[1].intermediary == 31);
  for (const auto& r : all.rows) CHECK(r.sanctioned_clients <= r.total_clients);

  const NodeId lone[] = {6};
  CHECK(tabulate_intermediaries(corpus, lone).rows.empty());
}

TEST_CASE("three-client fixture tabulates to one, two, three") {
  std::vector<NodeRecord> nodes{officer(1, "Seed"), officer(2, "Other A"), officer(3, "Other B"), entity(10),
                                entity(11), inter(20, "Only Agent")};
  std::vector<EdgeRecord> edges{link(1, 10, "shareholder of"), link(2, 10, "shareholder of"),
                                link(3, 11, "beneficiary of"), link(20, 10, "intermediary of"),
                                link(20, 11, "intermediary of")};
  const auto corpus = Corpus::from_records(nodes, edges, LinkClassMap::defaults());
  const NodeId seeds[] = {1};
  const auto t = tabulate_intermediaries(corpus, seeds);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].sanctioned_clients == 1);
  CHECK(t.rows[0].entity_count == 2);
  CHECK(t.rows[0].total_clients == 3);
}

TEST_CASE("two seeds sharing one intermediary give a three-node ego graph") {
  std::vector<NodeRecord> nodes{officer(1, "A"), officer(2, "B"), inter(3, "Shared")};
  std::vector<EdgeRecord> edges{link(1, 3, "intermediary"), link(2, 3, "intermediary")};
  const auto corpus = Corpus::from_records(nodes, edges, LinkClassMap::defaults());
  const CorpusGraph graph(corpus);
  const NodeId seeds[] = {1, 2};
  const auto ego = build_ego_subgraph(graph, seeds);
  CHECK(ego.nodes.size() == 3);
  CHECK(ego.edges.size() == 2);
}

TEST_CASE("export labels follow the node type palette") {
  const auto corpus = network();
  const CorpusGraph graph(corpus, true);
  CHECK(ego_label(graph, *graph.index_of(1), true) == "oligarch");
  CHECK(ego_label(graph, *graph.index_of(4), false) == "officer");
  CHECK(ego_label(graph, *graph.index_of(20), false) == "entity");
  CHECK(ego_label(graph, *graph.index_of(30), false) == "intermediary");
  CHECK(ego_label(graph, *graph.index_of(40), false) == "address");
}
