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
#include "offnet/csv.hpp"
#include "offnet/error.hpp"
#include "offnet/ingest.hpp"

using namespace offnet;
using testing::TempDir;

TEST_CASE("csv reader handles quotes, embedded newlines, CRLF and BOM") {
  std::istringstream in("\xEF\xBB\xBF" "a,b,c\r\n1,\"x, \"\"y\"\"\",3\r\n2,\"multi\nline\",\r\n");
  csv::Reader r(in);
  csv::Record rec;
  REQUIRE(r.next(rec));
  CHECK(rec.fields == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(r.next(rec));
  CHECK(rec.fields == std::vector<std::string>{"1", "x, \"y\"", "3"});
  CHECK(rec.line == 2);
  REQUIRE(r.next(rec));
  CHECK(rec.fields == std::vector<std::string>{"2", "multi\nline", ""});
  CHECK(rec.line == 3);
  CHECK_FALSE(r.next(rec));
}

TEST_CASE("csv reader flags an unterminated quote") {
  std::istringstream in("a,b\n1,\"open\n");
  csv::Reader r(in);
  csv::Record rec;
  REQUIRE(r.next(rec));
  REQUIRE(r.next(rec));
  CHECK(rec.unterminated_quote);
}

TEST_CASE("csv escape and join round-trip through the reader") {
  std::vector<std::string> cells{"plain", "with,comma", "with \"quote\"", "two\nlines", ""};
  std::istringstream in(csv::join(cells) + "\n");
  csv::Reader r(in);
  csv::Record rec;
  REQUIRE(r.next(rec));
  CHECK(rec.fields == cells);
}

TEST_CASE("utf-8 repair replaces invalid bytes and counts them") {
  std::string good = "Ro\xC3\xA9nberg";
  CHECK(csv::repair_utf8(good) == 0);
  std::string bad = "ab\xFF" "c\xC3";
  CHECK(csv::repair_utf8(bad) == 2);
  CHECK(bad == "ab\xEF\xBF\xBD" "c\xEF\xBF\xBD");
}

TEST_CASE("link rules honour anchors and first-match order") {
  LinkClassMap map({{"^nominee", LinkClass::Nominee},
                    {"shareholder", LinkClass::Beneficiary},
                    {"^intermediary$", LinkClass::IntermediaryOf}},
                   0.9);
  CHECK(map.classify("Nominee Shareholder of") == LinkClass::Nominee);
  CHECK(map.classify("SHAREHOLDER OF") == LinkClass::Beneficiary);
  CHECK(map.classify("intermediary") == LinkClass::IntermediaryOf);
  CHECK(map.classify("intermediary of") == LinkClass::Other);
  CHECK(map.classify("") == LinkClass::Other);
}

TEST_CASE("default map classifies common link strings") {
  const auto map = LinkClassMap::defaults();
  CHECK(map.rules().size() >= 50);
  CHECK(map.coverage_target() == doctest::Approx(0.992));
  CHECK(map.classify("beneficial owner of") == LinkClass::Beneficiary);
  CHECK(map.classify("shareholder of") == LinkClass::Beneficiary);
  CHECK(map.classify("ultimate beneficiary") == LinkClass::Beneficiary);
  CHECK(map.classify("nominee shareholder of") == LinkClass::Nominee);
  CHECK(map.classify("intermediary of") == LinkClass::IntermediaryOf);
  CHECK(map.classify("registered address") == LinkClass::RegisteredAddress);
  CHECK(map.classify("director of") == LinkClass::OfficerIntermediary);
  CHECK(map.classify("same intermediary as") == LinkClass::Other);
}

TEST_CASE("link map text form parses both arrows and round-trips") {
  std::istringstream in("# comment\ncoverage_target = 0.5\nowner -> Beneficiary\n^agent \xE2\x86\x92 IntermediaryOf\n\n");
  const auto map = LinkClassMap::parse(in);
  REQUIRE(map.rules().size() == 2);
  CHECK(map.coverage_target() == 0.5);
  CHECK(map.rules()[1].pattern == "^agent");
  CHECK(map.rules()[1].cls == LinkClass::IntermediaryOf);
  std::istringstream again(map.serialize());
  const auto copy = LinkClassMap::parse(again);
  CHECK(copy.serialize() == map.serialize());
}

TEST_CASE("link map rejects an unknown class") {
  std::istringstream in("owner -> Landlord\n");
  CHECK_THROWS_AS(LinkClassMap::parse(in), DataError);
}

TEST_CASE("ten-row fixture with one bad reference quarantines exactly that row") {
  const auto corpus = testing::load_fixture("ingest");
  CHECK(corpus.nodes().size() == 10);
  CHECK(corpus.edges().size() == 9);
  REQUIRE(corpus.quarantined().size() == 1);
  CHECK(corpus.quarantined()[0].end_id == 999);
  const auto& report = corpus.report();
  REQUIRE(report.quarantined.size() == 1);
  CHECK(report.quarantined[0].line == 10);
  CHECK(report.edge_rows == 10);
  CHECK(report.nodes_per_kind.at(NodeKind::Officer) == 4);
  CHECK(report.nodes_per_kind.at(NodeKind::Address) == 1);
  CHECK(report.coverage == 1.0);
  CHECK(report.warnings.empty());
  const auto* n3 = corpus.find(3);
  REQUIRE(n3);
  CHECK(n3->name == "Li \"Jack\" Wei");
  CHECK(n3->countries == std::vector<std::string>{"CHN"});
  CHECK(corpus.find(4)->countries.empty());
  CHECK(corpus.find(10)->name == "PO Box 1, Nassau");
}

TEST_CASE("rows are conserved across classes and quarantine") {
  const auto corpus = testing::load_fixture("ingest");
  std::size_t per_class = 0;
  for (const auto& [cls, n] : corpus.report().edges_per_class) per_class += n;
  CHECK(per_class + corpus.quarantined().size() == corpus.report().edge_rows);
}

TEST_CASE("empty edge file gives coverage 1 by convention") {
  TempDir dir;
  auto nodes = dir.write("nodes-officers.csv", "node_id,name,countries\n1,A,RUS\n2,B,\n3,C,USA\n");
  auto edges = dir.write("relationships.csv", "node_id_start,node_id_end,rel_type,link\n");
  std::vector<NodeFile> files{{nodes, NodeKind::Officer}};
  const auto corpus = load_corpus(files, edges, LinkClassMap::defaults());
  CHECK(corpus.nodes().size() == 3);
  CHECK(corpus.edges().empty());
  CHECK(corpus.report().coverage == 1.0);
}

TEST_CASE("missing required column names the column") {
  TempDir dir;
  auto nodes = dir.write("nodes-officers.csv", "node_id,name\n1,A\n");
  auto edges = dir.write("relationships.csv", "node_id_start,node_id_end,rel_type\n");
  std::vector<NodeFile> files{{nodes, NodeKind::Officer}};
  try {
    (void)load_corpus(files, edges, LinkClassMap::defaults());
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("countries") != std::string::npos);
  }
  auto nodes_ok = dir.write("nodes-ok.csv", "node_id,name,countries\n1,A,RUS\n");
  std::vector<NodeFile> ok{{nodes_ok, NodeKind::Officer}};
  try {
    (void)load_corpus(ok, edges, LinkClassMap::defaults());
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("link") != std::string::npos);
  }
}

TEST_CASE("duplicate node id is a hard error") {
  TempDir dir;
  auto a = dir.write("nodes-officers.csv", "node_id,name,countries\n1,A,RUS\n");
  auto b = dir.write("nodes-entities.csv", "node_id,name,countries\n1,E,PAN\n");
  auto edges = dir.write("relationships.csv", "node_id_start,node_id_end,rel_type,link\n");
  std::vector<NodeFile> files{{a, NodeKind::Officer}, {b, NodeKind::Entity}};
  CHECK_THROWS_AS(load_corpus(files, edges, LinkClassMap::defaults()), DataError);
}

TEST_CASE("malformed rows are skipped and reported with their line") {
  TempDir dir;
  auto nodes = dir.write("nodes-officers.csv", "node_id,name,countries\n1,A,RUS\nx,B,RUS\n3,C\n4,D,USA\n");
  auto edges = dir.write("relationships.csv",
                         "START_ID,END_ID,TYPE,link\n1,4,officer_of,shareholder of\n1,four,officer_of,x\n");
  std::vector<NodeFile> files{{nodes, NodeKind::Officer}};
  const auto corpus = load_corpus(files, edges, LinkClassMap::defaults());
  CHECK(corpus.nodes().size() == 2);
  CHECK(corpus.edges().size() == 1);
  REQUIRE(corpus.report().malformed.size() == 3);
  CHECK(corpus.report().malformed[0].line == 3);
  CHECK(corpus.report().malformed[1].line == 4);
  CHECK(corpus.report().malformed[2].line == 3);
}

TEST_CASE("invalid utf-8 in names is repaired and flagged") {
  TempDir dir;
  auto nodes = dir.write("nodes-officers.csv", "node_id,name,countries\n1,Bad\xFFName,RUS\n");
  auto edges = dir.write("relationships.csv", "node_id_start,node_id_end,rel_type,link\n");
  std::vector<NodeFile> files{{nodes, NodeKind::Officer}};
  const auto corpus = load_corpus(files, edges, LinkClassMap::defaults());
  CHECK(corpus.find(1)->name == "Bad\xEF\xBF\xBDName");
  REQUIRE(corpus.report().encoding_repairs.size() == 1);
  CHECK(corpus.report().encoding_repairs[0].line == 2);
}

TEST_CASE("multi-country field is split and uppercased") {
  TempDir dir;
  auto nodes = dir.write("nodes-officers.csv", "node_id,name,country_codes\n1,A,rus; cyp;RUS\n");
  auto edges = dir.write("relationships.csv", "node_id_start,node_id_end,rel_type,link\n");
  std::vector<NodeFile> files{{nodes, NodeKind::Officer}};
  const auto corpus = load_corpus(files, edges, LinkClassMap::defaults());
  CHECK(corpus.find(1)->countries == std::vector<std::string>{"RUS", "CYP"});
  CHECK(corpus.find(1)->has_country("CYP"));
  CHECK(corpus.country_codes() == std::vector<std::string>{"CYP", "RUS"});
}

TEST_CASE("coverage on a six-row fixture with four matches") {
  std::vector<NodeRecord> nodes{{1, NodeKind::Officer, "a", {}, ""}, {2, NodeKind::Entity, "e", {}, ""}};
  std::vector<EdgeRecord> edges;
  for (const char* link : {"shareholder of", "director of", "intermediary of", "registered address", "similar name as",
                           "same address as"})
    edges.push_back({1, 2, "rel", link, LinkClass::Other, 0});
  auto corpus = Corpus::from_records(nodes, edges, LinkClassMap::defaults());
  const auto cov = classify_links(corpus, LinkClassMap::defaults());
  CHECK(cov.total == 6);
  CHECK(cov.matched == 4);
  CHECK(cov.coverage == doctest::Approx(4.0 / 6.0));
  CHECK(cov.below_target);
  CHECK_FALSE(corpus.report().warnings.empty());
}

TEST_CASE("a universal pattern gives full coverage") {
  std::vector<NodeRecord> nodes{{1, NodeKind::Officer, "a", {}, ""}, {2, NodeKind::Entity, "e", {}, ""}};
  std::vector<EdgeRecord> edges{{1, 2, "x", "anything", LinkClass::Other, 0}, {2, 1, "y", "else", LinkClass::Other, 0}};
  LinkClassMap all({{"", LinkClass::Beneficiary}}, 1.0);
  auto corpus = Corpus::from_records(nodes, edges, all);
  CHECK(classify_links(corpus, all).coverage == 1.0);
}

TEST_CASE("classification falls back to rel_type when link is blank") {
  std::vector<NodeRecord> nodes{{1, NodeKind::Intermediary, "a", {}, ""}, {2, NodeKind::Entity, "e", {}, ""}};
  std::vector<EdgeRecord> edges{{1, 2, "intermediary_of", "", LinkClass::Other, 0}};
  auto corpus = Corpus::from_records(nodes, edges, LinkClassMap::defaults());
  CHECK(corpus.edges()[0].link_class == LinkClass::IntermediaryOf);
}

TEST_CASE("classify_links is idempotent and ingest reports are deterministic") {
  auto corpus = testing::load_fixture("ingest");
  const auto before = corpus.report().to_json().dump();
  const auto c1 = classify_links(corpus, LinkClassMap::defaults());
  const auto c2 = classify_links(corpus, LinkClassMap::defaults());
  CHECK(c1.matched == c2.matched);
  CHECK(c1.edges_per_class == c2.edges_per_class);
  CHECK(corpus.report().to_json().dump() == before);
  CHECK(testing::load_fixture("ingest").report().to_json().dump() == before);
}

TEST_CASE("node kind is inferred from ICIJ file names") {
  CHECK(node_kind_from_filename("nodes-officers.csv") == NodeKind::Officer);
  CHECK(node_kind_from_filename("nodes-entities.csv") == NodeKind::Entity);
  CHECK(node_kind_from_filename("nodes-intermediaries.csv") == NodeKind::Intermediary);
  CHECK(node_kind_from_filename("nodes-addresses.csv") == NodeKind::Address);
  CHECK_FALSE(node_kind_from_filename("relationships.csv"));
}
