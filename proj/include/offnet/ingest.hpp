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
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace offnet {

using NodeId = std::int64_t;

enum class NodeKind : std::uint8_t { Officer, Entity, Intermediary, Address };

/// Role class of a relationship after normalization of its link text.
enum class LinkClass : std::uint8_t {
  Beneficiary,
  Nominee,
  OfficerIntermediary,
  IntermediaryOf,
  RegisteredAddress,
  Other,
};

std::string_view to_string(NodeKind kind);
std::string_view to_string(LinkClass cls);
std::optional<NodeKind> parse_node_kind(std::string_view text);
std::optional<LinkClass> parse_link_class(std::string_view text);

struct NodeRecord {
  NodeId node_id = 0;
  NodeKind kind = NodeKind::Officer;
  std::string name;
  /// ISO-3166 alpha-3 codes, in file order.
  std::vector<std::string> countries;
  std::string source;

  bool has_country(std::string_view code) const;
};

struct EdgeRecord {
  NodeId start_id = 0;
  NodeId end_id = 0;
  std::string rel_type;
  std::string raw_link;
  LinkClass link_class = LinkClass::Other;
  /// Line in the relationship file where the row starts.
  std::size_t line = 0;
};

/// Case-insensitive matcher. Plain text matches as a substring; a leading '^'
/// anchors it to the start and a trailing '$' to the end of the link text.
struct LinkRule {
  std::string pattern;
  LinkClass cls = LinkClass::Other;

  bool matches(std::string_view lowered_text) const;
};

/// Ordered rule list; the first matching rule decides the class.
class LinkClassMap {
 public:
  LinkClassMap() = default;
  LinkClassMap(std::vector<LinkRule> rules, double coverage_target);

  /// Map shipped with the tool (also in data/link_classes.default.txt).
  static LinkClassMap defaults();

  /// Parses the plain-text form: one "pattern -> class" rule per line
  /// ("→" is accepted as the arrow), '#' comments, and an optional
  /// "coverage_target = <fraction>" line.
  static LinkClassMap parse(std::istream& in);
  static LinkClassMap load(const std::filesystem::path& path);

  std::string serialize() const;

  LinkClass classify(std::string_view link_text) const;

  const std::vector<LinkRule>& rules() const { return rules_; }
  double coverage_target() const { return coverage_target_; }

 private:
  std::vector<LinkRule> rules_;
  double coverage_target_ = 0.992;
};

struct RowIssue {
  std::string file;
  std::size_t line = 0;
  std::string message;
};

struct IngestReport {
  std::map<NodeKind, std::size_t> nodes_per_kind;
  std::size_t edge_rows = 0;
  std::size_t edges_loaded = 0;
  std::map<LinkClass, std::size_t> edges_per_class;
  /// Fraction of loaded edges with a class other than Other; 1.0 when there
  /// are no edges.
  double coverage = 1.0;
  double coverage_target = 0.992;
  std::vector<RowIssue> malformed;
  std::vector<RowIssue> quarantined;
  std::vector<RowIssue> encoding_repairs;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

struct CoverageReport {
  std::map<LinkClass, std::size_t> edges_per_class;
  std::size_t matched = 0;
  std::size_t total = 0;
  double coverage = 1.0;
  bool below_target = false;
};

struct NodeFile {
  std::filesystem::path path;
  NodeKind kind = NodeKind::Officer;
};

/// All parsed rows of one load. Nodes are kept sorted by node_id.
class Corpus {
 public:
  const std::vector<NodeRecord>& nodes() const { return nodes_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  /// Edges whose endpoints did not resolve to a loaded node.
  const std::vector<EdgeRecord>& quarantined() const { return quarantined_; }
  const IngestReport& report() const { return report_; }

  const NodeRecord* find(NodeId id) const;
  /// Position of a node in nodes(), if loaded.
  std::optional<std::size_t> position(NodeId id) const;

  /// Sorted, de-duplicated set of every country code on any node.
  std::vector<std::string> country_codes() const;

  /// Builds a corpus directly from records (fixtures, tests). Edges with
  /// unknown endpoints are quarantined just as in load_corpus.
  static Corpus from_records(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges,
                             const LinkClassMap& map);

 private:
  friend Corpus load_corpus(std::span<const NodeFile>, const std::filesystem::path&,
                            const LinkClassMap&);
  friend CoverageReport classify_links(Corpus&, const LinkClassMap&);

  void finalize(const LinkClassMap& map);

  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::vector<EdgeRecord> quarantined_;
  IngestReport report_;
};

/// Guesses the node kind from an ICIJ file name such as nodes-officers.csv.
std::optional<NodeKind> node_kind_from_filename(const std::filesystem::path& path);

/// The four node files and relationships.csv of an ICIJ download directory.
struct IcijLayout {
  std::vector<NodeFile> node_files;
  std::filesystem::path edge_file;
};
IcijLayout icij_layout(const std::filesystem::path& directory);

/// Parses node and relationship CSVs. Missing required columns and duplicate
/// node ids throw DataError; malformed rows are skipped and reported.
Corpus load_corpus(std::span<const NodeFile> node_files, const std::filesystem::path& edge_file,
                   const LinkClassMap& map);

/// Re-derives every edge's class from its link text. Idempotent.
CoverageReport classify_links(Corpus& corpus, const LinkClassMap& map);

}  // namespace offnet
