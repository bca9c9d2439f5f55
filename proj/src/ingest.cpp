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

#include "offnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "offnet/csv.hpp"
#include "offnet/error.hpp"

namespace offnet {

namespace {

constexpr std::string_view kDefaultLinkMap =
#include "default_link_map.inc"
    ;

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<NodeId> parse_id(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  NodeId value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{}) return std::nullopt;
  // ICIJ exports occasionally write ids as "12345.0".
  if (ptr != end) {
    if (*ptr != '.') return std::nullopt;
    for (++ptr; ptr != end; ++ptr)
      if (*ptr != '0') return std::nullopt;
  }
  return value;
}

std::vector<std::string> split_countries(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    auto code = trim(text.substr(start, end - start));
    if (!code.empty()) {
      std::string upper(code);
      for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (std::find(out.begin(), out.end(), upper) == out.end()) out.push_back(std::move(upper));
    }
    start = end + 1;
  }
  return out;
}

/// Column lookup by any of several accepted header names.
class Header {
 public:
  Header(const std::vector<std::string>& names, std::string file) : file_(std::move(file)) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      index_.emplace(lowercase(trim(names[i])), i);
    }
    width_ = names.size();
  }

  std::optional<std::size_t> find(std::initializer_list<std::string_view> aliases) const {
    for (auto alias : aliases) {
      auto it = index_.find(lowercase(alias));
      if (it != index_.end()) return it->second;
    }
    return std::nullopt;
  }

  std::size_t require(std::initializer_list<std::string_view> aliases) const {
    if (auto i = find(aliases)) return *i;
    throw DataError(file_ + ": missing required column '" + std::string(*aliases.begin()) + "'");
  }

  std::size_t width() const { return width_; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
  std::string file_;
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

/// Repairs encoding of every field, recording one issue per affected row.
void repair_record(csv::Record& record, const std::string& file, IngestReport& report) {
  std::size_t repairs = 0;
  for (auto& field : record.fields) repairs += csv::repair_utf8(field);
  if (repairs != 0) {
    report.encoding_repairs.push_back(
        {file, record.line, std::to_string(repairs) + " invalid UTF-8 sequence(s) replaced"});
  }
}

void load_nodes(const NodeFile& file, std::vector<NodeRecord>& nodes, IngestReport& report) {
  auto in = open_input(file.path);
  const std::string fname = file.path.filename().string();
  csv::Reader reader(in);
  csv::Record record;
  if (!reader.next(record)) throw DataError(fname + ": empty file (no header row)");
  const Header header(record.fields, fname);
  const auto id_col = header.require({"node_id", "id", "_id"});
  const auto name_col = header.find({"name"});
  // Prefer ISO codes when the export carries both spellings.
  const auto country_col = header.find({"country_codes", "countries"});
  if (!country_col) throw DataError(fname + ": missing required column 'countries'");
  const auto source_col = header.find({"sourceID", "source_id", "source"});
  if (!name_col && file.kind != NodeKind::Address)
    throw DataError(fname + ": missing required column 'name'");
  const auto address_col = header.find({"address"});

  while (reader.next(record)) {
    if (record.fields.size() == 1 && trim(record.fields[0]).empty()) continue;
    if (record.unterminated_quote) {
      report.malformed.push_back({fname, record.line, "unterminated quoted field"});
      continue;
    }
    if (record.fields.size() != header.width()) {
      report.malformed.push_back({fname, record.line,
                                  "expected " + std::to_string(header.width()) + " fields, got " +
                                      std::to_string(record.fields.size())});
      continue;
    }
    repair_record(record, fname, report);
    auto id = parse_id(record.fields[id_col]);
    if (!id) {
      report.malformed.push_back({fname, record.line, "node_id is not an integer"});
      continue;
    }
    NodeRecord node;
    node.node_id = *id;
    node.kind = file.kind;
    if (name_col) node.name = std::string(trim(record.fields[*name_col]));
    if (node.name.empty() && address_col) node.name = std::string(trim(record.fields[*address_col]));
    node.countries = split_countries(record.fields[*country_col]);
    if (source_col) node.source = std::string(trim(record.fields[*source_col]));
    nodes.push_back(std::move(node));
  }
}

void load_edges(const std::filesystem::path& path, std::vector<EdgeRecord>& edges,
                IngestReport& report) {
  auto in = open_input(path);
  const std::string fname = path.filename().string();
  csv::Reader reader(in);
  csv::Record record;
  if (!reader.next(record)) throw DataError(fname + ": empty file (no header row)");
  const Header header(record.fields, fname);
  const auto start_col = header.require({"node_id_start", "START_ID", ":START_ID"});
  const auto end_col = header.require({"node_id_end", "END_ID", ":END_ID"});
  const auto rel_col = header.require({"rel_type", "TYPE", ":TYPE"});
  const auto link_col = header.require({"link"});

  while (reader.next(record)) {
    if (record.fields.size() == 1 && trim(record.fields[0]).empty()) continue;
    ++report.edge_rows;
    if (record.unterminated_quote) {
      report.malformed.push_back({fname, record.line, "unterminated quoted field"});
      continue;
    }
    if (record.fields.size() != header.width()) {
      report.malformed.push_back({fname, record.line,
                                  "expected " + std::to_string(header.width()) + " fields, got " +
                                      std::to_string(record.fields.size())});
      continue;
    }
    repair_record(record, fname, report);
    auto start = parse_id(record.fields[start_col]);
    auto end = parse_id(record.fields[end_col]);
    if (!start || !end) {
      report.malformed.push_back({fname, record.line, "endpoint id is not an integer"});
      continue;
    }
    EdgeRecord edge;
    edge.start_id = *start;
    edge.end_id = *end;
    edge.rel_type = std::string(trim(record.fields[rel_col]));
    edge.raw_link = record.fields[link_col];
    edge.line = record.line;
    edges.push_back(std::move(edge));
  }
}

/// Link text used for classification: the verbatim link, falling back to
/// the rel_type column when the link cell is blank.
std::string classification_text(const EdgeRecord& edge) {
  std::string text = lowercase(trim(edge.raw_link));
  if (text.empty()) {
    text = lowercase(trim(edge.rel_type));
    std::replace(text.begin(), text.end(), '_', ' ');
  }
  return text;
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Officer: return "officer";
    case NodeKind::Entity: return "entity";
    case NodeKind::Intermediary: return "intermediary";
    case NodeKind::Address: return "address";
  }
  return "unknown";
}

std::string_view to_string(LinkClass cls) {
  switch (cls) {
    case LinkClass::Beneficiary: return "Beneficiary";
    case LinkClass::Nominee: return "Nominee";
    case LinkClass::OfficerIntermediary: return "OfficerIntermediary";
    case LinkClass::IntermediaryOf: return "IntermediaryOf";
    case LinkClass::RegisteredAddress: return "RegisteredAddress";
    case LinkClass::Other: return "Other";
  }
  return "Other";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  const auto t = lowercase(trim(text));
  if (t == "officer" || t == "officers") return NodeKind::Officer;
  if (t == "entity" || t == "entities") return NodeKind::Entity;
  if (t == "intermediary" || t == "intermediaries") return NodeKind::Intermediary;
  if (t == "address" || t == "addresses") return NodeKind::Address;
  return std::nullopt;
}

std::optional<LinkClass> parse_link_class(std::string_view text) {
  const auto t = lowercase(trim(text));
  for (auto cls : {LinkClass::Beneficiary, LinkClass::Nominee, LinkClass::OfficerIntermediary,
                   LinkClass::IntermediaryOf, LinkClass::RegisteredAddress, LinkClass::Other}) {
    if (lowercase(to_string(cls)) == t) return cls;
  }
  return std::nullopt;
}

bool NodeRecord::has_country(std::string_view code) const {
  return std::find(countries.begin(), countries.end(), code) != countries.end();
}

bool LinkRule::matches(std::string_view text) const {
  std::string_view p = pattern;
  bool anchor_start = false, anchor_end = false;
  if (!p.empty() && p.front() == '^') {
    anchor_start = true;
    p.remove_prefix(1);
  }
  if (!p.empty() && p.back() == '$') {
    anchor_end = true;
    p.remove_suffix(1);
  }
  if (anchor_start && anchor_end) return text == p;
  if (anchor_start) return text.starts_with(p);
  if (anchor_end) return text.ends_with(p);
  return text.find(p) != std::string_view::npos;
}

LinkClassMap::LinkClassMap(std::vector<LinkRule> rules, double coverage_target)
    : rules_(std::move(rules)), coverage_target_(coverage_target) {
  for (auto& rule : rules_) rule.pattern = lowercase(rule.pattern);
  if (coverage_target_ < 0.0 || coverage_target_ > 1.0)
    throw DataError("coverage_target must lie in [0, 1]");
}

LinkClassMap LinkClassMap::defaults() {
  std::istringstream in{std::string(kDefaultLinkMap)};
  return parse(in);
}

LinkClassMap LinkClassMap::parse(std::istream& in) {
  std::vector<LinkRule> rules;
  double target = 0.992;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (text.starts_with("coverage_target")) {
      auto eq = text.find('=');
      if (eq == std::string_view::npos)
        throw DataError("link map line " + std::to_string(lineno) + ": expected '='");
      target = std::stod(std::string(trim(text.substr(eq + 1))));
      continue;
    }
    std::size_t arrow = text.rfind("->");
    std::size_t arrow_len = 2;
    if (arrow == std::string_view::npos) {
      arrow = text.rfind("\xE2\x86\x92");  // U+2192
      arrow_len = 3;
    }
    if (arrow == std::string_view::npos)
      throw DataError("link map line " + std::to_string(lineno) + ": expected 'pattern -> class'");
    auto pattern = trim(text.substr(0, arrow));
    auto cls = parse_link_class(text.substr(arrow + arrow_len));
    if (pattern.empty() || !cls || *cls == LinkClass::Other)
      throw DataError("link map line " + std::to_string(lineno) + ": bad rule '" +
                      std::string(text) + "'");
    rules.push_back({std::string(pattern), *cls});
  }
  return LinkClassMap(std::move(rules), target);
}

LinkClassMap LinkClassMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open link map " + path.string());
  return parse(in);
}

std::string LinkClassMap::serialize() const {
  std::ostringstream out;
  out << "coverage_target = " << coverage_target_ << '\n';
  for (const auto& rule : rules_) out << rule.pattern << " -> " << to_string(rule.cls) << '\n';
  return out.str();
}

LinkClass LinkClassMap::classify(std::string_view link_text) const {
  const auto lowered = lowercase(trim(link_text));
  for (const auto& rule : rules_)
    if (rule.matches(lowered)) return rule.cls;
  return LinkClass::Other;
}

nlohmann::json IngestReport::to_json() const {
  using nlohmann::json;
  json j;
  json kinds = json::object();
  for (auto kind : {NodeKind::Officer, NodeKind::Entity, NodeKind::Intermediary, NodeKind::Address}) {
    auto it = nodes_per_kind.find(kind);
    kinds[std::string(to_string(kind))] = it == nodes_per_kind.end() ? 0 : it->second;
  }
  j["nodes_per_kind"] = kinds;
  j["edge_rows"] = edge_rows;
  j["edges_loaded"] = edges_loaded;
  json classes = json::object();
  for (auto [cls, count] : edges_per_class) classes[std::string(to_string(cls))] = count;
  j["edges_per_class"] = classes;
  j["coverage"] = coverage;
  j["coverage_target"] = coverage_target;
  auto issues = [](const std::vector<RowIssue>& list) {
    json arr = json::array();
    for (const auto& issue : list)
      arr.push_back({{"file", issue.file}, {"line", issue.line}, {"message", issue.message}});
    return arr;
  };
  j["malformed"] = issues(malformed);
  j["quarantined"] = issues(quarantined);
  j["encoding_repairs"] = issues(encoding_repairs);
  j["warnings"] = warnings;
  return j;
}

const NodeRecord* Corpus::find(NodeId id) const {
  auto pos = position(id);
  return pos ? &nodes_[*pos] : nullptr;
}

std::optional<std::size_t> Corpus::position(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const NodeRecord& n, NodeId v) { return n.node_id < v; });
  if (it == nodes_.end() || it->node_id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::vector<std::string> Corpus::country_codes() const {
  std::vector<std::string> codes;
  for (const auto& node : nodes_) codes.insert(codes.end(), node.countries.begin(), node.countries.end());
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

void Corpus::finalize(const LinkClassMap& map) {
  std::stable_sort(nodes_.begin(), nodes_.end(),
                   [](const NodeRecord& a, const NodeRecord& b) { return a.node_id < b.node_id; });
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (nodes_[i].node_id == nodes_[i - 1].node_id)
      throw DataError("duplicate node_id " + std::to_string(nodes_[i].node_id));
  }
  report_.nodes_per_kind.clear();
  for (const auto& node : nodes_) ++report_.nodes_per_kind[node.kind];

  std::vector<EdgeRecord> loaded;
  loaded.reserve(edges_.size());
  for (auto& edge : edges_) {
    if (position(edge.start_id) && position(edge.end_id)) {
      loaded.push_back(std::move(edge));
    } else {
      const NodeId missing = position(edge.start_id) ? edge.end_id : edge.start_id;
      report_.quarantined.push_back(
          {"relationships", edge.line, "unknown node_id " + std::to_string(missing)});
      quarantined_.push_back(std::move(edge));
    }
  }
  edges_ = std::move(loaded);
  report_.edges_loaded = edges_.size();
  report_.coverage_target = map.coverage_target();
  classify_links(*this, map);
}

Corpus Corpus::from_records(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges,
                            const LinkClassMap& map) {
  Corpus corpus;
  corpus.nodes_ = std::move(nodes);
  corpus.report_.edge_rows = edges.size();
  corpus.edges_ = std::move(edges);
  corpus.finalize(map);
  return corpus;
}

std::optional<NodeKind> node_kind_from_filename(const std::filesystem::path& path) {
  const auto name = lowercase(path.filename().string());
  if (name.find("officer") != std::string::npos) return NodeKind::Officer;
  if (name.find("entit") != std::string::npos) return NodeKind::Entity;
  if (name.find("intermediar") != std::string::npos) return NodeKind::Intermediary;
  if (name.find("address") != std::string::npos) return NodeKind::Address;
  return std::nullopt;
}

IcijLayout icij_layout(const std::filesystem::path& directory) {
  IcijLayout layout;
  for (auto [file, kind] : {std::pair{"nodes-officers.csv", NodeKind::Officer},
                            std::pair{"nodes-entities.csv", NodeKind::Entity},
                            std::pair{"nodes-intermediaries.csv", NodeKind::Intermediary},
                            std::pair{"nodes-addresses.csv", NodeKind::Address}}) {
    auto path = directory / file;
    if (std::filesystem::exists(path)) layout.node_files.push_back({path, kind});
  }
  layout.edge_file = directory / "relationships.csv";
  if (layout.node_files.empty())
    throw DataError("no nodes-*.csv files in " + directory.string());
  if (!std::filesystem::exists(layout.edge_file))
    throw DataError("missing " + layout.edge_file.string());
  return layout;
}

Corpus load_corpus(std::span<const NodeFile> node_files, const std::filesystem::path& edge_file,
                   const LinkClassMap& map) {
  Corpus corpus;
  for (const auto& file : node_files) load_nodes(file, corpus.nodes_, corpus.report_);
  load_edges(edge_file, corpus.edges_, corpus.report_);
  for (auto& issue : corpus.report_.quarantined) issue.file = edge_file.filename().string();
  corpus.finalize(map);
  for (auto& issue : corpus.report_.quarantined) issue.file = edge_file.filename().string();
  return corpus;
}

CoverageReport classify_links(Corpus& corpus, const LinkClassMap& map) {
  CoverageReport out;
  for (auto& edge : corpus.edges_) {
    edge.link_class = map.classify(classification_text(edge));
    ++out.edges_per_class[edge.link_class];
    if (edge.link_class != LinkClass::Other) ++out.matched;
  }
  for (auto& edge : corpus.quarantined_) edge.link_class = map.classify(classification_text(edge));
  out.total = corpus.edges_.size();
  out.coverage = out.total == 0 ? 1.0 : static_cast<double>(out.matched) / out.total;
  out.below_target = out.coverage < map.coverage_target();

  auto& report = corpus.report_;
  report.edges_per_class = out.edges_per_class;
  report.coverage = out.coverage;
  report.coverage_target = map.coverage_target();
  std::erase_if(report.warnings, [](const std::string& w) { return w.starts_with("link-class coverage"); });
  if (out.below_target) {
    std::ostringstream msg;
    msg << "link-class coverage " << out.coverage << " is below target " << map.coverage_target();
    report.warnings.push_back(msg.str());
  }
  return out;
}

}  // namespace offnet
