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

#include "offnet/report.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "offnet/csv.hpp"

namespace offnet::report {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

std::string line(const std::vector<std::string>& cells) { return csv::join(cells) + "\n"; }

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string degree_histogram_csv(const DegreeDistribution& dist) {
  std::string out = "degree,count\n";
  for (const auto& [k, count] : dist.histogram) out += std::to_string(k) + "," + std::to_string(count) + "\n";
  return out;
}

std::string node_metrics_csv(const AnalysisGraph& graph, std::span<const double> betweenness) {
  std::string out = "node_id,kind,degree,weighted_degree,betweenness\n";
  for (AnalysisGraph::Index v = 0; v < graph.node_count(); ++v) {
    out += line({std::to_string(graph.id(v)), std::string(to_string(graph.role(v))),
                 std::to_string(graph.degree(v)), std::to_string(graph.weighted_degree(v)),
                 betweenness.empty() ? "NA" : format_number(betweenness[v])});
  }
  return out;
}

nlohmann::json graph_summary_json(const CountrySlice& slice) {
  const auto comps = connected_components(slice.graph);
  nlohmann::json j;
  j["country"] = slice.country;
  j["mode"] = to_string(slice.graph.mode());
  j["clients"] = slice.clients.size();
  j["entities"] = slice.entities.size();
  j["intermediaries"] = slice.intermediaries.size();
  j["nodes"] = slice.graph.node_count();
  j["edges"] = slice.graph.edge_count();
  j["components"] = comps.members.size();
  j["lgc_nodes"] = comps.members.empty() ? 0 : comps.members.front().size();
  j["lgc_fraction"] = comps.lgc_fraction;
  return j;
}

std::string trajectory_csv(std::span<const KnockoutTrajectory> trajectories) {
  std::string out = "country,mode,strategy,k,removed,size,triangles,redundancy,clustering\n";
  for (const auto& t : trajectories) {
    for (std::size_t k = 0; k < t.normalized.size(); ++k) {
      std::vector<std::string> fields{t.country, std::string(to_string(t.mode)),
                                      std::string(to_string(t.strategy.criterion)), std::to_string(k),
                                      k == 0 ? std::string("NA") : std::to_string(t.removed[k - 1])};
      for (Metric m : kAllMetrics) fields.push_back(opt(t.normalized[k].get(m)));
      out += line(fields);
    }
  }
  return out;
}

nlohmann::json trajectory_json(const KnockoutTrajectory& t) {
  nlohmann::json j;
  j["country"] = t.country;
  j["mode"] = to_string(t.mode);
  j["strategy"] = {{"criterion", to_string(t.strategy.criterion)},
                   {"k_max", t.strategy.k_max},
                   {"recompute", t.strategy.recompute},
                   {"seed", t.strategy.seed}};
  j["removed"] = t.removed;
  j["truncated"] = t.truncated;
  j["warnings"] = t.warnings;
  auto steps = nlohmann::json::array();
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const auto& s = t.steps[k];
    nlohmann::json row{{"k", k},
                       {"size", s.size},
                       {"edges", s.edges},
                       {"triangles", s.triangles},
                       {"clustering", s.clustering},
                       {"redundancy_raw", s.redundancy_raw}};
    nlohmann::json norm = nlohmann::json::object();
    for (Metric m : kAllMetrics) {
      auto v = t.normalized[k].get(m);
      norm[std::string(to_string(m))] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    }
    row["normalized"] = norm;
    steps.push_back(row);
  }
  j["steps"] = steps;
  return j;
}

std::string ratio_csv(const std::string& country, GraphMode mode, const StrategyRatio& ratio) {
  std::string out = "country,mode,k,metric,r,flag\n";
  for (const auto& e : ratio.entries) {
    std::string flag;
    if (!e.r) flag = "absent";
    else if (e.infinite) flag = "zero_denominator";
    else if (e.victims_equal) flag = "same_victims";
    out += line({country, std::string(to_string(mode)), std::to_string(e.k), std::string(to_string(e.metric)),
                 opt(e.r), flag});
  }
  return out;
}

std::string random_baseline_csv(const std::string& country, GraphMode mode, const RandomBaseline& baseline) {
  std::string out = "country,mode,k,metric,mean,stddev,trials\n";
  for (const auto& s : baseline.steps) {
    for (Metric m : kAllMetrics) {
      const auto& st = s.get(m);
      out += line({country, std::string(to_string(mode)), std::to_string(s.k), std::string(to_string(m)),
                   opt(st.mean), opt(st.stddev), std::to_string(s.trials)});
    }
  }
  return out;
}

nlohmann::json fit_json(const PowerLawFit& fit) {
  nlohmann::json j;
  j["alpha"] = fit.alpha;
  j["xmin"] = fit.xmin;
  j["ks_statistic"] = fit.ks_statistic;
  j["n_tail"] = fit.n_tail;
  j["n_total"] = fit.n_total;
  j["method"] = to_string(fit.method);
  j["xmin_scanned"] = fit.xmin_scanned;
  j["min_tail"] = fit.min_tail;
  j["p_value"] = fit.p_value ? nlohmann::json(*fit.p_value) : nlohmann::json(nullptr);
  j["candidates"] = fit.scan.size();
  return j;
}

std::string fit_scan_csv(const PowerLawFit& fit) {
  std::string out = "xmin,alpha,ks_statistic,n_tail\n";
  for (const auto& c : fit.scan)
    out += line({std::to_string(c.xmin), format_number(c.alpha), format_number(c.ks_statistic),
                 std::to_string(c.n_tail)});
  return out;
}

std::string ccdf_csv(std::span<const std::int64_t> samples, const PowerLawFit& fit) {
  std::string out = "x,empirical_ccdf,model_ccdf\n";
  const double tail_fraction = static_cast<double>(fit.n_tail) / static_cast<double>(fit.n_total);
  for (const auto& [x, p] : empirical_ccdf(samples)) {
    const std::string model = x < fit.xmin ? "NA" : format_number(tail_fraction * power_law_ccdf(fit.alpha, fit.xmin, x));
    out += line({std::to_string(x), format_number(p), model});
  }
  return out;
}

std::string diversity_csv(const DiversityReport& report) {
  std::string out = "jurisdiction,count,share\n";
  for (const auto& [place, count] : report.counts)
    out += line({place, std::to_string(count), format_number(report.shares.at(place))});
  return out;
}

nlohmann::json diversity_json(const DiversityReport& r) {
  return {{"hhi", r.hhi},
          {"di_effective_count", r.di_effective_count},
          {"di_normalized", r.di_normalized},
          {"category_count", r.category_count},
          {"unknown_count", r.unknown_count},
          {"multi_country_count", r.multi_country_count},
          {"degenerate", r.degenerate}};
}

std::string match_review_csv(std::span<const SanctionMatch> matches) {
  std::string out = "query,method,matched_node_id,score,pinned,rank,candidate_node_id,candidate_name,candidate_score,error\n";
  for (const auto& m : matches) {
    const std::string matched = m.matched_node ? std::to_string(*m.matched_node) : "";
    const std::string common_err = m.error.value_or("");
    if (m.candidates.empty()) {
      out += line({m.query_name, std::string(to_string(m.method)), matched, format_number(m.score),
                   m.pinned ? "1" : "0", "", "", "", "", common_err});
      continue;
    }
    for (std::size_t r = 0; r < m.candidates.size(); ++r) {
      const auto& c = m.candidates[r];
      out += line({m.query_name, std::string(to_string(m.method)), matched, format_number(m.score),
                   m.pinned ? "1" : "0", std::to_string(r + 1), std::to_string(c.node), c.name,
                   format_number(c.score), common_err});
    }
  }
  return out;
}

std::string ego_edges_csv(const CorpusGraph& graph, const EgoSubgraph& ego) {
  const std::set<NodeId> seeds(ego.seeds.begin(), ego.seeds.end());
  auto label = [&](NodeId id) {
    return std::string(ego_label(graph, *graph.index_of(id), seeds.count(id) != 0));
  };
  std::string out = "source,target,source_label,target_label\n";
  for (const auto& e : ego.edges)
    out += line({std::to_string(e.u), std::to_string(e.v), label(e.u), label(e.v)});
  return out;
}

std::string ego_nodes_csv(const CorpusGraph& graph, const Corpus& corpus, const EgoSubgraph& ego) {
  const std::set<NodeId> seeds(ego.seeds.begin(), ego.seeds.end());
  std::string out = "node_id,name,label,component\n";
  for (NodeId id : ego.nodes) {
    const auto* node = corpus.find(id);
    auto it = ego.component_map.find(id);
    out += line({std::to_string(id), node ? node->name : "",
                 std::string(ego_label(graph, *graph.index_of(id), seeds.count(id) != 0)),
                 it == ego.component_map.end() ? "NA" : std::to_string(it->second)});
  }
  return out;
}

std::string stitch_csv(const StitchResult& stitched) {
  std::string out = "component_a,component_b,hops,path\n";
  for (const auto& p : stitched.paths) {
    std::string path;
    for (NodeId id : p.nodes) path += (path.empty() ? "" : " ") + std::to_string(id);
    out += line({std::to_string(p.component_a), std::to_string(p.component_b), std::to_string(p.nodes.size() - 1), path});
  }
  for (const auto& [a, b] : stitched.unbridged)
    out += line({std::to_string(a), std::to_string(b), "NA", "unbridged"});
  return out;
}

std::string tabulation_csv(const IntermediaryTabulation& table) {
  std::string out = "intermediary_id,intermediary,sanctioned_oligarchs,entities,clients\n";
  for (const auto& r : table.rows)
    out += line({std::to_string(r.intermediary), r.name, std::to_string(r.sanctioned_clients),
                 std::to_string(r.entity_count), std::to_string(r.total_clients)});
  return out;
}

}  // namespace offnet::report
