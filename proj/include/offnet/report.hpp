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

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "offnet/attack.hpp"
#include "offnet/graph.hpp"
#include "offnet/metrics.hpp"
#include "offnet/powerlaw.hpp"
#include "offnet/sanctions.hpp"

// Serializers for every artifact the tool writes. All output is a pure
// function of its inputs: fixed column order, shortest round-trip number
// formatting, "NA" for absent values.
namespace offnet::report {

std::string format_number(double value);

std::string degree_histogram_csv(const DegreeDistribution& dist);
std::string node_metrics_csv(const AnalysisGraph& graph, std::span<const double> betweenness);
nlohmann::json graph_summary_json(const CountrySlice& slice);

std::string trajectory_csv(std::span<const KnockoutTrajectory> trajectories);
nlohmann::json trajectory_json(const KnockoutTrajectory& trajectory);

std::string ratio_csv(const std::string& country, GraphMode mode, const StrategyRatio& ratio);
std::string random_baseline_csv(const std::string& country, GraphMode mode, const RandomBaseline& baseline);

nlohmann::json fit_json(const PowerLawFit& fit);
std::string fit_scan_csv(const PowerLawFit& fit);
/// x, empirical P(X >= x), fitted P(X >= x) scaled to the tail fraction.
std::string ccdf_csv(std::span<const std::int64_t> samples, const PowerLawFit& fit);

std::string diversity_csv(const DiversityReport& report);
nlohmann::json diversity_json(const DiversityReport& report);

std::string match_review_csv(std::span<const SanctionMatch> matches);
std::string ego_edges_csv(const CorpusGraph& graph, const EgoSubgraph& ego);
std::string ego_nodes_csv(const CorpusGraph& graph, const Corpus& corpus, const EgoSubgraph& ego);
std::string stitch_csv(const StitchResult& stitched);
std::string tabulation_csv(const IntermediaryTabulation& table);

}  // namespace offnet::report
