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

// offnet command-line front end. Each subcommand reads its inputs, writes
// its artifacts into the output directory, and records a manifest.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "offnet/attack.hpp"
#include "offnet/error.hpp"
#include "offnet/graph.hpp"
#include "offnet/ingest.hpp"
#include "offnet/metrics.hpp"
#include "offnet/parallel.hpp"
#include "offnet/powerlaw.hpp"
#include "offnet/report.hpp"
#include "offnet/sanctions.hpp"
#include "offnet/synth.hpp"

#ifndef OFFNET_VERSION
#define OFFNET_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace offnet;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

/// Output-side failure (cannot create or rename an artifact).
class IoError : public Error {
 public:
  using Error::Error;
};

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

/// State of one invocation: everything that ends up in the manifest.
struct Run {
  std::string command;
  std::vector<std::string> argv;
  fs::path out_dir;
  json config = json::object();
  json inputs = json::array();
  json outputs = json::array();
  json results = json::object();
  std::vector<std::string> warnings;
  std::size_t peak_nodes = 0;
  std::size_t peak_edges = 0;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void note_graph(const AnalysisGraph& g) {
    peak_nodes = std::max(peak_nodes, g.node_count());
    peak_edges = std::max(peak_edges, g.edge_count());
  }

  void note_input(const fs::path& path) {
    for (const auto& in : inputs)
      if (in["path"] == path.string()) return;
    std::error_code ec;
    const auto bytes = fs::file_size(path, ec);
    inputs.push_back({{"path", path.string()},
                      {"bytes", ec ? json(nullptr) : json(bytes)},
                      {"sha256", sha256_file(path)}});
  }

  void warn(const std::vector<std::string>& ws, const std::string& prefix = "") {
    for (const auto& w : ws)
      if (std::find(warnings.begin(), warnings.end(), prefix + w) == warnings.end()) warnings.push_back(prefix + w);
  }

  void write(const std::string& name, const std::string& content) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    const fs::path target = out_dir / name;
    const fs::path tmp = out_dir / ("." + name + ".tmp-" + std::to_string(::getpid()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + tmp.string());
      out << content;
      out.flush();
      if (!out) throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) {
      fs::remove(tmp);
      throw IoError("cannot move " + tmp.string() + " to " + target.string() + ": " + ec.message());
    }
    if (std::find(outputs.begin(), outputs.end(), name) == outputs.end()) outputs.push_back(name);
  }

  void write_manifest() {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json m;
    m["tool"] = "offnet";
    m["version"] = OFFNET_VERSION;
    m["command"] = command;
    m["argv"] = argv;
    m["config"] = config;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["results"] = results;
    m["warnings"] = warnings;
    m["peak_nodes"] = peak_nodes;
    m["peak_edges"] = peak_edges;
    m["wall_clock_seconds"] = seconds;
    write(command + ".manifest.json", m.dump(2) + "\n");
  }
};

struct CorpusArgs {
  std::string data_dir;
  std::vector<std::string> nodes;
  std::string edges;
  std::string link_map;

  bool given() const { return !data_dir.empty() || !nodes.empty() || !edges.empty(); }
};

struct SliceArgs {
  CorpusArgs corpus;
  std::string graph;
  std::vector<std::string> countries;
  std::string mode;
};

struct Common {
  unsigned threads = 0;
  std::string out;
  std::uint64_t seed = 0;
  std::string format = "csv";
};

void add_corpus_options(CLI::App* app, CorpusArgs& a) {
  app->add_option("--data-dir", a.data_dir, "ICIJ download directory (nodes-*.csv, relationships.csv)")
      ->check(CLI::ExistingDirectory);
  app->add_option("--nodes", a.nodes, "Node CSV file; kind taken from the file name (repeatable)")
      ->check(CLI::ExistingFile);
  app->add_option("--edges", a.edges, "Relationship CSV file")->check(CLI::ExistingFile);
  app->add_option("--link-map", a.link_map, "Link-class rule file (default: built-in map)")
      ->check(CLI::ExistingFile);
}

void add_slice_options(CLI::App* app, SliceArgs& a, bool graph_input = true) {
  add_corpus_options(app, a.corpus);
  if (graph_input)
    app->add_option("--graph", a.graph, "Edge-list file written by the slice command")->check(CLI::ExistingFile);
  app->add_option("--country", a.countries, "ISO-3166 alpha-3 code (repeatable)");
  app->add_option("--mode", a.mode, "Graph mode")->check(CLI::IsMember({"bipartite", "tripartite"}));
}

void add_common_options(CLI::App* app, Common& c, bool seeded) {
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  app->add_option("--out", c.out, "Output directory (default: $OFFNET_OUT_DIR or .)");
  if (seeded) app->add_option("--seed", c.seed, "Random seed");
}

LinkClassMap link_map_of(const CorpusArgs& a, Run& run) {
  if (a.link_map.empty()) return LinkClassMap::defaults();
  run.note_input(a.link_map);
  return LinkClassMap::load(a.link_map);
}

Corpus load(const CorpusArgs& a, Run& run) {
  if (!a.data_dir.empty() && (!a.nodes.empty() || !a.edges.empty()))
    throw UsageError("--data-dir cannot be combined with --nodes/--edges");
  std::vector<NodeFile> files;
  fs::path edge_file;
  if (!a.data_dir.empty()) {
    auto layout = icij_layout(a.data_dir);
    files = std::move(layout.node_files);
    edge_file = layout.edge_file;
  } else {
    if (a.nodes.empty() || a.edges.empty()) throw UsageError("need --data-dir, or --nodes and --edges");
    for (const auto& n : a.nodes) {
      auto kind = node_kind_from_filename(n);
      if (!kind) throw UsageError("cannot tell the node kind of " + n + " from its name");
      files.push_back({n, *kind});
    }
    edge_file = a.edges;
  }
  for (const auto& f : files) run.note_input(f.path);
  run.note_input(edge_file);
  const auto map = link_map_of(a, run);
  auto corpus = load_corpus(files, edge_file, map);
  run.warn(corpus.report().warnings);
  return corpus;
}

std::vector<CountrySlice> load_slices(const SliceArgs& a, GraphMode default_mode, Run& run) {
  std::vector<CountrySlice> out;
  if (!a.graph.empty()) {
    if (a.corpus.given()) throw UsageError("--graph cannot be combined with corpus inputs");
    if (a.countries.size() > 1) throw UsageError("--graph takes at most one --country label");
    run.note_input(a.graph);
    std::ifstream in(a.graph);
    auto graph = read_edge_list(in);
    auto slice = slice_from_graph(std::move(graph), a.countries.empty() ? "NA" : a.countries.front());
    if (!a.mode.empty()) {
      const auto want = *parse_graph_mode(a.mode);
      if (want == GraphMode::Bipartite && slice.graph.mode() == GraphMode::TripartiteInduced)
        slice = induce_bipartite(slice);
      else if (want != slice.graph.mode())
        throw UsageError("a bipartite edge list cannot be read as tripartite");
    }
    run.note_graph(slice.graph);
    out.push_back(std::move(slice));
    return out;
  }
  if (a.countries.empty()) throw UsageError("--country is required with corpus inputs");
  const auto corpus = load(a.corpus, run);
  const GraphMode mode = a.mode.empty() ? default_mode : *parse_graph_mode(a.mode);
  for (const auto& c : a.countries) {
    out.push_back(build_country_slice(corpus, c, mode));
    run.note_graph(out.back().graph);
  }
  return out;
}

std::string tag(const CountrySlice& s) { return s.country + "_" + std::string(to_string(s.graph.mode())); }

std::vector<std::int64_t> read_samples(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  std::vector<std::int64_t> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(line, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size()) throw DataError(path.string() + ":" + std::to_string(n) + ": not an integer");
  }
  return out;
}

std::string edge_list_text(const AnalysisGraph& g) {
  std::ostringstream out;
  write_edge_list(out, g);
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  Run run;
  for (int i = 0; i < argc; ++i) run.argv.emplace_back(argv[i]);

  CLI::App app{"offnet: offshore client-intermediary network analysis"};
  app.set_version_flag("--version", OFFNET_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  CorpusArgs ingest_args;
  SliceArgs slice_args;

  auto* ingest = app.add_subcommand("ingest", "Parse node and relationship files and report coverage");
  add_corpus_options(ingest, ingest_args);
  add_common_options(ingest, common, false);

  auto* slice = app.add_subcommand("slice", "Build country networks and write them as edge lists");
  add_slice_options(slice, slice_args, false);
  add_common_options(slice, common, false);

  auto* metrics = app.add_subcommand("metrics", "Degree histograms, betweenness and summary metrics");
  std::size_t sampled_sources = 0;
  add_slice_options(metrics, slice_args);
  add_common_options(metrics, common, true);
  metrics->add_option("--sampled-sources", sampled_sources, "Approximate betweenness from this many sources");

  auto* fit = app.add_subcommand("fit", "Fit a discrete power law to degrees or integer samples");
  std::string samples_file, node_class = "intermediaries", fit_method = "continuous";
  std::optional<std::int64_t> xmin;
  std::size_t min_tail = 10, n_boot = 0;
  add_slice_options(fit, slice_args);
  add_common_options(fit, common, true);
  fit->add_option("--samples", samples_file, "File with one positive integer per line")->check(CLI::ExistingFile);
  fit->add_option("--class", node_class, "Degree samples of this node class")
      ->check(CLI::IsMember({"clients", "intermediaries", "all"}));
  fit->add_option("--xmin", xmin, "Fixed cutoff (default: scan)");
  fit->add_option("--min-tail", min_tail, "Smallest tail considered by the scan");
  fit->add_option("--method", fit_method, "Estimator")->check(CLI::IsMember({"continuous", "exact"}));
  fit->add_option("--bootstrap", n_boot, "Bootstrap replicates for the p-value (0 = none, else >= 100)");

  auto* knockout = app.add_subcommand("knockout", "Targeted intermediary removal experiment");
  std::vector<std::string> strategies{"degree"};
  std::size_t k_max = 3, trials = 0;
  bool recompute = false, lgc_only = false;
  add_slice_options(knockout, slice_args);
  add_common_options(knockout, common, true);
  knockout->add_option("--strategy", strategies, "degree, betweenness or random (repeatable)")
      ->check(CLI::IsMember({"degree", "betweenness", "random"}));
  knockout->add_option("--k", k_max, "Number of removals")->check(CLI::PositiveNumber);
  knockout->add_flag("--recompute", recompute, "Re-rank after every removal");
  knockout->add_flag("--lgc-only", lgc_only, "Start from the largest connected component");
  knockout->add_option("--trials", trials, "Random-removal baseline trials (0 = none)");
  knockout->add_option("--format", common.format, "Trajectory format")->check(CLI::IsMember({"csv", "json"}));

  auto* ratio = app.add_subcommand("ratio", "Betweenness-attack over degree-attack damage ratio");
  add_slice_options(ratio, slice_args);
  add_common_options(ratio, common, false);
  ratio->add_option("--k", k_max, "Number of removals")->check(CLI::PositiveNumber);
  ratio->add_flag("--recompute", recompute, "Re-rank after every removal");
  ratio->add_flag("--lgc-only", lgc_only, "Start from the largest connected component");

  auto* diversity = app.add_subcommand("diversity", "Jurisdiction concentration of a country's intermediaries");
  add_slice_options(diversity, slice_args, false);
  add_common_options(diversity, common, false);
  diversity->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* sanctions = app.add_subcommand("sanctions", "Match sanctioned names and extract their network");
  std::string names_file, match_method = "token_set";
  double threshold = 0.85;
  std::size_t hop_budget = 6, radius = 1;
  bool include_addresses = false;
  add_corpus_options(sanctions, slice_args.corpus);
  add_common_options(sanctions, common, false);
  sanctions->add_option("--names", names_file, "Seed list: one name per line, optional ',node_id' pin")
      ->required()
      ->check(CLI::ExistingFile);
  sanctions->add_option("--threshold", threshold, "Minimum similarity to accept a match")
      ->check(CLI::Range(0.0, 1.0));
  sanctions->add_option("--method", match_method, "Name matcher")
      ->check(CLI::IsMember({"exact", "token_set", "edit_ratio"}));
  sanctions->add_option("--hop-budget", hop_budget, "Longest stitching path in edges");
  sanctions->add_option("--radius", radius, "Ego neighborhood radius");
  sanctions->add_flag("--include-addresses", include_addresses, "Traverse address nodes");

  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic client-intermediary network");
  SynthConfig synth_cfg;
  add_common_options(synth, common, true);
  synth->add_option("--clients", synth_cfg.n_clients, "Number of clients");
  synth->add_option("--intermediaries", synth_cfg.n_intermediaries, "Number of intermediaries");
  synth->add_option("--mean-degree", synth_cfg.mean_client_degree, "Target mean client degree");
  synth->add_option("--bias", synth_cfg.attachment_bias, "Attachment exponent (0 uniform, 1 linear)");
  synth->add_flag("--entities", synth_cfg.with_entities, "Also write the tripartite network");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << json{{"error", {{"type", "usage"}, {"message", e.what()}, {"exit_code", kExitUsage}}}}.dump()
              << "\n";
    return kExitUsage;
  }

  auto* sub = app.get_subcommands().front();
  run.command = sub->get_name();
  if (!common.out.empty()) {
    run.out_dir = common.out;
  } else if (const char* env = std::getenv("OFFNET_OUT_DIR"); env && *env) {
    run.out_dir = env;
  } else {
    run.out_dir = ".";
  }
  for (const auto* opt : sub->get_options()) {
    if (opt->get_name().empty() || opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
    const auto& name = opt->get_lnames().front();
    const auto values = opt->results();
    if (opt->get_type_size() == 0 || opt->get_expected_max() == 0) {
      run.config[name] = opt->count() > 0;
    } else if (opt->get_expected_max() > 1) {
      run.config[name] = values;
    } else {
      run.config[name] = values.empty() ? json(opt->get_default_str()) : json(values.front());
    }
  }
  run.config["threads_resolved"] = resolve_threads(common.threads);
  run.config["out_dir"] = run.out_dir.string();

  const unsigned threads = common.threads;
  try {
    if (run.command == "ingest") {
      const auto corpus = load(ingest_args, run);
      const auto& rep = corpus.report();
      run.write("ingest_report.json", rep.to_json().dump(2) + "\n");
      std::string countries = "country\n";
      for (const auto& c : corpus.country_codes()) countries += c + "\n";
      run.write("countries.csv", countries);
      run.results = {{"nodes", corpus.nodes().size()},
                     {"edges", corpus.edges().size()},
                     {"quarantined", corpus.quarantined().size()},
                     {"coverage", rep.coverage}};
      run.peak_nodes = corpus.nodes().size();
      run.peak_edges = corpus.edges().size();
    } else if (run.command == "slice") {
      const auto slices = load_slices(slice_args, GraphMode::TripartiteInduced, run);
      for (const auto& s : slices) {
        run.write("slice_" + tag(s) + ".edges", edge_list_text(s.graph));
        const auto summary = report::graph_summary_json(s);
        run.write("slice_" + tag(s) + ".json", summary.dump(2) + "\n");
        run.results[tag(s)] = summary;
        if (s.clients.empty()) run.warn({"country " + s.country + " has no beneficiary clients"});
      }
    } else if (run.command == "metrics") {
      const auto slices = load_slices(slice_args, GraphMode::Bipartite, run);
      for (const auto& s : slices) {
        const auto pruned = remove_nodes(s.graph, {}, true);
        const auto clients = degree_distribution(pruned, NodeClass::Clients);
        const auto inters = degree_distribution(pruned, NodeClass::Intermediaries);
        run.write("degree_" + tag(s) + "_clients.csv", report::degree_histogram_csv(clients));
        run.write("degree_" + tag(s) + "_intermediaries.csv", report::degree_histogram_csv(inters));
        BetweennessOptions bopts;
        bopts.threads = threads;
        bopts.sampled_sources = sampled_sources;
        bopts.seed = common.seed;
        const auto bc = betweenness_scores(pruned, bopts);
        run.write("node_metrics_" + tag(s) + ".csv", report::node_metrics_csv(pruned, bc));
        auto summary = report::graph_summary_json(s);
        summary["client_mean_degree"] = clients.mean ? json(*clients.mean) : json(nullptr);
        summary["intermediary_mean_degree"] = inters.mean ? json(*inters.mean) : json(nullptr);
        summary["client_intermediary_ratio"] =
            s.intermediaries.empty() ? json(nullptr) : json(client_intermediary_ratio(s));
        const auto snap = robustness_snapshot(pruned, 0);
        summary["redundancy_raw"] = snap.redundancy_raw;
        if (s.graph.mode() == GraphMode::Bipartite) {
          summary["triangles"] = nullptr;
          summary["clustering"] = nullptr;
          run.warn({"triangles and clustering are identically zero in bipartite mode; reported as absent"},
                   tag(s) + ": ");
        } else {
          summary["triangles"] = snap.triangles;
          summary["clustering"] = snap.clustering;
        }
        summary["betweenness"] = sampled_sources ? "sampled" : "exact";
        run.write("metrics_" + tag(s) + ".json", summary.dump(2) + "\n");
        run.results[tag(s)] = summary;
      }
    } else if (run.command == "fit") {
      if (!samples_file.empty() && (!slice_args.graph.empty() || slice_args.corpus.given()))
        throw UsageError("--samples cannot be combined with graph inputs");
      std::vector<std::pair<std::string, std::vector<std::int64_t>>> sets;
      if (!samples_file.empty()) {
        run.note_input(samples_file);
        sets.emplace_back("samples", read_samples(samples_file));
      } else {
        const auto cls = node_class == "clients"          ? NodeClass::Clients
                         : node_class == "intermediaries" ? NodeClass::Intermediaries
                                                          : NodeClass::All;
        for (const auto& s : load_slices(slice_args, GraphMode::Bipartite, run))
          sets.emplace_back(tag(s) + "_" + node_class,
                            degree_samples(remove_nodes(s.graph, {}, true), cls));
      }
      FitOptions fopts;
      fopts.xmin = xmin;
      fopts.min_tail = min_tail;
      fopts.method = fit_method == "exact" ? MleMethod::ExactZeta : MleMethod::ContinuousApprox;
      for (auto& [label, xs] : sets) {
        auto result = fit_power_law(xs, fopts);
        if (n_boot > 0) {
          BootstrapOptions bo;
          bo.n_boot = n_boot;
          bo.seed = common.seed;
          bo.threads = threads;
          result.p_value = bootstrap_gof(xs, result, bo);
        }
        const auto j = report::fit_json(result);
        run.write("fit_" + label + ".json", j.dump(2) + "\n");
        run.write("fit_scan_" + label + ".csv", report::fit_scan_csv(result));
        run.write("ccdf_" + label + ".csv", report::ccdf_csv(xs, result));
        run.results[label] = j;
      }
    } else if (run.command == "knockout") {
      KnockoutOptions kopts;
      kopts.lgc_only = lgc_only;
      kopts.threads = threads;
      std::vector<KnockoutTrajectory> all;
      json as_json = json::array();
      for (const auto& s : load_slices(slice_args, GraphMode::TripartiteInduced, run)) {
        for (const auto& name : strategies) {
          AttackStrategy st;
          st.criterion = *parse_criterion(name);
          st.k_max = k_max;
          st.recompute = recompute;
          st.seed = common.seed;
          all.push_back(run_knockout(s, st, kopts));
          run.warn(all.back().warnings, tag(s) + " " + name + ": ");
          as_json.push_back(report::trajectory_json(all.back()));
        }
        if (trials > 0) {
          const auto base = random_baseline(s, k_max, trials, common.seed, kopts);
          run.write("baseline_" + tag(s) + ".csv", report::random_baseline_csv(s.country, s.graph.mode(), base));
          run.warn(base.warnings, tag(s) + " random baseline: ");
        }
      }
      if (common.format == "json")
        run.write("knockout.json", as_json.dump(2) + "\n");
      else
        run.write("knockout.csv", report::trajectory_csv(all));
      run.results["trajectories"] = all.size();
    } else if (run.command == "ratio") {
      KnockoutOptions kopts;
      kopts.lgc_only = lgc_only;
      kopts.threads = threads;
      for (const auto& s : load_slices(slice_args, GraphMode::Bipartite, run)) {
        const auto r = strategy_ratio(s, k_max, kopts, recompute);
        run.warn(r.degree.warnings, tag(s) + " degree: ");
        run.warn(r.betweenness.warnings, tag(s) + " betweenness: ");
        run.write("ratio_" + tag(s) + ".csv", report::ratio_csv(s.country, s.graph.mode(), r));
        json per_k = json::array();
        for (const auto& e : r.entries)
          if (e.metric == Metric::Size) per_k.push_back(e.r ? json(report::format_number(*e.r)) : json(nullptr));
        run.results[tag(s)] = {{"size_ratio", per_k}, {"degree_victims", r.degree.removed},
                               {"betweenness_victims", r.betweenness.removed}};
      }
    } else if (run.command == "diversity") {
      if (slice_args.countries.empty()) throw UsageError("--country is required");
      const auto corpus = load(slice_args.corpus, run);
      for (const auto& c : slice_args.countries) {
        const auto s = build_country_slice(corpus, c, GraphMode::Bipartite);
        run.note_graph(s.graph);
        const auto d = diversity_index(s, corpus);
        if (common.format == "json")
          run.write("diversity_" + c + ".json", report::diversity_json(d).dump(2) + "\n");
        else
          run.write("diversity_" + c + ".csv", report::diversity_csv(d));
        run.results[c] = report::diversity_json(d);
        if (d.degenerate) run.warn({"country " + c + ": a single jurisdiction; diversity is degenerate"});
      }
    } else if (run.command == "sanctions") {
      const auto corpus = load(slice_args.corpus, run);
      run.note_input(names_file);
      std::ifstream in(names_file);
      const auto queries = parse_seed_list(in);
      if (threshold <= 0.0) throw UsageError("--threshold must be in (0, 1]");
      const auto matches = match_names(queries, corpus, threshold, *parse_match_method(match_method), threads);
      run.write("match_review.csv", report::match_review_csv(matches));
      std::set<NodeId> seed_set;
      for (const auto& m : matches)
        if (m.matched_node) seed_set.insert(*m.matched_node);
      const std::vector<NodeId> seeds(seed_set.begin(), seed_set.end());
      run.results["queries"] = queries.size();
      run.results["matched"] = seeds.size();
      if (seeds.empty()) {
        run.warn({"no sanctioned name matched; network outputs not written"});
      } else {
        const CorpusGraph graph(corpus, include_addresses);
        run.peak_nodes = std::max(run.peak_nodes, graph.node_count());
        run.peak_edges = std::max(run.peak_edges, graph.edge_count());
        const auto ego = build_ego_subgraph(graph, seeds, radius);
        const auto stitched = stitch_components(graph, ego, hop_budget);
        const auto merged = merge_paths(graph, ego, stitched);
        run.write("ego_nodes.csv", report::ego_nodes_csv(graph, corpus, merged));
        run.write("ego_edges.csv", report::ego_edges_csv(graph, merged));
        run.write("stitch.csv", report::stitch_csv(stitched));
        run.write("tabulation.csv", report::tabulation_csv(tabulate_intermediaries(corpus, seeds)));
        run.results["ego_components"] = ego.component_count;
        run.results["stitched_paths"] = stitched.paths.size();
        run.results["unbridged_pairs"] = stitched.unbridged.size();
        run.results["network_nodes"] = merged.nodes.size();
        run.results["network_edges"] = merged.edges.size();
        if (!stitched.unbridged.empty())
          run.warn({std::to_string(stitched.unbridged.size()) + " component pairs not bridged within " +
                    std::to_string(hop_budget) + " hops"});
      }
    } else if (run.command == "synth") {
      synth_cfg.seed = common.seed;
      const auto net = generate(synth_cfg);
      run.note_graph(net.bipartite.graph);
      run.write("synth_config.json", synth_cfg.to_json().dump(2) + "\n");
      run.write("synth_bipartite.edges", edge_list_text(net.bipartite.graph));
      run.results["bipartite"] = report::graph_summary_json(net.bipartite);
      if (net.tripartite) {
        run.note_graph(net.tripartite->graph);
        run.write("synth_tripartite.edges", edge_list_text(net.tripartite->graph));
        run.results["tripartite"] = report::graph_summary_json(*net.tripartite);
      }
    }
    run.write_manifest();
  } catch (const Error& e) {
    const bool usage = dynamic_cast<const UsageError*>(&e) != nullptr;
    const bool io = dynamic_cast<const IoError*>(&e) != nullptr;
    const int code = usage ? kExitUsage : io ? kExitInternal : kExitData;
    std::cerr << json{{"error", {{"type", usage ? "usage" : io ? "io" : "data"}, {"message", e.what()}, {"exit_code", code}}}}
                     .dump()
              << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "internal"}, {"message", e.what()}, {"exit_code", kExitInternal}}}}.dump()
              << "\n";
    return kExitInternal;
  }
  return 0;
}
