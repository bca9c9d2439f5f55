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

#include "offnet/synth.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "offnet/error.hpp"
#include "offnet/rng.hpp"

namespace offnet {

namespace {

/// Fenwick tree of non-negative weights supporting weighted draws.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0.0), weight_(n, 0.0) {}

  void set(std::size_t i, double w) {
    const double delta = w - weight_[i];
    weight_[i] = w;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }

  double weight(std::size_t i) const { return weight_[i]; }

  double total() const {
    double s = 0.0;
    for (std::size_t k = tree_.size() - 1; k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }

  /// Index i with probability weight(i) / total().
  std::size_t draw(Rng& rng) const {
    const std::size_t n = weight_.size();
    double target = rng.uniform01() * total();
    std::size_t pos = 0;
    for (std::size_t step = std::bit_floor(n); step != 0; step >>= 1) {
      if (pos + step <= n && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    if (pos >= n) pos = n - 1;
    // Rounding can land on a zero-weight slot; move to the next live one.
    for (std::size_t probe = 0; probe < n && weight_[pos] == 0.0; ++probe) pos = (pos + 1) % n;
    return pos;
  }

 private:
  std::vector<double> tree_;
  std::vector<double> weight_;
};

}  // namespace

nlohmann::json SynthConfig::to_json() const {
  return {{"n_clients", n_clients},
          {"n_intermediaries", n_intermediaries},
          {"mean_client_degree", mean_client_degree},
          {"attachment_bias", attachment_bias},
          {"seed", seed},
          {"with_entities", with_entities}};
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
  SynthConfig c;
  c.n_clients = j.value("n_clients", c.n_clients);
  c.n_intermediaries = j.value("n_intermediaries", c.n_intermediaries);
  c.mean_client_degree = j.value("mean_client_degree", c.mean_client_degree);
  c.attachment_bias = j.value("attachment_bias", c.attachment_bias);
  c.seed = j.value("seed", c.seed);
  c.with_entities = j.value("with_entities", c.with_entities);
  return c;
}

SynthNetwork generate(const SynthConfig& config) {
  if (config.n_intermediaries < 1) throw DataError("synth: need at least one intermediary");
  if (!(config.mean_client_degree >= 1.0))
    throw DataError("synth: mean_client_degree must be >= 1");
  if (config.mean_client_degree > static_cast<double>(config.n_intermediaries))
    throw DataError("synth: mean_client_degree exceeds the number of intermediaries");
  if (!(config.attachment_bias >= 0.0)) throw DataError("synth: attachment_bias must be >= 0");

  const std::size_t nc = config.n_clients;
  const std::size_t ni = config.n_intermediaries;
  const auto client_id = [](std::size_t c) { return static_cast<NodeId>(c + 1); };
  const auto intermediary_id = [nc](std::size_t i) { return static_cast<NodeId>(nc + i + 1); };
  auto attachment = [&](std::size_t degree) {
    return std::pow(static_cast<double>(degree + 1), config.attachment_bias);
  };

  Rng rng(config.seed);
  WeightTree tree(ni);
  std::vector<std::size_t> degree(ni, 0);
  for (std::size_t i = 0; i < ni; ++i) tree.set(i, attachment(0));

  std::vector<std::pair<std::size_t, std::size_t>> ties;  // (client, intermediary)
  ties.reserve(static_cast<std::size_t>(static_cast<double>(nc) * config.mean_client_degree) + 16);
  std::vector<std::size_t> picked;
  for (std::size_t c = 0; c < nc; ++c) {
    std::size_t d = 1 + static_cast<std::size_t>(rng.poisson(config.mean_client_degree - 1.0));
    d = std::min(d, ni);
    picked.clear();
    for (std::size_t k = 0; k < d; ++k) {
      const auto i = tree.draw(rng);
      picked.push_back(i);
      tree.set(i, 0.0);
    }
    for (auto i : picked) {
      ++degree[i];
      tree.set(i, attachment(degree[i]));
      ties.emplace_back(c, i);
    }
  }

  SynthNetwork out;
  GraphBuilder bip(GraphMode::Bipartite);
  auto& slice = out.bipartite;
  slice.country = kSynthCountry;
  for (std::size_t c = 0; c < nc; ++c) {
    slice.clients.push_back(client_id(c));
    bip.add_node(client_id(c), NodeRole::Client);
  }
  for (std::size_t i = 0; i < ni; ++i) {
    slice.intermediaries.push_back(intermediary_id(i));
    bip.add_node(intermediary_id(i), NodeRole::Intermediary);
  }
  for (const auto& [c, i] : ties) bip.add_edge(client_id(c), intermediary_id(i));
  slice.graph = std::move(bip).build();

  if (config.with_entities) {
    CountrySlice tri;
    tri.country = kSynthCountry;
    tri.clients = slice.clients;
    tri.intermediaries = slice.intermediaries;
    GraphBuilder builder(GraphMode::TripartiteInduced);
    for (NodeId id : tri.clients) builder.add_node(id, NodeRole::Client);
    for (NodeId id : tri.intermediaries) builder.add_node(id, NodeRole::Intermediary);
    NodeId next_entity = static_cast<NodeId>(nc + ni + 1);
    for (const auto& [c, i] : ties) {
      const NodeId e = next_entity++;
      tri.entities.push_back(e);
      builder.add_node(e, NodeRole::Entity);
      builder.add_edge(client_id(c), e);
      builder.add_edge(intermediary_id(i), e);
      builder.add_edge(client_id(c), intermediary_id(i));
    }
    tri.graph = std::move(builder).build();
    out.tripartite = std::move(tri);
  }
  return out;
}

}  // namespace offnet
