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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "offnet/graph.hpp"
#include "offnet/ingest.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(OFFNET_FIXTURE_DIR) / name;
}

inline offnet::Corpus load_fixture(const std::string& dir) {
  const auto layout = offnet::icij_layout(fixture(dir));
  return offnet::load_corpus(layout.node_files, layout.edge_file, offnet::LinkClassMap::defaults());
}

/// Per-test scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("offnet-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& content) const {
    auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

/// Graph from "u v" pairs with explicit roles.
inline offnet::AnalysisGraph make_graph(offnet::GraphMode mode,
                                        std::initializer_list<std::pair<offnet::NodeId, offnet::NodeRole>> nodes,
                                        std::initializer_list<std::pair<offnet::NodeId, offnet::NodeId>> edges) {
  offnet::GraphBuilder b(mode);
  for (auto [id, role] : nodes) b.add_node(id, role);
  for (auto [u, v] : edges) b.add_edge(u, v);
  return std::move(b).build();
}

/// Star: intermediary 0 with `leaves` clients 1..leaves.
inline offnet::AnalysisGraph star(std::size_t leaves) {
  offnet::GraphBuilder b(offnet::GraphMode::Bipartite);
  b.add_node(0, offnet::NodeRole::Intermediary);
  for (std::size_t i = 1; i <= leaves; ++i) {
    b.add_node(static_cast<offnet::NodeId>(i), offnet::NodeRole::Client);
    b.add_edge(0, static_cast<offnet::NodeId>(i));
  }
  return std::move(b).build();
}

/// Bipartite fixture {c1-i1, c2-i1, c2-i2} with c1=1, c2=2, i1=11, i2=12.
inline offnet::AnalysisGraph small_bipartite() {
  using offnet::NodeRole;
  return make_graph(offnet::GraphMode::Bipartite,
                    {{1, NodeRole::Client}, {2, NodeRole::Client}, {11, NodeRole::Intermediary}, {12, NodeRole::Intermediary}},
                    {{1, 11}, {2, 11}, {2, 12}});
}

}  // namespace testing
