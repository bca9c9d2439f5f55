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
#include <optional>

#include <nlohmann/json.hpp>

#include "offnet/graph.hpp"

namespace offnet {

struct SynthConfig {
  std::size_t n_clients = 1000;
  std::size_t n_intermediaries = 50;
  /// Target mean client degree; client degree is 1 + Poisson(mean - 1).
  double mean_client_degree = 1.036;
  /// Attachment weight is (degree + 1)^bias: 0 uniform, 1 linear preferential.
  double attachment_bias = 1.0;
  std::uint64_t seed = 0;
  /// Also emit the entity layer (one entity per client-intermediary tie).
  bool with_entities = false;

  nlohmann::json to_json() const;
  static SynthConfig from_json(const nlohmann::json& j);
};

struct SynthNetwork {
  CountrySlice bipartite;
  std::optional<CountrySlice> tripartite;
};

inline constexpr const char* kSynthCountry = "SYN";

/// Seeded client-intermediary network grown by preferential attachment.
/// Clients get ids 1..n_clients, intermediaries the next n_intermediaries
/// ids, entities the ids after that. Throws DataError for infeasible configs.
SynthNetwork generate(const SynthConfig& config);

}  // namespace offnet
