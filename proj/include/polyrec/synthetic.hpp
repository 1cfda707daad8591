// Copyright 2026 The Polyrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef POLYREC_SYNTHETIC_HPP_
#define POLYREC_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "polyrec/types.hpp"

namespace polyrec {

struct SyntheticOptions {
  size_t n_users = 200;
  size_t n_items = 400;
  size_t n_clusters = 4;
  uint64_t seed = 1;
  size_t items_per_user = 10;
  double own_cluster_share = 0.9;
  size_t dim = 32;
  double noise = 1.0;  // stddev around the cluster centroid
  // Space for the generated embeddings; defaults to SyntheticSpaceId().
  std::string space_id;
  // Context tag attached to every interaction, with this many values.
  std::string context_tag = "location";
};

struct SyntheticData {
  std::vector<Item> items;
  std::vector<Interaction> interactions;
  std::vector<EmbeddingRecord> embeddings;
};

// Space id of the config's first embedding source, or "synthetic".
std::string SyntheticSpaceId(const DomainConfig& config);

// Clustered data: user u and item j belong to clusters u % C and j % C.
// Users mostly interact with items of their own cluster, items share a
// per-cluster vocabulary, and embeddings are cluster centroid plus noise.
// Output depends only on the config types and `options`.
SyntheticData GenerateSynthetic(const DomainConfig& config,
                                const SyntheticOptions& options);

}  // namespace polyrec

#endif  // POLYREC_SYNTHETIC_HPP_
