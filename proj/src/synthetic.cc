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

#include "polyrec/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>

namespace polyrec {

namespace {

constexpr int64_t kBaseTimestamp = 1'700'000'000'000;
constexpr size_t kClusterVocabulary = 24;
constexpr size_t kSharedVocabulary = 40;
constexpr size_t kWordsPerItem = 12;
constexpr const char* kLocations[] = {"header_feed", "sidebar", "search_results"};

std::string PaddedId(const char* prefix, size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%05zu", prefix, n);
  return buf;
}

std::string ClusterWord(size_t cluster, size_t n) {
  return "c" + std::to_string(cluster) + "w" + std::to_string(n);
}

}  // namespace

std::string SyntheticSpaceId(const DomainConfig& config) {
  for (const SourceSpec& source : config.profile.sources) {
    if (const auto* p = std::get_if<EmbeddingParams>(&source.params)) {
      return p->space_id;
    }
  }
  return "synthetic";
}

SyntheticData GenerateSynthetic(const DomainConfig& config,
                                const SyntheticOptions& options) {
  SyntheticData data;
  const size_t clusters = std::max<size_t>(options.n_clusters, 1);
  std::mt19937_64 rng(options.seed);
  const std::vector<std::string> entity_types(config.entity_types.begin(),
                                              config.entity_types.end());
  const std::vector<std::string> interaction_types(
      config.interaction_types.begin(), config.interaction_types.end());

  std::vector<std::vector<size_t>> members(clusters);
  for (size_t j = 0; j < options.n_items; ++j) members[j % clusters].push_back(j);

  std::uniform_int_distribution<size_t> cluster_word(0, kClusterVocabulary - 1);
  std::uniform_int_distribution<size_t> shared_word(0, kSharedVocabulary - 1);
  std::bernoulli_distribution pick_shared(0.25);
  for (size_t j = 0; j < options.n_items; ++j) {
    const size_t c = j % clusters;
    std::string text;
    for (size_t w = 0; w < kWordsPerItem; ++w) {
      if (!text.empty()) text += ' ';
      text += pick_shared(rng) ? "common" + std::to_string(shared_word(rng))
                               : ClusterWord(c, cluster_word(rng));
    }
    Item item;
    item.item_id = PaddedId("item", j);
    item.entity_type =
        entity_types.empty() ? "item" : entity_types[j % entity_types.size()];
    item.text_fields["description"] = std::move(text);
    item.text_fields["title"] = "Item " + std::to_string(j);
    item.attributes["cluster"] = static_cast<int64_t>(c);
    item.created_at = kBaseTimestamp;
    data.items.push_back(std::move(item));
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (size_t u = 0; u < options.n_users; ++u) {
    const size_t own = u % clusters;
    const std::string user_id = PaddedId("user", u);
    std::set<size_t> chosen;
    const size_t want = std::min(options.items_per_user, options.n_items);
    for (size_t attempt = 0; chosen.size() < want && attempt < want * 50; ++attempt) {
      size_t c = own;
      if (clusters > 1 && unit(rng) >= options.own_cluster_share) {
        c = (own + 1 + std::uniform_int_distribution<size_t>(0, clusters - 2)(rng)) %
            clusters;
      }
      if (members[c].empty()) continue;
      const auto& pool = members[c];
      chosen.insert(pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)]);
    }
    std::vector<size_t> order(chosen.begin(), chosen.end());
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t t = 0; t < order.size(); ++t) {
      Interaction e;
      e.user_id = user_id;
      e.item_id = PaddedId("item", order[t]);
      e.interaction_type =
          interaction_types.empty()
              ? "view"
              : interaction_types[std::uniform_int_distribution<size_t>(
                    0, interaction_types.size() - 1)(rng)];
      e.timestamp = kBaseTimestamp + static_cast<int64_t>(u) * 1000 +
                    static_cast<int64_t>(t) * 60'000;
      if (!options.context_tag.empty()) {
        e.context[options.context_tag] =
            kLocations[std::uniform_int_distribution<size_t>(0, 2)(rng)];
      }
      data.interactions.push_back(std::move(e));
    }
  }

  if (options.dim > 0) {
    const std::string space =
        options.space_id.empty() ? SyntheticSpaceId(config) : options.space_id;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::vector<double>> centroids(clusters,
                                               std::vector<double>(options.dim));
    for (auto& centroid : centroids) {
      for (double& x : centroid) x = normal(rng);
    }
    for (size_t j = 0; j < options.n_items; ++j) {
      std::vector<double> v = centroids[j % clusters];
      for (double& x : v) x += options.noise * normal(rng);
      data.embeddings.push_back({PaddedId("item", j), space, std::move(v)});
    }
  }
  return data;
}

}  // namespace polyrec
