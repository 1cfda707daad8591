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

#ifndef POLYREC_TYPES_HPP_
#define POLYREC_TYPES_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "polyrec/status.hpp"

namespace polyrec {

using ItemSet = std::unordered_set<std::string>;

// Recommendation source families. The order matches the alternatives of
// SourceParams.
enum class SourceKind { kUserCf, kItemCf, kContent, kEmbedding, kPopularity };

inline constexpr std::array<SourceKind, 5> kAllSourceKinds = {
    SourceKind::kUserCf, SourceKind::kItemCf, SourceKind::kContent,
    SourceKind::kEmbedding, SourceKind::kPopularity};

std::string_view SourceKindName(SourceKind kind);
std::optional<SourceKind> ParseSourceKind(std::string_view name);

struct UserCfParams {
  int64_t k_neighbors = 50;
  bool operator==(const UserCfParams&) const = default;
};

struct ItemCfParams {
  bool operator==(const ItemCfParams&) const = default;
};

struct ContentParams {
  std::vector<std::string> text_fields;
  bool operator==(const ContentParams&) const = default;
};

struct EmbeddingParams {
  std::string space_id;
  // Number of query dimensions kept; nullopt means "full".
  std::optional<int64_t> prune_m;
  bool operator==(const EmbeddingParams&) const = default;
};

struct PopularityParams {
  // Trailing window in milliseconds; nullopt means "all_time".
  std::optional<int64_t> window_ms;
  bool operator==(const PopularityParams&) const = default;
};

using SourceParams = std::variant<UserCfParams, ItemCfParams, ContentParams,
                                  EmbeddingParams, PopularityParams>;

struct SourceSpec {
  double weight = 1.0;
  SourceParams params;

  SourceKind kind() const { return static_cast<SourceKind>(params.index()); }
  bool operator==(const SourceSpec&) const = default;
};

enum class FusionMode { kWeightedSum };

struct AlgorithmProfile {
  std::vector<SourceSpec> sources;
  FusionMode fusion_mode = FusionMode::kWeightedSum;
  bool operator==(const AlgorithmProfile&) const = default;
};

inline constexpr int64_t kDefaultK = 10;
inline constexpr int64_t kDefaultLatencyBudgetMs = 100;

struct DomainConfig {
  std::string domain_id;
  std::set<std::string> entity_types;
  std::set<std::string> interaction_types;
  AlgorithmProfile profile;
  int64_t default_k = kDefaultK;
  int64_t latency_budget_ms = kDefaultLatencyBudgetMs;
  uint64_t version = 0;

  bool operator==(const DomainConfig&) const = default;
};

using AttributeValue = std::variant<bool, int64_t, double, std::string>;

struct Item {
  std::string item_id;
  std::string entity_type;
  std::map<std::string, std::string> text_fields;
  std::map<std::string, AttributeValue> attributes;
  int64_t created_at = 0;  // unix millis

  bool operator==(const Item&) const = default;
};

struct Interaction {
  std::string user_id;
  std::string item_id;
  std::string interaction_type;
  int64_t timestamp = 0;  // unix millis
  std::map<std::string, std::string> context;

  bool operator==(const Interaction&) const = default;
};

struct EmbeddingRecord {
  std::string item_id;
  std::string space_id;
  std::vector<double> vector;

  bool operator==(const EmbeddingRecord&) const = default;
};

struct ScoredItem {
  std::string item_id;
  double score = 0.0;

  bool operator==(const ScoredItem&) const = default;
};

struct RankedList {
  std::vector<ScoredItem> entries;
  // nullopt for fused output.
  std::optional<SourceKind> source_kind;

  bool empty() const { return entries.empty(); }
  size_t size() const { return entries.size(); }
  std::vector<std::string> ItemIds() const;

  bool operator==(const RankedList&) const = default;
};

// Total order used by every ranker: higher score first, then item_id
// ascending.
inline bool RanksBefore(const ScoredItem& a, const ScoredItem& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.item_id < b.item_id;
}

// Keeps the k best candidates under RanksBefore, sorted.
std::vector<ScoredItem> TopK(std::vector<ScoredItem> candidates, size_t k);

// TopK over (score, key) pairs for rankers that score dense slots. Ids are
// looked up through `id_of` only for ties and for the entries kept, and
// `skip` is consulted lazily in rank order.
template <typename IdOf, typename Skip>
std::vector<ScoredItem> TopKByKey(std::vector<std::pair<double, uint32_t>> candidates,
                                  size_t k, const IdOf& id_of, const Skip& skip) {
  auto worse = [&](const std::pair<double, uint32_t>& a,
                   const std::pair<double, uint32_t>& b) {
    if (a.first != b.first) return a.first < b.first;
    return id_of(a.second) > id_of(b.second);
  };
  std::make_heap(candidates.begin(), candidates.end(), worse);
  std::vector<ScoredItem> out;
  while (out.size() < k && !candidates.empty()) {
    std::pop_heap(candidates.begin(), candidates.end(), worse);
    const auto [score, key] = candidates.back();
    candidates.pop_back();
    if (skip(key)) continue;
    out.push_back(ScoredItem{std::string(id_of(key)), score});
  }
  return out;
}

// Scores non-increasing, ids unique, scores finite.
bool IsWellFormed(const RankedList& list);

// Per-record outcome of an ingestion batch. `line` is the 1-based position
// of the record in the submitted batch.
struct Rejection {
  size_t line = 0;
  ErrorCode code = ErrorCode::kMalformedRecord;
  std::string reason;
};

struct IngestReport {
  size_t accepted = 0;
  std::vector<Rejection> rejected;
};

// Durations are written as an integer followed by one of ms, s, m, h, d.
Result<int64_t> ParseDurationMs(std::string_view text);
std::string FormatDurationMs(int64_t ms);

}  // namespace polyrec

#endif  // POLYREC_TYPES_HPP_
