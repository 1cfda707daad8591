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

#include "polyrec/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace polyrec {

RankedList MinMaxNormalize(const RankedList& list) {
  RankedList out = list;
  if (out.entries.empty()) return out;
  auto [min_it, max_it] = std::minmax_element(
      out.entries.begin(), out.entries.end(),
      [](const ScoredItem& a, const ScoredItem& b) { return a.score < b.score; });
  const double lo = min_it->score;
  const double hi = max_it->score;
  for (ScoredItem& entry : out.entries) {
    entry.score = hi == lo ? 1.0 : (entry.score - lo) / (hi - lo);
  }
  return out;
}

Result<RankedList> Fuse(const FusionInput& input, size_t k) {
  double total_weight = 0.0;
  for (const FusionSource& source : input.sources) {
    total_weight += source.weight;
  }
  if (!(total_weight > 0.0)) return MakeError(ErrorCode::kZeroTotalWeight);

  // Sums are accumulated in source order so equal contributions yield
  // bit-identical totals.
  std::unordered_map<std::string, double> fused;
  for (const FusionSource& source : input.sources) {
    if (source.weight == 0.0) continue;
    for (const ScoredItem& entry : MinMaxNormalize(source.list).entries) {
      if (!input.exclude.empty() && input.exclude.count(entry.item_id) > 0) {
        continue;
      }
      fused[entry.item_id] += source.weight * entry.score;
    }
  }
  std::vector<ScoredItem> candidates;
  candidates.reserve(fused.size());
  for (auto& [id, score] : fused) candidates.push_back(ScoredItem{id, score});
  return RankedList{.entries = TopK(std::move(candidates), k),
                    .source_kind = std::nullopt};
}

RankedList ApplyFilters(
    const RankedList& list, const ItemSet& exclude,
    const std::optional<std::set<std::string>>& allowed_entity_types,
    const Catalog& catalog) {
  RankedList out{.entries = {}, .source_kind = list.source_kind};
  for (const ScoredItem& entry : list.entries) {
    if (exclude.count(entry.item_id) > 0) continue;
    if (allowed_entity_types) {
      const Item* item = catalog.Find(entry.item_id);
      if (item == nullptr || allowed_entity_types->count(item->entity_type) == 0) {
        continue;
      }
    }
    out.entries.push_back(entry);
  }
  return out;
}

}  // namespace polyrec
