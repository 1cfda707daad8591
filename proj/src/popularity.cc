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

#include "polyrec/popularity.hpp"

namespace polyrec {

InteractionCounts CountInteractions(std::span<const Interaction> interactions,
                                    std::optional<int64_t> window_ms,
                                    int64_t now_ms) {
  InteractionCounts counts;
  for (const Interaction& event : interactions) {
    if (window_ms && event.timestamp < now_ms - *window_ms) continue;
    ++counts[event.item_id];
  }
  return counts;
}

RankedList RankByPopularity(const InteractionCounts& counts, size_t k,
                            const ItemSet& exclude) {
  RankedList out{.entries = {}, .source_kind = SourceKind::kPopularity};
  if (k == 0) return out;
  std::vector<ScoredItem> candidates;
  candidates.reserve(counts.size());
  for (const auto& [item, count] : counts) {
    if (count <= 0 || exclude.count(item) > 0) continue;
    candidates.push_back(ScoredItem{item, static_cast<double>(count)});
  }
  out.entries = TopK(std::move(candidates), k);
  return out;
}

std::vector<ScoredItem> RankAllByPopularity(const InteractionCounts& counts) {
  return RankByPopularity(counts, counts.size()).entries;
}

RankedList TakeTop(std::span<const ScoredItem> ranked, size_t k,
                   const ItemSet& exclude) {
  RankedList out{.entries = {}, .source_kind = SourceKind::kPopularity};
  for (const ScoredItem& entry : ranked) {
    if (out.size() >= k) break;
    if (exclude.count(entry.item_id) == 0) out.entries.push_back(entry);
  }
  return out;
}

}  // namespace polyrec
