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

#ifndef POLYREC_POPULARITY_HPP_
#define POLYREC_POPULARITY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "polyrec/types.hpp"

namespace polyrec {

using InteractionCounts = std::unordered_map<std::string, int64_t>;

// Counts every interaction event per item. With a window, only events with
// timestamp >= now_ms - window_ms are counted.
InteractionCounts CountInteractions(std::span<const Interaction> interactions,
                                    std::optional<int64_t> window_ms,
                                    int64_t now_ms);

// Items by count (descending), ties by item_id; scores are the counts.
RankedList RankByPopularity(const InteractionCounts& counts, size_t k,
                            const ItemSet& exclude = {});

// Every item with a positive count, best first.
std::vector<ScoredItem> RankAllByPopularity(const InteractionCounts& counts);

// First k entries of a full popularity ranking that are not excluded.
// Equals RankByPopularity on the counts it was built from.
RankedList TakeTop(std::span<const ScoredItem> ranked, size_t k,
                   const ItemSet& exclude = {});

}  // namespace polyrec

#endif  // POLYREC_POPULARITY_HPP_
