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

#ifndef POLYREC_COLLABORATIVE_HPP_
#define POLYREC_COLLABORATIVE_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "polyrec/interaction_matrix.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

// Users with positive similarity to `user_id`, best first (ties by user id),
// at most `k_neighbors` of them. `item_id` fields hold user ids.
std::vector<ScoredItem> UserNeighbors(const InteractionMatrix& matrix,
                                      std::string_view user_id,
                                      size_t k_neighbors);

// score(i) = sum of sim(u, v) over neighbors v with i in I_v, for i not in
// I_u. Neighbor contributions are added in neighbor rank order.
RankedList UserCfRecommend(const InteractionMatrix& matrix,
                           std::string_view user_id, size_t k,
                           size_t k_neighbors, const ItemSet& exclude = {});

// score(i) = sum over j in I_u of ItemSimilarity(i, j), for i not in I_u.
// Contributions are added in ascending j order.
RankedList ItemCfRecommend(const InteractionMatrix& matrix,
                           std::string_view user_id, size_t k,
                           const ItemSet& exclude = {});

// The item-CF row of `item_id`: other items by ItemSimilarity.
RankedList ItemCfSimilarItems(const InteractionMatrix& matrix,
                              std::string_view item_id, size_t k,
                              const ItemSet& exclude = {});

}  // namespace polyrec

#endif  // POLYREC_COLLABORATIVE_HPP_
