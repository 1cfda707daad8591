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

#include "polyrec/collaborative.hpp"

#include <map>
#include <string>
#include <unordered_map>

#include "polyrec/similarity.hpp"

namespace polyrec {

namespace {

bool Excluded(const ItemSet& exclude, const std::string& id) {
  return !exclude.empty() && exclude.count(id) > 0;
}

std::vector<ScoredItem> ToCandidates(
    const std::unordered_map<std::string_view, double>& scores) {
  std::vector<ScoredItem> out;
  out.reserve(scores.size());
  for (const auto& [id, score] : scores) {
    out.push_back(ScoredItem{std::string(id), score});
  }
  return out;
}

}  // namespace

std::vector<ScoredItem> UserNeighbors(const InteractionMatrix& matrix,
                                      std::string_view user_id,
                                      size_t k_neighbors) {
  const auto& items_u = matrix.ItemsOf(user_id);
  if (items_u.empty() || k_neighbors == 0) return {};

  std::unordered_map<std::string_view, size_t> overlap;
  for (const auto& item : items_u) {
    for (const auto& v : matrix.UsersOf(item)) {
      if (v != user_id) ++overlap[v];
    }
  }
  std::vector<ScoredItem> neighbors;
  neighbors.reserve(overlap.size());
  for (const auto& [v, count] : overlap) {
    neighbors.push_back(ScoredItem{
        std::string(v),
        SetCosine(count, items_u.size(), matrix.ItemsOf(v).size())});
  }
  return TopK(std::move(neighbors), k_neighbors);
}

RankedList UserCfRecommend(const InteractionMatrix& matrix,
                           std::string_view user_id, size_t k,
                           size_t k_neighbors, const ItemSet& exclude) {
  RankedList out{.entries = {}, .source_kind = SourceKind::kUserCf};
  if (k == 0) return out;
  const auto& items_u = matrix.ItemsOf(user_id);

  std::unordered_map<std::string_view, double> scores;
  for (const ScoredItem& neighbor : UserNeighbors(matrix, user_id, k_neighbors)) {
    for (const auto& item : matrix.ItemsOf(neighbor.item_id)) {
      if (items_u.count(item) > 0 || Excluded(exclude, item)) continue;
      scores[item] += neighbor.score;
    }
  }
  out.entries = TopK(ToCandidates(scores), k);
  return out;
}

RankedList ItemCfRecommend(const InteractionMatrix& matrix,
                           std::string_view user_id, size_t k,
                           const ItemSet& exclude) {
  RankedList out{.entries = {}, .source_kind = SourceKind::kItemCf};
  if (k == 0) return out;
  const auto& items_u = matrix.ItemsOf(user_id);

  std::unordered_map<std::string_view, double> scores;
  std::unordered_map<std::string_view, size_t> overlap;
  for (const auto& j : items_u) {
    const auto& users_j = matrix.UsersOf(j);
    overlap.clear();
    for (const auto& v : users_j) {
      for (const auto& i : matrix.ItemsOf(v)) {
        if (items_u.count(i) > 0 || Excluded(exclude, i)) continue;
        ++overlap[i];
      }
    }
    for (const auto& [i, count] : overlap) {
      scores[i] += SetCosine(count, matrix.UsersOf(i).size(), users_j.size());
    }
  }
  out.entries = TopK(ToCandidates(scores), k);
  return out;
}

RankedList ItemCfSimilarItems(const InteractionMatrix& matrix,
                              std::string_view item_id, size_t k,
                              const ItemSet& exclude) {
  RankedList out{.entries = {}, .source_kind = SourceKind::kItemCf};
  if (k == 0) return out;
  const auto& users_j = matrix.UsersOf(item_id);

  std::unordered_map<std::string_view, size_t> overlap;
  for (const auto& v : users_j) {
    for (const auto& i : matrix.ItemsOf(v)) {
      if (i == item_id || Excluded(exclude, i)) continue;
      ++overlap[i];
    }
  }
  std::unordered_map<std::string_view, double> scores;
  for (const auto& [i, count] : overlap) {
    scores[i] = SetCosine(count, matrix.UsersOf(i).size(), users_j.size());
  }
  out.entries = TopK(ToCandidates(scores), k);
  return out;
}

}  // namespace polyrec
