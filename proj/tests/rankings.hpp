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

#ifndef POLYREC_TESTS_RANKINGS_HPP_
#define POLYREC_TESTS_RANKINGS_HPP_

#include <string>
#include <vector>

#include "polyrec/service.hpp"

namespace polyrec::testing {

// Every source's ranking for every user (for_user) and every catalog item
// (similar_to), flattened in a fixed order. Two states with equal output
// are indistinguishable to the request path.
inline std::vector<RankedList> AllRankings(const DomainState& state,
                                           std::vector<std::string> text_fields,
                                           size_t k = 20) {
  std::vector<SourceSpec> sources = {
      {1.0, UserCfParams{5}},
      {1.0, ItemCfParams{}},
      {1.0, ContentParams{std::move(text_fields)}},
      {1.0, PopularityParams{}},
  };
  for (const auto& [space_id, space] : state.spaces) {
    sources.push_back({1.0, EmbeddingParams{space_id, {}}});
    sources.push_back({1.0, EmbeddingParams{space_id, 2}});
  }
  std::vector<RecommendMode> modes;
  for (const auto& [user, items] : state.interactions->matrix.items_by_user()) {
    modes.push_back(ForUser{user});
  }
  for (const auto& [item, value] : state.catalog->catalog().items()) {
    modes.push_back(SimilarTo{item});
  }
  std::vector<RankedList> out;
  for (const RecommendMode& mode : modes) {
    ItemSet exclude;
    if (const auto* u = std::get_if<ForUser>(&mode)) {
      for (const auto& i : state.interactions->matrix.ItemsOf(u->user_id)) {
        exclude.insert(i);
      }
    } else {
      exclude.insert(std::get<SimilarTo>(mode).item_id);
    }
    for (const SourceSpec& source : sources) {
      auto list = RunSourceOnState(state, source, mode, k, exclude);
      out.push_back(list.ok() ? *list : RankedList{});
    }
  }
  return out;
}

}  // namespace polyrec::testing

#endif  // POLYREC_TESTS_RANKINGS_HPP_
