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

#ifndef POLYREC_FUSION_HPP_
#define POLYREC_FUSION_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polyrec/catalog.hpp"
#include "polyrec/status.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

struct FusionSource {
  SourceKind kind;
  double weight = 0.0;
  RankedList list;
};

struct FusionInput {
  std::vector<FusionSource> sources;
  ItemSet exclude;
};

// (s - min) / (max - min) over the list. A nonempty list with max == min
// maps to all 1.0. Order is preserved.
RankedList MinMaxNormalize(const RankedList& list);

// Weighted sum of min-max normalized source scores. Items missing from a
// source get 0 from it; sources with weight 0 are ignored entirely, so
// their items do not become candidates. Excluded items are dropped, then
// the top k are kept (ties by item_id).
Result<RankedList> Fuse(const FusionInput& input, size_t k);

// Removes excluded ids and, when `allowed_entity_types` is given, every
// item whose catalog entity_type is not in it (items missing from the
// catalog included). Order is otherwise preserved.
RankedList ApplyFilters(
    const RankedList& list, const ItemSet& exclude,
    const std::optional<std::set<std::string>>& allowed_entity_types,
    const Catalog& catalog);

}  // namespace polyrec

#endif  // POLYREC_FUSION_HPP_
