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

#include "polyrec/interaction_matrix.hpp"

namespace polyrec {

namespace {

const InteractionMatrix::IdSet& EmptySet() {
  static const InteractionMatrix::IdSet* const kEmpty =
      new InteractionMatrix::IdSet();
  return *kEmpty;
}

InteractionMatrix::IdSet& Slot(InteractionMatrix::Index& index,
                               std::string_view key) {
  auto it = index.find(key);
  if (it == index.end()) {
    it = index.emplace(std::string(key), InteractionMatrix::IdSet()).first;
  }
  return it->second;
}

}  // namespace

bool InteractionMatrix::Add(std::string_view user_id, std::string_view item_id) {
  IdSet& items = Slot(items_by_user_, user_id);
  if (items.find(item_id) != items.end()) return false;
  items.emplace(item_id);
  Slot(users_by_item_, item_id).emplace(user_id);
  ++num_pairs_;
  return true;
}

const InteractionMatrix::IdSet& InteractionMatrix::ItemsOf(
    std::string_view user_id) const {
  auto it = items_by_user_.find(user_id);
  return it == items_by_user_.end() ? EmptySet() : it->second;
}

const InteractionMatrix::IdSet& InteractionMatrix::UsersOf(
    std::string_view item_id) const {
  auto it = users_by_item_.find(item_id);
  return it == users_by_item_.end() ? EmptySet() : it->second;
}

}  // namespace polyrec
