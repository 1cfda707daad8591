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

#include "polyrec/catalog.hpp"

namespace polyrec {

bool Catalog::Upsert(Item item) {
  auto it = items_.find(item.item_id);
  if (it != items_.end()) {
    it->second = std::move(item);
    return false;
  }
  std::string id = item.item_id;
  items_.emplace(std::move(id), std::move(item));
  return true;
}

const Item* Catalog::Find(std::string_view item_id) const {
  auto it = items_.find(item_id);
  return it == items_.end() ? nullptr : &it->second;
}

}  // namespace polyrec
