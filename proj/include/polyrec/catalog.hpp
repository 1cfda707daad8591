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

#ifndef POLYREC_CATALOG_HPP_
#define POLYREC_CATALOG_HPP_

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "polyrec/types.hpp"

namespace polyrec {

// Items of one domain keyed by item_id (upsert semantics), iterated in id
// order.
class Catalog {
 public:
  using Map = std::map<std::string, Item, std::less<>>;

  // Returns true when the item_id was not present before.
  bool Upsert(Item item);

  const Item* Find(std::string_view item_id) const;
  bool Contains(std::string_view item_id) const {
    return Find(item_id) != nullptr;
  }
  size_t size() const { return items_.size(); }
  const Map& items() const { return items_; }

 private:
  Map items_;
};

}  // namespace polyrec

#endif  // POLYREC_CATALOG_HPP_
