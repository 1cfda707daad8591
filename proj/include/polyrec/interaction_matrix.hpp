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

#ifndef POLYREC_INTERACTION_MATRIX_HPP_
#define POLYREC_INTERACTION_MATRIX_HPP_

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace polyrec {

// Binary user-item incidence built incrementally from the interaction log.
// Any interaction type counts once. Keeps i in I_u exactly when u in U_i.
class InteractionMatrix {
 public:
  using IdSet = std::set<std::string, std::less<>>;
  using Index = std::map<std::string, IdSet, std::less<>>;

  // Returns true if the (user, item) pair was new.
  bool Add(std::string_view user_id, std::string_view item_id);

  // Empty set for unknown ids.
  const IdSet& ItemsOf(std::string_view user_id) const;
  const IdSet& UsersOf(std::string_view item_id) const;

  bool HasUser(std::string_view user_id) const {
    return items_by_user_.find(user_id) != items_by_user_.end();
  }
  size_t num_users() const { return items_by_user_.size(); }
  size_t num_items() const { return users_by_item_.size(); }
  size_t num_pairs() const { return num_pairs_; }

  const Index& items_by_user() const { return items_by_user_; }
  const Index& users_by_item() const { return users_by_item_; }

 private:
  Index items_by_user_;
  Index users_by_item_;
  size_t num_pairs_ = 0;
};

}  // namespace polyrec

#endif  // POLYREC_INTERACTION_MATRIX_HPP_
