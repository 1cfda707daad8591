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

#include <gtest/gtest.h>

#include <random>

#include "oracle/brute_force.hpp"

namespace polyrec {
namespace {

InteractionMatrix ExampleMatrix() {
  InteractionMatrix m;
  for (const auto& [u, i] : std::vector<std::pair<std::string, std::string>>{
           {"u1", "i1"}, {"u1", "i2"}, {"u2", "i1"}, {"u2", "i2"}, {"u2", "i3"},
           {"u3", "i4"}}) {
    m.Add(u, i);
  }
  return m;
}

oracle::Sets ToSets(const InteractionMatrix& m) {
  oracle::Sets sets;
  for (const auto& [user, items] : m.items_by_user()) {
    sets[user] = std::set<std::string>(items.begin(), items.end());
  }
  return sets;
}

void ExpectSameRanking(const RankedList& got, const std::vector<oracle::Scored>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (size_t r = 0; r < want.size(); ++r) {
    EXPECT_EQ(got.entries[r].item_id, want[r].id) << "rank " << r;
    EXPECT_NEAR(got.entries[r].score, want[r].score, 1e-9) << "rank " << r;
  }
}

TEST(UserCfTest, Examples) {
  InteractionMatrix m = ExampleMatrix();
  RankedList u1 = UserCfRecommend(m, "u1", 10, 2);
  ASSERT_EQ(u1.size(), 1u);
  EXPECT_EQ(u1.entries[0].item_id, "i3");
  EXPECT_NEAR(u1.entries[0].score, 0.8165, 1e-4);
  EXPECT_EQ(u1.source_kind, SourceKind::kUserCf);
  EXPECT_TRUE(UserCfRecommend(m, "u3", 10, 2).empty());
  EXPECT_TRUE(UserCfRecommend(m, "ghost", 10, 2).empty());
}

TEST(ItemCfTest, Examples) {
  InteractionMatrix m = ExampleMatrix();
  RankedList u1 = ItemCfRecommend(m, "u1", 10);
  ASSERT_EQ(u1.size(), 1u);
  EXPECT_EQ(u1.entries[0].item_id, "i3");
  EXPECT_NEAR(u1.entries[0].score, 1.4142, 1e-4);
  EXPECT_TRUE(ItemCfRecommend(m, "u3", 10).empty());
  EXPECT_TRUE(ItemCfRecommend(m, "ghost", 10).empty());
}

TEST(ItemCfTest, SimilarItemsRow) {
  InteractionMatrix m = ExampleMatrix();
  RankedList row = ItemCfSimilarItems(m, "i1", 10);
  ASSERT_EQ(row.size(), 2u);
  EXPECT_EQ(row.entries[0].item_id, "i2");
  EXPECT_DOUBLE_EQ(row.entries[0].score, 1.0);
  EXPECT_EQ(row.entries[1].item_id, "i3");
}

TEST(UserCfTest, NeighborsTieBreakById) {
  InteractionMatrix m;
  m.Add("a", "x");
  m.Add("c", "x");
  m.Add("c", "z");
  m.Add("b", "x");
  m.Add("b", "y");
  auto neighbors = UserNeighbors(m, "a", 1);
  ASSERT_EQ(neighbors.size(), 1u);
  EXPECT_EQ(neighbors[0].item_id, "b");
}

TEST(CfTest, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(20240601);
  for (int instance = 0; instance < 100; ++instance) {
    const int users = 2 + static_cast<int>(rng() % 19);
    const int items = 2 + static_cast<int>(rng() % 29);
    InteractionMatrix m;
    const int pairs = static_cast<int>(rng() % (users * items / 2 + 1));
    for (int n = 0; n < pairs; ++n) {
      m.Add("u" + std::to_string(rng() % users), "i" + std::to_string(rng() % items));
    }
    const oracle::Sets sets = ToSets(m);
    const size_t kn = 1 + rng() % 6;
    for (int u = 0; u < users; ++u) {
      const std::string user = "u" + std::to_string(u);
      ExpectSameRanking(UserCfRecommend(m, user, 10, kn),
                        oracle::UserCf(sets, user, 10, kn));
      ExpectSameRanking(ItemCfRecommend(m, user, 10), oracle::ItemCf(sets, user, 10));
    }
  }
}

TEST(CfTest, NeverRecommendsSeenOrExcludedItems) {
  std::mt19937_64 rng(5);
  InteractionMatrix m;
  for (int n = 0; n < 200; ++n) {
    m.Add("u" + std::to_string(rng() % 15), "i" + std::to_string(rng() % 25));
  }
  const ItemSet exclude = {"i0", "i1", "i2"};
  for (const auto& [user, seen] : m.items_by_user()) {
    for (const RankedList& list : {UserCfRecommend(m, user, 50, 10, exclude),
                                   ItemCfRecommend(m, user, 50, exclude)}) {
      EXPECT_TRUE(IsWellFormed(list));
      for (const auto& e : list.entries) {
        EXPECT_EQ(seen.count(e.item_id), 0u);
        EXPECT_EQ(exclude.count(e.item_id), 0u);
      }
    }
  }
}

TEST(CfTest, Deterministic) {
  InteractionMatrix m;
  std::mt19937_64 rng(9);
  for (int n = 0; n < 150; ++n) {
    m.Add("u" + std::to_string(rng() % 12), "i" + std::to_string(rng() % 20));
  }
  InteractionMatrix copy = m;
  for (const auto& [user, seen] : m.items_by_user()) {
    EXPECT_EQ(UserCfRecommend(m, user, 10, 3), UserCfRecommend(copy, user, 10, 3));
    EXPECT_EQ(ItemCfRecommend(m, user, 10), ItemCfRecommend(copy, user, 10));
  }
}

}  // namespace
}  // namespace polyrec
