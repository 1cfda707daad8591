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

#include "polyrec/similarity.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracle/brute_force.hpp"

namespace polyrec {
namespace {

InteractionMatrix ExampleMatrix() {
  InteractionMatrix m;
  m.Add("u1", "i1");
  m.Add("u1", "i2");
  m.Add("u2", "i1");
  m.Add("u2", "i2");
  m.Add("u2", "i3");
  m.Add("u3", "i4");
  return m;
}

TEST(CosineTest, Examples) {
  std::vector<double> a{1, 0}, b{0, 1}, c{1, 2}, d{2, 1};
  EXPECT_DOUBLE_EQ(*Cosine(a, a), 1.0);
  EXPECT_DOUBLE_EQ(*Cosine(a, b), 0.0);
  EXPECT_NEAR(*Cosine(c, d), 0.8, 1e-15);
}

TEST(CosineTest, ZeroNormAndErrors) {
  std::vector<double> zero{0, 0}, a{1, 2}, three{1, 2, 3};
  EXPECT_EQ(*Cosine(zero, a), 0.0);
  EXPECT_EQ(Cosine(a, three).code(), ErrorCode::kDimensionMismatch);
  std::vector<double> nan{NAN, 1};
  EXPECT_EQ(Cosine(nan, a).code(), ErrorCode::kNonFiniteComponent);
}

TEST(CosineTest, BoundedAndSymmetricOnRandomVectors) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 500; ++t) {
    std::vector<double> a(1 + rng() % 16), b(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
      a[i] = normal(rng);
      b[i] = normal(rng);
    }
    double ab = *Cosine(a, b);
    EXPECT_GE(ab, -1.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_EQ(ab, *Cosine(b, a));
    EXPECT_NEAR(ab, oracle::Cosine(a, b), 1e-12);
  }
}

TEST(UserSimilarityTest, Examples) {
  InteractionMatrix m = ExampleMatrix();
  EXPECT_NEAR(UserSimilarity(m, "u1", "u2"), 2.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(UserSimilarity(m, "u1", "u2"), 0.8165, 1e-4);
  EXPECT_EQ(UserSimilarity(m, "u1", "u3"), 0.0);
  EXPECT_DOUBLE_EQ(UserSimilarity(m, "u1", "u1"), 1.0);
  EXPECT_EQ(UserSimilarity(m, "u1", "nobody"), 0.0);
}

TEST(ItemSimilarityTest, Examples) {
  InteractionMatrix m = ExampleMatrix();
  EXPECT_NEAR(ItemSimilarity(m, "i3", "i1"), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(ItemSimilarity(m, "i1", "i2"), 1.0);
  EXPECT_EQ(ItemSimilarity(m, "i1", "i4"), 0.0);
}

TEST(InteractionMatrixTest, BinaryAndBidirectional) {
  InteractionMatrix m;
  EXPECT_TRUE(m.Add("u", "i"));
  EXPECT_FALSE(m.Add("u", "i"));
  EXPECT_EQ(m.num_pairs(), 1u);
  std::mt19937_64 rng(3);
  for (int n = 0; n < 300; ++n) {
    m.Add("u" + std::to_string(rng() % 20), "i" + std::to_string(rng() % 30));
  }
  for (const auto& [user, items] : m.items_by_user()) {
    for (const auto& item : items) EXPECT_EQ(m.UsersOf(item).count(user), 1u);
  }
  for (const auto& [item, users] : m.users_by_item()) {
    for (const auto& user : users) EXPECT_EQ(m.ItemsOf(user).count(item), 1u);
  }
}

TEST(SimilarityTest, SymmetricOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    InteractionMatrix m;
    for (int n = 0; n < 80; ++n) {
      m.Add("u" + std::to_string(rng() % 10), "i" + std::to_string(rng() % 15));
    }
    for (int a = 0; a < 10; ++a) {
      for (int b = 0; b < 10; ++b) {
        const std::string u = "u" + std::to_string(a), v = "u" + std::to_string(b);
        EXPECT_EQ(UserSimilarity(m, u, v), UserSimilarity(m, v, u));
        const std::string i = "i" + std::to_string(a), j = "i" + std::to_string(b);
        EXPECT_EQ(ItemSimilarity(m, i, j), ItemSimilarity(m, j, i));
      }
    }
  }
}

}  // namespace
}  // namespace polyrec
