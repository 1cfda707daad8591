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

#include "polyrec/embedding_index.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracle/brute_force.hpp"

namespace polyrec {
namespace {

std::vector<double> RandomVector(std::mt19937_64& rng, size_t dim) {
  std::normal_distribution<double> normal;
  std::vector<double> v(dim);
  for (double& x : v) x = normal(rng);
  return v;
}

TEST(EmbeddingSpaceTest, IndexNormalizesAndScatters) {
  EmbeddingSpace space("s", 3);
  std::vector<double> v{3, 0, 4};
  ASSERT_TRUE(space.Index("x", v).ok());
  const auto* unit = space.UnitVector("x");
  ASSERT_NE(unit, nullptr);
  EXPECT_NEAR((*unit)[0], 0.6, 1e-15);
  EXPECT_EQ((*unit)[1], 0.0);
  EXPECT_NEAR((*unit)[2], 0.8, 1e-15);
  EXPECT_EQ(space.PostingsOf(0).size(), 1u);
  EXPECT_TRUE(space.PostingsOf(1).empty());
  EXPECT_EQ(space.PostingsOf(2).size(), 1u);
  EXPECT_EQ(*space.RawVector("x"), v);
}

TEST(EmbeddingSpaceTest, IndexErrors) {
  EmbeddingSpace space("s", 3);
  std::vector<double> zero{0, 0, 0}, short_v{1, 2}, nan{1, NAN, 0};
  EXPECT_EQ(space.Index("x", zero).code(), ErrorCode::kZeroVector);
  EXPECT_EQ(space.Index("x", short_v).code(), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(space.Index("x", nan).code(), ErrorCode::kNonFiniteComponent);
  EXPECT_EQ(space.size(), 0u);
}

TEST(EmbeddingSpaceTest, ReindexReplacesPostings) {
  EmbeddingSpace space("s", 3);
  std::vector<double> first{1, 0, 0}, second{0, 0, 2};
  ASSERT_TRUE(space.Index("x", first).ok());
  ASSERT_TRUE(space.Index("x", second).ok());
  EXPECT_TRUE(space.PostingsOf(0).empty());
  ASSERT_EQ(space.PostingsOf(2).size(), 1u);
  EXPECT_EQ(space.PostingsOf(2)[0], (std::pair<std::string, double>{"x", 1.0}));
  EXPECT_EQ(space.size(), 1u);
}

TEST(EmbeddingSpaceTest, PostingsReconstructUnitVectors) {
  std::mt19937_64 rng(1);
  EmbeddingSpace space("s", 6);
  for (int i = 0; i < 40; ++i) {
    auto v = RandomVector(rng, 6);
    if (i % 3 == 0) v[i % 6] = 0.0;
    ASSERT_TRUE(space.Index("i" + std::to_string(i % 25), v).ok());
  }
  std::map<std::string, std::vector<double>> rebuilt;
  for (size_t d = 0; d < 6; ++d) {
    for (const auto& [id, w] : space.PostingsOf(d)) {
      rebuilt[id].resize(6, 0.0);
      rebuilt[id][d] = w;
      EXPECT_NE(w, 0.0);
    }
  }
  EXPECT_EQ(rebuilt.size(), space.size());
  for (const auto& [id, v] : rebuilt) EXPECT_EQ(v, *space.UnitVector(id));
}

TEST(EmbeddingSpaceTest, RemoveBehavesLikeNeverIndexed) {
  std::mt19937_64 rng(2);
  EmbeddingSpace with("s", 8), without("s", 8);
  for (int i = 0; i < 30; ++i) {
    auto v = RandomVector(rng, 8);
    ASSERT_TRUE(with.Index("i" + std::to_string(i), v).ok());
    if (i != 7) {
      ASSERT_TRUE(without.Index("i" + std::to_string(i), v).ok());
    }
  }
  ASSERT_TRUE(with.Remove("i7").ok());
  EXPECT_EQ(with.Remove("i7").code(), ErrorCode::kUnknownItem);
  for (int q = 0; q < 10; ++q) {
    auto query = RandomVector(rng, 8);
    EXPECT_EQ(*with.QueryTopK(query, 10, std::nullopt),
              *without.QueryTopK(query, 10, std::nullopt));
  }
  std::vector<double> back(8, 1.0);
  ASSERT_TRUE(with.Index("i7", back).ok());
  EXPECT_EQ(with.QueryTopK(back, 1, std::nullopt)->entries[0].item_id, "i7");
}

TEST(QueryTopKTest, HandComputedExamples) {
  EmbeddingSpace space("s", 3);
  std::vector<double> x1{1, 0, 0}, x2{0, 1, 0}, q{1, 0, 1};
  ASSERT_TRUE(space.Index("x1", x1).ok());
  ASSERT_TRUE(space.Index("x2", x2).ok());

  auto full = space.QueryTopK(q, 2, std::nullopt);
  ASSERT_TRUE(full.ok());
  ASSERT_EQ(full->size(), 1u);
  EXPECT_EQ(full->entries[0].item_id, "x1");
  EXPECT_NEAR(full->entries[0].score, 0.7071, 1e-4);
  EXPECT_EQ(full->source_kind, SourceKind::kEmbedding);

  std::vector<double> unit_q{1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0)};
  EXPECT_EQ(EmbeddingSpace::KeptDimensions(unit_q, 1), (std::vector<size_t>{0}));
  auto pruned = space.QueryTopK(q, 2, 1);
  ASSERT_EQ(pruned->size(), 1u);
  EXPECT_EQ(pruned->entries[0].item_id, "x1");
  EXPECT_NEAR(pruned->entries[0].score, 0.7071, 1e-4);

  auto self = space.QueryTopK(x2, 2, std::nullopt);
  EXPECT_EQ(self->entries[0].item_id, "x2");
  EXPECT_DOUBLE_EQ(self->entries[0].score, 1.0);
}

TEST(QueryTopKTest, EdgeCases) {
  EmbeddingSpace empty("s", 4);
  std::vector<double> q{1, 2, 3, 4};
  EXPECT_TRUE(empty.QueryTopK(q, 5, std::nullopt)->empty());
  EXPECT_TRUE(empty.ExactTopK(q, 5)->empty());
  ASSERT_TRUE(empty.Index("a", q).ok());
  EXPECT_TRUE(empty.QueryTopK(q, 0, std::nullopt)->empty());
  EXPECT_TRUE(empty.ExactTopK(q, 0)->empty());
  std::vector<double> zero(4, 0.0), wrong(3, 1.0);
  EXPECT_EQ(empty.QueryTopK(zero, 5, std::nullopt).code(), ErrorCode::kZeroVector);
  EXPECT_EQ(empty.QueryTopK(wrong, 5, std::nullopt).code(),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(empty.ExactTopK(wrong, 5).code(), ErrorCode::kDimensionMismatch);
  EXPECT_TRUE(empty.QueryTopK(q, 5, std::nullopt, {"a"})->empty());
}

TEST(QueryTopKTest, FullQueryEqualsExactAndOracle) {
  std::mt19937_64 rng(31337);
  for (int round = 0; round < 10; ++round) {
    const size_t dim = 1 + rng() % 32;
    EmbeddingSpace space("s", dim);
    std::map<std::string, std::vector<double>> stored;
    const int n = static_cast<int>(rng() % 300);
    for (int i = 0; i < n; ++i) {
      auto v = RandomVector(rng, dim);
      const std::string id = "i" + std::to_string(rng() % 250);
      ASSERT_TRUE(space.Index(id, v).ok());
      stored[id] = v;
    }
    for (int q = 0; q < 10; ++q) {
      auto query = RandomVector(rng, dim);
      auto fast = space.QueryTopK(query, 10, std::nullopt);
      auto exact = space.ExactTopK(query, 10);
      auto brute = oracle::ExactTopK(stored, query, 10);
      ASSERT_EQ(fast->size(), exact->size());
      ASSERT_EQ(fast->size(), brute.size());
      for (size_t r = 0; r < brute.size(); ++r) {
        EXPECT_EQ(fast->entries[r].item_id, exact->entries[r].item_id);
        EXPECT_NEAR(fast->entries[r].score, exact->entries[r].score, 1e-6);
        EXPECT_EQ(exact->entries[r].item_id, brute[r].id);
        EXPECT_NEAR(exact->entries[r].score, brute[r].score, 1e-9);
        EXPECT_GT(fast->entries[r].score, 0.0);
        EXPECT_LE(fast->entries[r].score, 1.0);
      }
    }
  }
}

TEST(QueryTopKTest, KeptDimensionsPickLargestMagnitudes) {
  std::vector<double> q{0.1, -0.9, 0.3, 0.3, -0.2};
  EXPECT_EQ(EmbeddingSpace::KeptDimensions(q, 1), (std::vector<size_t>{1}));
  EXPECT_EQ(EmbeddingSpace::KeptDimensions(q, 2), (std::vector<size_t>{1, 2}));
  EXPECT_EQ(EmbeddingSpace::KeptDimensions(q, 3), (std::vector<size_t>{1, 2, 3}));
  EXPECT_EQ(EmbeddingSpace::KeptDimensions(q, 10).size(), 5u);
  EXPECT_EQ(EmbeddingSpace::KeptDimensions(q, std::nullopt).size(), 5u);
}

TEST(EmbeddingSpaceTest, CompactionKeepsResults) {
  std::mt19937_64 rng(8);
  EmbeddingSpace space("s", 4);
  std::map<std::string, std::vector<double>> stored;
  for (int round = 0; round < 6000; ++round) {
    auto v = RandomVector(rng, 4);
    const std::string id = "i" + std::to_string(rng() % 50);
    ASSERT_TRUE(space.Index(id, v).ok());
    stored[id] = v;
  }
  EXPECT_EQ(space.size(), stored.size());
  auto query = RandomVector(rng, 4);
  auto got = space.QueryTopK(query, 50, std::nullopt);
  auto want = oracle::ExactTopK(stored, query, 50);
  ASSERT_EQ(got->size(), want.size());
  for (size_t r = 0; r < want.size(); ++r) {
    EXPECT_EQ(got->entries[r].item_id, want[r].id);
  }
}

}  // namespace
}  // namespace polyrec
