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

#include "polyrec/tfidf.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracle/brute_force.hpp"

namespace polyrec {
namespace {

TfidfIndex ExampleIndex() {
  return TfidfIndex::Build({{"D1", "a b"}, {"D2", "a c"}, {"D3", "a b b"}});
}

TEST(TokenizeTest, LowercasesAndSplitsOnNonAlphanumeric) {
  EXPECT_EQ(Tokenize("Hello, World! C++ v2"),
            (std::vector<std::string>{"hello", "world", "c", "v2"}));
  EXPECT_TRUE(Tokenize("  --  ").empty());
}

TEST(TfidfTest, HandComputedWeights) {
  TfidfIndex index = ExampleIndex();
  EXPECT_EQ(index.Idf("a"), 0.0);
  EXPECT_NEAR(index.Weight("D3", "b", /*normalized=*/false), 2 * std::log(1.5), 1e-12);
  EXPECT_NEAR(index.Weight("D3", "b", false), 0.8109, 1e-4);
  EXPECT_EQ(index.Cosine("D1", "D2"), 0.0);
}

TEST(TfidfTest, SimilarItems) {
  TfidfIndex index = ExampleIndex();
  auto similar = index.SimilarItems("D3", 2);
  ASSERT_TRUE(similar.ok());
  ASSERT_EQ(similar->size(), 1u);  // D2 shares only the zero-weight "a"
  EXPECT_EQ(similar->entries[0].item_id, "D1");
  EXPECT_NEAR(similar->entries[0].score, 1.0, 1e-12);
  EXPECT_EQ(similar->source_kind, SourceKind::kContent);
  EXPECT_EQ(index.SimilarItems("D9", 2).code(), ErrorCode::kUnknownItem);
}

TEST(TfidfTest, AllZeroVectorHasNoNeighbors) {
  TfidfIndex index = TfidfIndex::Build({{"x", "common"}, {"y", "common word"}});
  EXPECT_TRUE(index.SimilarItems("x", 5)->empty());
}

TEST(TfidfTest, LargeKReturnsOnlyNonzeroMatches) {
  TfidfIndex index =
      TfidfIndex::Build({{"a", "red fox"}, {"b", "red dog"}, {"c", "blue cat"}});
  auto similar = index.SimilarItems("a", 100);
  ASSERT_EQ(similar->size(), 1u);
  EXPECT_EQ(similar->entries[0].item_id, "b");
}

TEST(TfidfTest, RecommendForUser) {
  TfidfIndex index = ExampleIndex();
  InteractionMatrix m;
  m.Add("u", "D3");
  RankedList list = index.RecommendForUser(m, "u", 5);
  ASSERT_FALSE(list.empty());
  EXPECT_EQ(list.entries[0].item_id, "D1");
  EXPECT_TRUE(index.RecommendForUser(m, "ghost", 5).empty());
  m.Add("all", "D1");
  m.Add("all", "D2");
  m.Add("all", "D3");
  EXPECT_TRUE(index.RecommendForUser(m, "all", 5).empty());
}

std::string RandomText(std::mt19937_64& rng) {
  std::string text;
  const size_t words = 1 + rng() % 6;
  for (size_t w = 0; w < words; ++w) text += "t" + std::to_string(rng() % 9) + " ";
  return text;
}

TEST(TfidfTest, MatchesBruteForceCosines) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 30; ++round) {
    std::vector<Document> docs;
    std::map<std::string, std::vector<std::string>> tokens;
    const int n = 2 + static_cast<int>(rng() % 15);
    for (int d = 0; d < n; ++d) {
      const std::string id = "d" + std::to_string(d);
      const std::string text = RandomText(rng);
      docs.push_back({id, text});
      tokens[id] = Tokenize(text);
    }
    TfidfIndex index = TfidfIndex::Build(docs);
    auto vectors = oracle::Tfidf(tokens);
    for (const auto& [id, v] : vectors) {
      std::map<std::string, double> expected;
      for (const auto& [other, w] : vectors) {
        if (other == id) continue;
        const double c = oracle::SparseCos(v, w);
        EXPECT_NEAR(index.Cosine(id, other), c, 1e-12);
        if (c > 1e-12) expected[other] = c;
      }
      auto got = index.SimilarItems(id, 100);
      ASSERT_TRUE(got.ok());
      ASSERT_EQ(got->size(), expected.size());
      for (const auto& e : got->entries) EXPECT_NEAR(e.score, expected[e.item_id], 1e-12);
      EXPECT_TRUE(IsWellFormed(*got));
    }
  }
}

TEST(TfidfTest, TermInEveryDocumentContributesNothing) {
  std::mt19937_64 rng(13);
  std::vector<Document> with, without;
  for (int d = 0; d < 10; ++d) {
    std::string text = RandomText(rng);
    with.push_back({"d" + std::to_string(d), text + " everywhere"});
    without.push_back({"d" + std::to_string(d), text});
  }
  TfidfIndex a = TfidfIndex::Build(with), b = TfidfIndex::Build(without);
  EXPECT_EQ(a.Idf("everywhere"), 0.0);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const std::string x = "d" + std::to_string(i), y = "d" + std::to_string(j);
      EXPECT_NEAR(a.Cosine(x, y), b.Cosine(x, y), 1e-12);
    }
  }
}

}  // namespace
}  // namespace polyrec
