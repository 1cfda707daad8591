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

#include "polyrec/service.hpp"

#include <gtest/gtest.h>

#include <thread>

#include "oracle/brute_force.hpp"
#include "polyrec/collaborative.hpp"
#include "polyrec/fusion.hpp"
#include "polyrec/synthetic.hpp"
#include "test_util.hpp"

namespace polyrec {
namespace {

using testing::MakeInteraction;
using testing::MakeItem;
using testing::SimpleConfig;
using testing::Source;
using testing::TempDir;
using namespace std::chrono_literals;

std::unique_ptr<RecommendService> OpenService(
    std::optional<std::filesystem::path> dir = std::nullopt) {
  auto service = RecommendService::Open(ServiceOptions{dir, kDefaultLatencyBudgetMs});
  EXPECT_TRUE(service.ok()) << service.error().ToString();
  return std::move(service).value();
}

DomainConfig TwoSourceConfig(const std::string& id) {
  return SimpleConfig(id, {Source(0.5, UserCfParams{10}), Source(0.5, ItemCfParams{})});
}

// Small domain with overlapping users.
void LoadSmallDomain(RecommendService& service, const std::string& id) {
  std::vector<Item> items;
  for (int i = 0; i < 8; ++i) {
    items.push_back(MakeItem("i" + std::to_string(i), i % 2 ? "item" : "other",
                             "word" + std::to_string(i % 3) + " shared"));
  }
  ASSERT_TRUE(service.IngestItems(id, items).ok());
  std::vector<Interaction> events;
  int64_t ts = 0;
  for (int u = 0; u < 6; ++u) {
    for (int i = u; i < u + 4; ++i) {
      events.push_back(MakeInteraction("u" + std::to_string(u),
                                       "i" + std::to_string(i % 8), ++ts));
    }
  }
  ASSERT_TRUE(service.IngestInteractions(id, events).ok());
}

RecommendRequest ForUserRequest(const std::string& domain, const std::string& user,
                                int64_t k = 5) {
  RecommendRequest r;
  r.domain_id = domain;
  r.mode = ForUser{user};
  r.k = k;
  return r;
}

TEST(ServiceTest, HealthyDomainAllSourcesOk) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("d")).ok());
  LoadSmallDomain(*service, "d");
  auto response = service->Recommend(ForUserRequest("d", "u0"));
  ASSERT_TRUE(response.ok());
  EXPECT_EQ(response->status, ResponseStatus::kOk);
  ASSERT_EQ(response->sources_used.size(), 2u);
  for (const auto& s : response->sources_used) {
    EXPECT_EQ(s.outcome, SourceOutcome::kOk);
    EXPECT_GE(s.latency_ms, 0.0);
  }
  EXPECT_FALSE(response->items.empty());
  EXPECT_LE(response->items.size(), 5u);
  EXPECT_EQ(response->profile_version, 1u);
  EXPECT_GE(response->total_latency_ms, 0.0);
  EXPECT_TRUE(IsWellFormed(response->items));
}

TEST(ServiceTest, UnknownDomainAndMalformedRequests) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("d")).ok());
  EXPECT_EQ(service->Recommend(ForUserRequest("ghost", "u")).code(),
            ErrorCode::kUnknownDomain);
  EXPECT_EQ(service->Recommend(ForUserRequest("d", "u", 0)).code(),
            ErrorCode::kMalformedRequest);
  EXPECT_EQ(service->Recommend(ForUserRequest("d", "u", 1001)).code(),
            ErrorCode::kMalformedRequest);
  EXPECT_EQ(service->Recommend(ForUserRequest("d", "")).code(),
            ErrorCode::kMalformedRequest);
}

TEST(ServiceTest, OneFailingSourceDegrades) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("d")).ok());
  LoadSmallDomain(*service, "d");
  service->InjectFault("d", SourceKind::kUserCf, Fault{FaultMode::kThrow, 0ms});
  auto response = service->Recommend(ForUserRequest("d", "u0"));
  ASSERT_TRUE(response.ok());
  EXPECT_EQ(response->status, ResponseStatus::kDegraded);
  EXPECT_EQ(response->sources_used[0].outcome, SourceOutcome::kError);
  EXPECT_EQ(response->sources_used[1].outcome, SourceOutcome::kOk);

  // Expected: fusing the surviving item-CF list alone.
  auto state = *service->State("d");
  ItemSet seen;
  for (const auto& i : state->interactions->matrix.ItemsOf("u0")) seen.insert(i);
  FusionInput only;
  only.sources = {{SourceKind::kItemCf, 0.5,
                   ItemCfRecommend(state->interactions->matrix, "u0", 5, seen)}};
  only.exclude = seen;
  EXPECT_EQ(response->items.ItemIds(), Fuse(only, 5)->ItemIds());
}

TEST(ServiceTest, AllSourcesFailingFallsBackToPopularity) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("d")).ok());
  LoadSmallDomain(*service, "d");
  service->InjectFault("d", SourceKind::kUserCf, Fault{});
  service->InjectFault("d", SourceKind::kItemCf, Fault{FaultMode::kThrow, 0ms});
  auto response = service->Recommend(ForUserRequest("d", "u0"));
  ASSERT_TRUE(response.ok());
  EXPECT_EQ(response->status, ResponseStatus::kFallback);

  auto state = *service->State("d");
  std::vector<oracle::Event> events;
  for (const auto& e : state->interactions->events) {
    events.push_back({e.user_id, e.item_id, e.timestamp});
  }
  std::set<std::string> seen;
  for (const auto& i : state->interactions->matrix.ItemsOf("u0")) seen.insert(i);
  auto want = oracle::Popularity(events, 5, seen);
  ASSERT_EQ(response->items.size(), want.size());
  for (size_t r = 0; r < want.size(); ++r) {
    EXPECT_EQ(response->items.entries[r].item_id, want[r].id);
  }
  ItemSet seen_set(seen.begin(), seen.end());
  EXPECT_EQ(response->items.entries,
            service->PopularityRecommend("d", 5, std::nullopt, seen_set)->entries);
}

TEST(ServiceTest, EmptyDomainReturnsEmpty) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("d")).ok());
  auto response = service->Recommend(ForUserRequest("d", "cold"));
  ASSERT_TRUE(response.ok());
  EXPECT_EQ(response->status, ResponseStatus::kEmpty);
  EXPECT_TRUE(response->items.empty());
}

TEST(ServiceTest, ColdStartUserGetsFallback) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("d")).ok());
  LoadSmallDomain(*service, "d");
  auto response = service->Recommend(ForUserRequest("d", "brand-new"));
  ASSERT_TRUE(response.ok());
  EXPECT_EQ(response->status, ResponseStatus::kFallback);
  EXPECT_FALSE(response->items.empty());
}

TEST(ServiceTest, SlowSourceTimesOutWithinBudget) {
  auto service = OpenService();
  DomainConfig config = TwoSourceConfig("d");
  config.latency_budget_ms = 50;
  ASSERT_TRUE(service->RegisterDomain(config).ok());
  LoadSmallDomain(*service, "d");
  service->InjectFault("d", SourceKind::kUserCf, Fault{std::nullopt, 100ms});
  auto response = service->Recommend(ForUserRequest("d", "u0"));
  ASSERT_TRUE(response.ok());
  EXPECT_EQ(response->sources_used[0].outcome, SourceOutcome::kTimeout);
  EXPECT_EQ(response->sources_used[1].outcome, SourceOutcome::kOk);
  EXPECT_EQ(response->status, ResponseStatus::kDegraded);
  EXPECT_LT(response->total_latency_ms, 50.0 + 20.0);

  // Unlimited budget never times out.
  RecommendRequest unlimited = ForUserRequest("d", "u0");
  unlimited.latency_budget_ms = 0;
  auto slow = service->Recommend(unlimited);
  EXPECT_EQ(slow->status, ResponseStatus::kOk);
  EXPECT_GE(slow->sources_used[0].latency_ms, 100.0);
}

TEST(ServiceTest, NeverReturnsSeenItems) {
  auto service = OpenService();
  DomainConfig config = SimpleConfig(
      "d", {Source(1, UserCfParams{10}), Source(1, ItemCfParams{}),
            Source(1, ContentParams{{"text"}}), Source(1, PopularityParams{})});
  ASSERT_TRUE(service->RegisterDomain(config).ok());
  LoadSmallDomain(*service, "d");
  auto state = *service->State("d");
  for (const auto& [user, seen] : state->interactions->matrix.items_by_user()) {
    RecommendRequest r = ForUserRequest("d", user, 20);
    r.exclude_items = {"i7"};
    auto response = service->Recommend(r);
    ASSERT_TRUE(response.ok());
    for (const auto& e : response->items.entries) {
      EXPECT_EQ(seen.count(e.item_id), 0u) << user << " got " << e.item_id;
      EXPECT_NE(e.item_id, "i7");
    }
  }
}

TEST(ServiceTest, SimilarToSkipsUserOnlySources) {
  auto service = OpenService();
  DomainConfig config = SimpleConfig(
      "d", {Source(1, UserCfParams{10}), Source(1, ItemCfParams{}),
            Source(1, ContentParams{{"text"}})});
  ASSERT_TRUE(service->RegisterDomain(config).ok());
  LoadSmallDomain(*service, "d");
  RecommendRequest r;
  r.domain_id = "d";
  r.mode = SimilarTo{"i1"};
  r.k = 5;
  auto response = service->Recommend(r);
  ASSERT_TRUE(response.ok());
  EXPECT_EQ(response->status, ResponseStatus::kOk);
  ASSERT_EQ(response->sources_used.size(), 2u);
  EXPECT_EQ(response->sources_used[0].kind, SourceKind::kItemCf);
  EXPECT_EQ(response->sources_used[1].kind, SourceKind::kContent);
  for (const auto& e : response->items.entries) EXPECT_NE(e.item_id, "i1");
}

TEST(ServiceTest, EntityTypeFilter) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("d")).ok());
  LoadSmallDomain(*service, "d");
  RecommendRequest r = ForUserRequest("d", "u0", 3);
  r.allowed_entity_types = std::set<std::string>{"item"};
  auto response = service->Recommend(r);
  ASSERT_TRUE(response.ok());
  auto state = *service->State("d");
  for (const auto& e : response->items.entries) {
    EXPECT_EQ(state->catalog->catalog().Find(e.item_id)->entity_type, "item");
  }
}

TEST(ServiceTest, MissingEmbeddingSpaceIsASourceError) {
  auto service = OpenService();
  DomainConfig config = SimpleConfig(
      "d", {Source(1, ItemCfParams{}), Source(1, EmbeddingParams{"nope", {}})});
  ASSERT_TRUE(service->RegisterDomain(config).ok());
  LoadSmallDomain(*service, "d");
  auto response = service->Recommend(ForUserRequest("d", "u0"));
  ASSERT_TRUE(response.ok());
  EXPECT_EQ(response->sources_used[1].outcome, SourceOutcome::kError);
  EXPECT_EQ(response->status, ResponseStatus::kDegraded);
}

TEST(ServiceTest, FaultsStayInsideTheirDomain) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("a")).ok());
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("b")).ok());
  LoadSmallDomain(*service, "a");
  LoadSmallDomain(*service, "b");
  auto baseline = service->Recommend(ForUserRequest("b", "u1"));
  service->InjectFault("a", SourceKind::kUserCf, Fault{});
  service->InjectFault("a", SourceKind::kItemCf, Fault{});
  EXPECT_EQ(service->Recommend(ForUserRequest("a", "u1"))->status,
            ResponseStatus::kFallback);
  auto b = service->Recommend(ForUserRequest("b", "u1"));
  EXPECT_EQ(b->status, ResponseStatus::kOk);
  EXPECT_EQ(b->items, baseline->items);

  HealthReport health = service->Health();
  ASSERT_EQ(health.domains.size(), 2u);
  EXPECT_FALSE(health.domains[0].healthy);
  EXPECT_TRUE(health.domains[1].healthy);
  EXPECT_EQ(health.domains[0].request_outcomes.at("fallback"), 1u);
  service->ClearFaults("a");
  EXPECT_TRUE(service->Health().domains[0].healthy);
}

TEST(ServiceTest, FreshServiceHealth) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("a")).ok());
  HealthReport health = service->Health();
  ASSERT_EQ(health.domains.size(), 1u);
  EXPECT_TRUE(health.domains[0].healthy);
  EXPECT_EQ(health.domains[0].items, 0u);
  EXPECT_EQ(health.domains[0].last_ingest_ms, 0);
  for (const auto& [status, count] : health.domains[0].request_outcomes) {
    EXPECT_EQ(count, 0u);
  }
}

TEST(ServiceTest, ProfileUpdateTakesEffectAndBumpsVersion) {
  auto service = OpenService();
  ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("d")).ok());
  LoadSmallDomain(*service, "d");
  AlgorithmProfile popularity{{Source(1, PopularityParams{})}, FusionMode::kWeightedSum};
  EXPECT_EQ(*service->UpdateProfile("d", popularity), 2u);
  auto response = service->Recommend(ForUserRequest("d", "u0"));
  EXPECT_EQ(response->profile_version, 2u);
  ASSERT_EQ(response->sources_used.size(), 1u);
  EXPECT_EQ(response->sources_used[0].kind, SourceKind::kPopularity);
}

TEST(ServiceTest, PersistsDomainsAcrossRestart) {
  TempDir tmp;
  RankedList before;
  {
    auto service = OpenService(tmp.path());
    ASSERT_TRUE(service->RegisterDomain(TwoSourceConfig("d")).ok());
    LoadSmallDomain(*service, "d");
    ASSERT_TRUE(service->UpdateProfile("d", TwoSourceConfig("d").profile).ok());
    before = service->Recommend(ForUserRequest("d", "u2"))->items;
    // A second process cannot open the same data directory.
    EXPECT_EQ(RecommendService::Open(ServiceOptions{tmp.path(), 100}).code(),
              ErrorCode::kIoFailure);
  }
  auto service = OpenService(tmp.path());
  EXPECT_EQ(service->GetDomain("d")->version, 2u);
  EXPECT_EQ(service->Recommend(ForUserRequest("d", "u2"))->items, before);
}

TEST(ServiceTest, ConcurrentRequestsAndIngestion) {
  auto service = OpenService();
  DomainConfig config = TwoSourceConfig("d");
  config.latency_budget_ms = 10'000;
  ASSERT_TRUE(service->RegisterDomain(config).ok());
  LoadSmallDomain(*service, "d");
  std::atomic<bool> stop{false};
  std::atomic<int> bad{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&, t] {
      while (!stop) {
        auto r = service->Recommend(ForUserRequest("d", "u" + std::to_string(t)));
        if (!r.ok() || r->status != ResponseStatus::kOk || !IsWellFormed(r->items)) ++bad;
      }
    });
  }
  for (int n = 0; n < 50; ++n) {
    std::vector<Interaction> batch = {
        MakeInteraction("w" + std::to_string(n), "i" + std::to_string(n % 8), 1000 + n)};
    ASSERT_TRUE(service->IngestInteractions("d", batch).ok());
  }
  stop = true;
  for (auto& t : readers) t.join();
  EXPECT_EQ(bad.load(), 0);
}

}  // namespace
}  // namespace polyrec
