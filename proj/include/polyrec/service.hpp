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

#ifndef POLYREC_SERVICE_HPP_
#define POLYREC_SERVICE_HPP_

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polyrec/deadline.hpp"
#include "polyrec/domain_registry.hpp"
#include "polyrec/domain_store.hpp"
#include "polyrec/status.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

inline constexpr int64_t kMaxK = 1000;

struct ForUser {
  std::string user_id;
};
struct SimilarTo {
  std::string item_id;
};
using RecommendMode = std::variant<ForUser, SimilarTo>;

struct RecommendRequest {
  std::string domain_id;
  RecommendMode mode;
  std::optional<int64_t> k;  // domain default_k when unset
  std::map<std::string, std::string> context;
  std::optional<std::set<std::string>> allowed_entity_types;
  ItemSet exclude_items;
  // Overrides the domain budget for this request; 0 disables the deadline.
  std::optional<int64_t> latency_budget_ms;
};

enum class ResponseStatus { kOk, kDegraded, kFallback, kEmpty };
enum class SourceOutcome { kOk, kTimeout, kError, kEmpty };

std::string_view ResponseStatusName(ResponseStatus status);
std::string_view SourceOutcomeName(SourceOutcome outcome);
std::optional<ResponseStatus> ParseResponseStatus(std::string_view name);
std::optional<SourceOutcome> ParseSourceOutcome(std::string_view name);

struct SourceReport {
  SourceKind kind;
  double latency_ms = 0.0;
  SourceOutcome outcome = SourceOutcome::kOk;
  std::string detail;  // error text, if any
};

struct RecommendResponse {
  RankedList items;
  ResponseStatus status = ResponseStatus::kEmpty;
  std::vector<SourceReport> sources_used;
  uint64_t profile_version = 0;
  double total_latency_ms = 0.0;
  uint64_t state_seq = 0;
};

enum class FaultMode { kError, kThrow };

// Test hook: makes one source of a domain fail and/or stall.
struct Fault {
  std::optional<FaultMode> mode = FaultMode::kError;
  std::chrono::milliseconds delay{0};
};

struct DomainHealth {
  std::string domain_id;
  bool healthy = true;
  std::vector<std::string> problems;
  size_t items = 0;
  size_t interactions = 0;
  size_t dangling_interactions = 0;
  std::map<std::string, size_t> embedding_spaces;  // space_id -> vectors
  int64_t last_ingest_ms = 0;                      // unix millis, 0 = never
  std::map<std::string, uint64_t> request_outcomes;
  uint64_t profile_version = 0;
};

struct HealthReport {
  std::vector<DomainHealth> domains;
};

struct ServiceOptions {
  // Memory-only when unset.
  std::optional<std::filesystem::path> data_dir;
  // Budget assumed for configs that do not set latency_budget_ms.
  int64_t default_budget_ms = kDefaultLatencyBudgetMs;
};

// The real-time request path. Each domain is an isolated worker: its own
// config snapshot, state, fault table and counters. A request snapshots the
// domain config and state once, fans the configured sources out
// concurrently under one deadline, fuses what came back in time, filters,
// and falls back to popularity when nothing usable survived.
class RecommendService {
 public:
  static Result<std::unique_ptr<RecommendService>> Open(ServiceOptions options);
  ~RecommendService();

  RecommendService(const RecommendService&) = delete;
  RecommendService& operator=(const RecommendService&) = delete;

  const ServiceOptions& options() const { return options_; }

  Result<uint64_t> RegisterDomain(DomainConfig config);
  Result<uint64_t> UpdateProfile(std::string_view domain_id,
                                 AlgorithmProfile profile);
  Result<DomainConfig> GetDomain(std::string_view domain_id) const;
  std::vector<std::string> DomainIds() const { return registry_.DomainIds(); }

  Result<IngestReport> IngestItems(std::string_view domain_id,
                                   std::span<const Item> items);
  Result<IngestReport> IngestInteractions(
      std::string_view domain_id, std::span<const Interaction> interactions);
  Result<IngestReport> IngestEmbeddings(
      std::string_view domain_id, std::span<const EmbeddingRecord> records);

  Result<SnapshotHandle> Snapshot(std::string_view domain_id);
  Status Restore(std::string_view domain_id, const SnapshotHandle& handle);
  Result<std::vector<SnapshotHandle>> ListSnapshots(
      std::string_view domain_id) const;

  Result<RecommendResponse> Recommend(const RecommendRequest& request);

  // Interaction-count ranking over the domain's current state.
  Result<RankedList> PopularityRecommend(std::string_view domain_id, size_t k,
                                         std::optional<int64_t> window_ms,
                                         const ItemSet& exclude = {}) const;

  // One source evaluated exactly as Recommend would, without deadline,
  // faults or fusion. Seen items (for_user) or the query item (similar_to)
  // are excluded.
  Result<RankedList> RunSource(std::string_view domain_id,
                               const SourceSpec& source,
                               const RecommendMode& mode, size_t k) const;

  Result<std::shared_ptr<const DomainState>> State(
      std::string_view domain_id) const;

  HealthReport Health() const;

  void InjectFault(std::string_view domain_id, SourceKind kind, Fault fault);
  void ClearFaults(std::string_view domain_id);

 private:
  struct DomainRuntime {
    std::unique_ptr<DomainStore> store;
    mutable std::mutex fault_mu;
    std::map<SourceKind, Fault> faults;
    std::atomic<int64_t> last_ingest_ms{0};
    std::array<std::atomic<uint64_t>, 4> status_counts{};
    std::atomic<bool> last_request_failed{false};
    std::atomic<bool> io_failed{false};
  };

  explicit RecommendService(ServiceOptions options);

  Status LoadDomains();
  Status PersistConfig(const DomainConfig& config) const;
  std::shared_ptr<DomainRuntime> Runtime(std::string_view domain_id) const;
  std::optional<std::filesystem::path> DomainDir(std::string_view id) const;
  template <typename Record, typename Fn>
  Result<IngestReport> Ingest(std::string_view domain_id,
                              std::span<const Record> records, Fn&& fn);

  ServiceOptions options_;
  DomainRegistry registry_;
  mutable std::shared_mutex runtimes_mu_;
  std::map<std::string, std::shared_ptr<DomainRuntime>, std::less<>> runtimes_;
  std::shared_ptr<TaskTracker> stragglers_ = std::make_shared<TaskTracker>();
  int lock_fd_ = -1;
};

// Recommendation source evaluated against one domain state. `exclude` holds
// everything that must not be returned.
Result<RankedList> RunSourceOnState(const DomainState& state,
                                    const SourceSpec& source,
                                    const RecommendMode& mode, size_t depth,
                                    const ItemSet& exclude);

}  // namespace polyrec

#endif  // POLYREC_SERVICE_HPP_
