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

#ifndef POLYREC_DOMAIN_STORE_HPP_
#define POLYREC_DOMAIN_STORE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "polyrec/catalog.hpp"
#include "polyrec/embedding_index.hpp"
#include "polyrec/event_log.hpp"
#include "polyrec/interaction_matrix.hpp"
#include "polyrec/popularity.hpp"
#include "polyrec/status.hpp"
#include "polyrec/tfidf.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

// Catalog plus the content indexes derived from it. Content indexes are
// built on first use per text-field list and cached for the lifetime of
// this (immutable) catalog.
class CatalogView {
 public:
  CatalogView() = default;
  explicit CatalogView(Catalog catalog) : catalog_(std::move(catalog)) {}

  const Catalog& catalog() const { return catalog_; }
  std::shared_ptr<const TfidfIndex> ContentIndex(
      const std::vector<std::string>& text_fields) const;

 private:
  Catalog catalog_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<std::string>, std::shared_ptr<const TfidfIndex>>
      content_indexes_;
};

// Memo of popularity rankings for one state. Copies start empty.
class PopularityCache {
 public:
  using Ranking = std::shared_ptr<const std::vector<ScoredItem>>;

  PopularityCache() = default;
  PopularityCache(const PopularityCache&) {}
  PopularityCache& operator=(const PopularityCache&);

  Ranking GetOrCompute(std::optional<int64_t> window_ms,
                       const std::function<std::vector<ScoredItem>()>& compute) const;

 private:
  mutable std::mutex mu_;
  mutable std::map<std::optional<int64_t>, Ranking> rankings_;
};

struct InteractionData {
  std::vector<Interaction> events;  // arrival order
  InteractionMatrix matrix;
  InteractionCounts all_time_counts;
  std::optional<int64_t> newest_timestamp;
  PopularityCache popularity;

  // Counts within `window_ms` before newest_timestamp; all time if unset.
  InteractionCounts Counts(std::optional<int64_t> window_ms) const;
  // Counts(window_ms) fully ranked, computed once per state.
  PopularityCache::Ranking Popularity(std::optional<int64_t> window_ms) const;
};

using SpaceMap =
    std::map<std::string, std::shared_ptr<const EmbeddingSpace>, std::less<>>;

// Immutable point-in-time view of one domain. Every source of a request
// reads the same DomainState.
struct DomainState {
  uint64_t seq = 0;  // last applied event
  std::shared_ptr<const CatalogView> catalog;
  std::shared_ptr<const InteractionData> interactions;
  SpaceMap spaces;

  const EmbeddingSpace* Space(std::string_view space_id) const;
  // Interactions whose item is not (yet) in the catalog.
  size_t DanglingInteractions() const;
};

struct DomainSchema {
  std::string domain_id;
  std::set<std::string> entity_types;
  std::set<std::string> interaction_types;
};

struct SnapshotHandle {
  std::string domain_id;
  uint64_t seq = 0;
  std::filesystem::path path;
};

// Ingestion, durability and snapshot/replay for one domain. Writes are
// serialized; each accepted batch is appended to the log and fsync'ed
// before the new state is published and the batch acknowledged.
//
// Layout under the domain directory:
//   events.log          JSONL event log
//   snap-<seq>/         snapshot (manifest.json, items.jsonl,
//                       interactions.jsonl, embeddings.json)
class DomainStore {
 public:
  // Without a directory the store is memory-only and cannot snapshot.
  // With one, the state is recovered from the newest intact snapshot plus
  // the log tail.
  static Result<std::unique_ptr<DomainStore>> Open(
      DomainSchema schema, std::optional<std::filesystem::path> dir);

  DomainStore(const DomainStore&) = delete;
  DomainStore& operator=(const DomainStore&) = delete;

  std::shared_ptr<const DomainState> state() const;
  const DomainSchema& schema() const { return schema_; }
  const std::optional<std::filesystem::path>& dir() const { return dir_; }

  // Partial acceptance: invalid records are reported individually, the
  // rest are applied. IoFailure means nothing from the batch was applied.
  Result<IngestReport> IngestItems(std::span<const Item> items);
  Result<IngestReport> IngestInteractions(
      std::span<const Interaction> interactions);
  Result<IngestReport> IngestEmbeddings(
      std::span<const EmbeddingRecord> records);

  Result<SnapshotHandle> Snapshot();
  // State becomes the snapshot image plus replay of later log events.
  Status Restore(const SnapshotHandle& handle);
  std::vector<SnapshotHandle> ListSnapshots() const;

  // Recomputes a state from a full event sequence, bypassing the log.
  static std::shared_ptr<const DomainState> Rebuild(std::span<const Event> events);

 private:
  DomainStore(DomainSchema schema, std::optional<std::filesystem::path> dir)
      : schema_(std::move(schema)), dir_(std::move(dir)) {}

  Status Commit(std::vector<Event>& events,
                const std::function<std::shared_ptr<const DomainState>()>& apply);
  void Publish(std::shared_ptr<const DomainState> next);

  DomainSchema schema_;
  std::optional<std::filesystem::path> dir_;
  std::optional<EventLog> log_;

  std::mutex write_mu_;
  uint64_t next_seq_ = 1;
  std::shared_ptr<const DomainState> state_;  // atomic_load / atomic_store
};

// Loads a snapshot directory and replays `tail` on top of it.
Result<std::shared_ptr<const DomainState>> LoadSnapshot(
    const SnapshotHandle& handle, std::span<const Event> tail);

}  // namespace polyrec

#endif  // POLYREC_DOMAIN_STORE_HPP_
