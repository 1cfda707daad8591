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

#include "polyrec/domain_store.hpp"

#include <zlib.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polyrec/json_codec.hpp"

namespace polyrec {

namespace fs = std::filesystem;

std::shared_ptr<const TfidfIndex> CatalogView::ContentIndex(
    const std::vector<std::string>& text_fields) const {
  std::lock_guard lock(mu_);
  auto it = content_indexes_.find(text_fields);
  if (it != content_indexes_.end()) return it->second;

  std::vector<Document> documents;
  documents.reserve(catalog_.size());
  for (const auto& [id, item] : catalog_.items()) {
    std::string text;
    for (const auto& field : text_fields) {
      auto f = item.text_fields.find(field);
      if (f == item.text_fields.end()) continue;
      text += f->second;
      text += ' ';
    }
    documents.push_back(Document{id, std::move(text)});
  }
  auto index = std::make_shared<const TfidfIndex>(
      TfidfIndex::Build(std::move(documents)));
  content_indexes_.emplace(text_fields, index);
  return index;
}

PopularityCache& PopularityCache::operator=(const PopularityCache&) {
  std::lock_guard lock(mu_);
  rankings_.clear();
  return *this;
}

PopularityCache::Ranking PopularityCache::GetOrCompute(
    std::optional<int64_t> window_ms,
    const std::function<std::vector<ScoredItem>()>& compute) const {
  std::lock_guard lock(mu_);
  auto it = rankings_.find(window_ms);
  if (it != rankings_.end()) return it->second;
  auto ranking = std::make_shared<const std::vector<ScoredItem>>(compute());
  rankings_.emplace(window_ms, ranking);
  return ranking;
}

InteractionCounts InteractionData::Counts(std::optional<int64_t> window_ms) const {
  if (!window_ms) return all_time_counts;
  return CountInteractions(events, window_ms, newest_timestamp.value_or(0));
}

PopularityCache::Ranking InteractionData::Popularity(
    std::optional<int64_t> window_ms) const {
  return popularity.GetOrCompute(
      window_ms, [&] { return RankAllByPopularity(Counts(window_ms)); });
}

const EmbeddingSpace* DomainState::Space(std::string_view space_id) const {
  auto it = spaces.find(space_id);
  return it == spaces.end() ? nullptr : it->second.get();
}

size_t DomainState::DanglingInteractions() const {
  size_t dangling = 0;
  for (const auto& event : interactions->events) {
    if (!catalog->catalog().Contains(event.item_id)) ++dangling;
  }
  return dangling;
}

namespace {

std::shared_ptr<const DomainState> EmptyState() {
  auto state = std::make_shared<DomainState>();
  state->catalog = std::make_shared<const CatalogView>();
  state->interactions = std::make_shared<const InteractionData>();
  return state;
}

// Applies events to a base state, copying each component at most once.
class StateBuilder {
 public:
  explicit StateBuilder(const DomainState& base) : base_(base) {}

  void Apply(const Event& event) {
    seq_ = std::max(seq_, event.seq);
    std::visit([this](const auto& payload) { ApplyPayload(payload); },
               event.payload);
  }

  std::shared_ptr<const DomainState> Finish() {
    auto next = std::make_shared<DomainState>();
    next->seq = std::max(base_.seq, seq_);
    next->catalog = catalog_ ? std::make_shared<const CatalogView>(
                                   std::move(*catalog_))
                             : base_.catalog;
    next->interactions = interactions_ ? std::shared_ptr<const InteractionData>(
                                             std::move(interactions_))
                                       : base_.interactions;
    next->spaces = base_.spaces;
    for (auto& [id, space] : spaces_) next->spaces[id] = std::move(space);
    return next;
  }

 private:
  void ApplyPayload(const Item& item) {
    if (!catalog_) catalog_ = base_.catalog->catalog();
    catalog_->Upsert(item);
  }

  void ApplyPayload(const Interaction& interaction) {
    if (!interactions_) {
      interactions_ = std::make_shared<InteractionData>(*base_.interactions);
    }
    interactions_->events.push_back(interaction);
    interactions_->matrix.Add(interaction.user_id, interaction.item_id);
    ++interactions_->all_time_counts[interaction.item_id];
    interactions_->newest_timestamp =
        std::max(interactions_->newest_timestamp.value_or(interaction.timestamp),
                 interaction.timestamp);
  }

  void ApplyPayload(const EmbeddingRecord& record) {
    auto& space = spaces_[record.space_id];
    if (!space) {
      const EmbeddingSpace* existing = base_.Space(record.space_id);
      space = existing != nullptr
                  ? std::make_shared<EmbeddingSpace>(*existing)
                  : std::make_shared<EmbeddingSpace>(record.space_id,
                                                     record.vector.size());
    }
    // Logged records were validated before they were appended.
    (void)space->Index(record.item_id, record.vector);
  }

  const DomainState& base_;
  uint64_t seq_ = 0;
  std::optional<Catalog> catalog_;
  std::shared_ptr<InteractionData> interactions_;
  std::map<std::string, std::shared_ptr<EmbeddingSpace>> spaces_;
};

Error Corrupt(const std::string& what) {
  return MakeError(ErrorCode::kCorruptSnapshot, what);
}

uint32_t Crc32(const std::string& data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()),
              static_cast<uInt>(data.size()));
  return static_cast<uint32_t>(crc);
}

Result<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Corrupt("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Status WriteFile(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  out.flush();
  if (!out) return MakeError(ErrorCode::kIoFailure, "write " + path.string());
  return Status::Ok();
}

std::optional<uint64_t> SnapshotSeq(const fs::path& path) {
  const std::string name = path.filename().string();
  if (!name.starts_with("snap-")) return std::nullopt;
  uint64_t seq = 0;
  const char* begin = name.data() + 5;
  const char* end = name.data() + name.size();
  auto [ptr, ec] = std::from_chars(begin, end, seq);
  if (ec != std::errc() || ptr != end || begin == end) return std::nullopt;
  return seq;
}

template <typename T>
Result<std::vector<T>> ParseLines(const std::string& data,
                                  Result<T> (*from_json)(const Json&)) {
  std::vector<T> out;
  std::istringstream in(data);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json json = Json::parse(line, nullptr, false);
    if (json.is_discarded()) return Corrupt("bad snapshot line");
    auto record = from_json(json);
    if (!record) return Corrupt(record.error().ToString());
    out.push_back(std::move(*record));
  }
  return out;
}

}  // namespace

Result<std::unique_ptr<DomainStore>> DomainStore::Open(
    DomainSchema schema, std::optional<fs::path> dir) {
  std::unique_ptr<DomainStore> store(
      new DomainStore(std::move(schema), std::move(dir)));
  if (!store->dir_) {
    store->state_ = EmptyState();
    return store;
  }

  std::error_code ec;
  fs::create_directories(*store->dir_, ec);
  if (ec) {
    return MakeError(ErrorCode::kIoFailure,
                     "create " + store->dir_->string() + ": " + ec.message());
  }
  const fs::path log_path = *store->dir_ / "events.log";
  auto log = EventLog::Open(log_path);
  if (!log) return log.error();
  store->log_.emplace(std::move(*log));
  auto contents = EventLog::Read(log_path);
  if (!contents) return contents.error();
  const std::vector<Event>& events = contents->events;

  uint64_t last_seq = events.empty() ? 0 : events.back().seq;
  std::shared_ptr<const DomainState> state;
  for (const SnapshotHandle& handle : store->ListSnapshots()) {
    std::vector<Event> tail;
    for (const Event& e : events) {
      if (e.seq > handle.seq) tail.push_back(e);
    }
    auto loaded = LoadSnapshot(handle, tail);
    if (loaded) {
      state = std::move(*loaded);
      last_seq = std::max(last_seq, handle.seq);
      break;
    }
  }
  if (!state) state = Rebuild(events);
  store->state_ = std::move(state);
  store->next_seq_ = last_seq + 1;
  return store;
}

std::shared_ptr<const DomainState> DomainStore::state() const {
  return std::atomic_load(&state_);
}

void DomainStore::Publish(std::shared_ptr<const DomainState> next) {
  std::atomic_store(&state_, std::move(next));
}

std::shared_ptr<const DomainState> DomainStore::Rebuild(
    std::span<const Event> events) {
  auto base = EmptyState();
  StateBuilder builder(*base);
  for (const Event& e : events) builder.Apply(e);
  return builder.Finish();
}

Status DomainStore::Commit(
    std::vector<Event>& events,
    const std::function<std::shared_ptr<const DomainState>()>& apply) {
  if (events.empty()) return Status::Ok();
  for (Event& e : events) e.seq = next_seq_++;
  if (log_) {
    if (Status s = log_->Append(events); !s.ok()) {
      next_seq_ -= events.size();
      return s;
    }
  }
  Publish(apply());
  return Status::Ok();
}

Result<IngestReport> DomainStore::IngestItems(std::span<const Item> items) {
  IngestReport report;
  std::vector<Event> events;
  for (size_t i = 0; i < items.size(); ++i) {
    const Item& item = items[i];
    if (item.item_id.empty()) {
      report.rejected.push_back({i + 1, ErrorCode::kMalformedRecord, "empty item_id"});
    } else if (schema_.entity_types.count(item.entity_type) == 0) {
      report.rejected.push_back(
          {i + 1, ErrorCode::kInvalidEntityType, item.entity_type});
    } else {
      events.push_back(Event{0, item});
    }
  }
  std::lock_guard lock(write_mu_);
  auto base = state();
  Status s = Commit(events, [&] {
    StateBuilder builder(*base);
    for (const Event& e : events) builder.Apply(e);
    return builder.Finish();
  });
  if (!s.ok()) return s.error();
  report.accepted = events.size();
  return report;
}

Result<IngestReport> DomainStore::IngestInteractions(
    std::span<const Interaction> interactions) {
  IngestReport report;
  std::vector<Event> events;
  for (size_t i = 0; i < interactions.size(); ++i) {
    const Interaction& e = interactions[i];
    std::string problem;
    if (e.user_id.empty()) {
      problem = "empty user_id";
    } else if (e.item_id.empty()) {
      problem = "empty item_id";
    } else if (schema_.interaction_types.count(e.interaction_type) == 0) {
      problem = "unknown interaction_type '" + e.interaction_type + "'";
    } else {
      for (const auto& [key, value] : e.context) {
        if (key.empty()) problem = "empty context key";
      }
    }
    if (problem.empty()) {
      events.push_back(Event{0, e});
    } else {
      report.rejected.push_back({i + 1, ErrorCode::kMalformedRecord, problem});
    }
  }
  std::lock_guard lock(write_mu_);
  auto base = state();
  Status s = Commit(events, [&] {
    StateBuilder builder(*base);
    for (const Event& e : events) builder.Apply(e);
    return builder.Finish();
  });
  if (!s.ok()) return s.error();
  report.accepted = events.size();
  return report;
}

Result<IngestReport> DomainStore::IngestEmbeddings(
    std::span<const EmbeddingRecord> records) {
  IngestReport report;
  std::vector<Event> events;
  std::lock_guard lock(write_mu_);
  auto base = state();
  std::map<std::string, size_t> new_dims;
  for (size_t i = 0; i < records.size(); ++i) {
    const EmbeddingRecord& r = records[i];
    if (r.item_id.empty() || r.space_id.empty()) {
      report.rejected.push_back(
          {i + 1, ErrorCode::kMalformedRecord, "empty item_id or space_id"});
      continue;
    }
    size_t dim = r.vector.size();
    if (const EmbeddingSpace* space = base->Space(r.space_id)) {
      dim = space->dim();
    } else if (auto it = new_dims.find(r.space_id); it != new_dims.end()) {
      dim = it->second;
    }
    Status valid = ValidateVector(r.vector, dim);
    if (valid.ok() && dim == 0) {
      valid = MakeError(ErrorCode::kMalformedRecord, "empty vector");
    }
    if (valid.ok() &&
        std::all_of(r.vector.begin(), r.vector.end(),
                    [](double x) { return x == 0.0; })) {
      valid = MakeError(ErrorCode::kZeroVector);
    }
    if (!valid.ok()) {
      report.rejected.push_back({i + 1, valid.code(), valid.error().message});
      continue;
    }
    new_dims.emplace(r.space_id, dim);
    events.push_back(Event{0, r});
  }
  Status s = Commit(events, [&] {
    StateBuilder builder(*base);
    for (const Event& e : events) builder.Apply(e);
    return builder.Finish();
  });
  if (!s.ok()) return s.error();
  report.accepted = events.size();
  return report;
}

std::vector<SnapshotHandle> DomainStore::ListSnapshots() const {
  std::vector<SnapshotHandle> handles;
  if (!dir_) return handles;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(*dir_, ec)) {
    if (!entry.is_directory()) continue;
    if (auto seq = SnapshotSeq(entry.path())) {
      handles.push_back(SnapshotHandle{schema_.domain_id, *seq, entry.path()});
    }
  }
  std::sort(handles.begin(), handles.end(),
            [](const SnapshotHandle& a, const SnapshotHandle& b) {
              return a.seq > b.seq;
            });
  return handles;
}

Result<SnapshotHandle> DomainStore::Snapshot() {
  if (!dir_) {
    return MakeError(ErrorCode::kIoFailure, "memory-only domain has no snapshots");
  }
  std::lock_guard lock(write_mu_);
  auto current = state();
  SnapshotHandle handle{schema_.domain_id, current->seq,
                        *dir_ / ("snap-" + std::to_string(current->seq))};
  std::error_code ec;
  if (fs::exists(handle.path / "manifest.json", ec)) return handle;

  std::map<std::string, std::string> files;
  std::string& items = files["items.jsonl"];
  for (const auto& [id, item] : current->catalog->catalog().items()) {
    items += ToJson(item).dump();
    items += '\n';
  }
  std::string& interactions = files["interactions.jsonl"];
  for (const auto& event : current->interactions->events) {
    interactions += ToJson(event).dump();
    interactions += '\n';
  }
  Json spaces = Json::array();
  for (const auto& [id, space] : current->spaces) {
    Json items_json = Json::array();
    for (const auto& [item_id, vector] : space->Items()) {
      items_json.push_back(Json{{"item_id", item_id}, {"vector", vector}});
    }
    spaces.push_back(Json{{"space_id", id},
                          {"dim", space->dim()},
                          {"items", std::move(items_json)}});
  }
  files["embeddings.json"] = spaces.dump();

  Json manifest{{"domain_id", schema_.domain_id}, {"seq", current->seq}};
  Json file_list = Json::object();
  for (const auto& [name, data] : files) {
    file_list[name] = Json{{"bytes", data.size()}, {"crc32", Crc32(data)}};
  }
  manifest["files"] = std::move(file_list);

  const fs::path tmp = handle.path.string() + ".tmp";
  fs::remove_all(tmp, ec);
  fs::create_directories(tmp, ec);
  if (ec) return MakeError(ErrorCode::kIoFailure, "create " + tmp.string());
  for (const auto& [name, data] : files) {
    if (Status s = WriteFile(tmp / name, data); !s.ok()) return s.error();
  }
  if (Status s = WriteFile(tmp / "manifest.json", manifest.dump(2)); !s.ok()) {
    return s.error();
  }
  fs::rename(tmp, handle.path, ec);
  if (ec) {
    return MakeError(ErrorCode::kIoFailure,
                     "rename " + tmp.string() + ": " + ec.message());
  }
  return handle;
}

Result<std::shared_ptr<const DomainState>> LoadSnapshot(
    const SnapshotHandle& handle, std::span<const Event> tail) {
  auto manifest_text = ReadFile(handle.path / "manifest.json");
  if (!manifest_text) return manifest_text.error();
  Json manifest = Json::parse(*manifest_text, nullptr, false);
  if (manifest.is_discarded() || !manifest.is_object()) {
    return Corrupt("unreadable manifest");
  }
  if (manifest.value("domain_id", "") != handle.domain_id) {
    return Corrupt("snapshot belongs to another domain");
  }
  if (!manifest.contains("seq") || !manifest["seq"].is_number_unsigned() ||
      manifest["seq"].get<uint64_t>() != handle.seq) {
    return Corrupt("snapshot sequence mismatch");
  }
  const Json& files = manifest["files"];
  if (!files.is_object()) return Corrupt("manifest lists no files");

  std::map<std::string, std::string> contents;
  for (const char* name : {"items.jsonl", "interactions.jsonl", "embeddings.json"}) {
    if (!files.contains(name)) return Corrupt(std::string("missing ") + name);
    auto data = ReadFile(handle.path / name);
    if (!data) return data.error();
    const Json& expect = files[name];
    if (expect.value("bytes", uint64_t{0}) != data->size() ||
        expect.value("crc32", uint64_t{0}) != Crc32(*data)) {
      return Corrupt(std::string(name) + " is truncated or altered");
    }
    contents[name] = std::move(*data);
  }

  auto items = ParseLines<Item>(contents["items.jsonl"], &ItemFromJson);
  if (!items) return items.error();
  auto interactions =
      ParseLines<Interaction>(contents["interactions.jsonl"], &InteractionFromJson);
  if (!interactions) return interactions.error();
  Json spaces = Json::parse(contents["embeddings.json"], nullptr, false);
  if (spaces.is_discarded() || !spaces.is_array()) {
    return Corrupt("bad embeddings.json");
  }

  std::vector<Event> events;
  for (auto& item : *items) events.push_back(Event{0, std::move(item)});
  for (auto& interaction : *interactions) {
    events.push_back(Event{0, std::move(interaction)});
  }
  for (const Json& space : spaces) {
    if (!space.is_object() || !space.contains("space_id") ||
        !space["space_id"].is_string() || !space.contains("items") ||
        !space["items"].is_array()) {
      return Corrupt("bad embedding space entry");
    }
    const std::string space_id = space["space_id"].get<std::string>();
    const size_t dim = space.value("dim", size_t{0});
    for (const Json& entry : space["items"]) {
      Json record = entry;
      record["space_id"] = space_id;
      auto parsed = EmbeddingRecordFromJson(record);
      if (!parsed) return Corrupt(parsed.error().ToString());
      if (parsed->vector.size() != dim ||
          !ValidateVector(parsed->vector, dim).ok()) {
        return Corrupt("bad vector in space " + space_id);
      }
      events.push_back(Event{0, std::move(*parsed)});
    }
  }

  auto base = EmptyState();
  StateBuilder builder(*base);
  for (const Event& e : events) builder.Apply(e);
  auto image = builder.Finish();
  auto with_seq = std::make_shared<DomainState>(*image);
  with_seq->seq = handle.seq;

  StateBuilder replay(*with_seq);
  for (const Event& e : tail) {
    if (e.seq > handle.seq) replay.Apply(e);
  }
  return replay.Finish();
}

Status DomainStore::Restore(const SnapshotHandle& handle) {
  if (handle.domain_id != schema_.domain_id) {
    return Corrupt("snapshot belongs to domain " + handle.domain_id);
  }
  std::lock_guard lock(write_mu_);
  std::vector<Event> tail;
  if (log_) {
    auto contents = EventLog::Read(log_->path());
    if (!contents) return contents.error();
    for (Event& e : contents->events) {
      if (e.seq > handle.seq) tail.push_back(std::move(e));
    }
  }
  auto restored = LoadSnapshot(handle, tail);
  if (!restored) return restored.error();
  Publish(std::move(*restored));
  return Status::Ok();
}

}  // namespace polyrec
