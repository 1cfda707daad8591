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

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polyrec/collaborative.hpp"
#include "polyrec/fusion.hpp"
#include "polyrec/json_codec.hpp"
#include "polyrec/popularity.hpp"

namespace polyrec {

namespace fs = std::filesystem;

std::string_view ResponseStatusName(ResponseStatus status) {
  switch (status) {
    case ResponseStatus::kOk:
      return "ok";
    case ResponseStatus::kDegraded:
      return "degraded";
    case ResponseStatus::kFallback:
      return "fallback";
    case ResponseStatus::kEmpty:
      return "empty";
  }
  return "unknown";
}

std::string_view SourceOutcomeName(SourceOutcome outcome) {
  switch (outcome) {
    case SourceOutcome::kOk:
      return "ok";
    case SourceOutcome::kTimeout:
      return "timeout";
    case SourceOutcome::kError:
      return "error";
    case SourceOutcome::kEmpty:
      return "empty";
  }
  return "unknown";
}

std::optional<ResponseStatus> ParseResponseStatus(std::string_view name) {
  for (auto s : {ResponseStatus::kOk, ResponseStatus::kDegraded,
                 ResponseStatus::kFallback, ResponseStatus::kEmpty}) {
    if (ResponseStatusName(s) == name) return s;
  }
  return std::nullopt;
}

std::optional<SourceOutcome> ParseSourceOutcome(std::string_view name) {
  for (auto o : {SourceOutcome::kOk, SourceOutcome::kTimeout,
                 SourceOutcome::kError, SourceOutcome::kEmpty}) {
    if (SourceOutcomeName(o) == name) return o;
  }
  return std::nullopt;
}

namespace {

int64_t UnixMillis() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Error UnknownDomain(std::string_view id) {
  return MakeError(ErrorCode::kUnknownDomain, std::string(id));
}

// Mean of the user's unit vectors in `space`; empty when the user has none.
std::vector<double> UserEmbeddingProfile(const EmbeddingSpace& space,
                                         const InteractionMatrix::IdSet& seen) {
  std::vector<double> profile(space.dim(), 0.0);
  size_t used = 0;
  for (const auto& item : seen) {
    const std::vector<double>* unit = space.UnitVector(item);
    if (unit == nullptr) continue;
    ++used;
    for (size_t d = 0; d < profile.size(); ++d) profile[d] += (*unit)[d];
  }
  if (used == 0) return {};
  for (double& x : profile) x /= static_cast<double>(used);
  return profile;
}

bool IsZero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

std::optional<int64_t> PopularityWindow(const AlgorithmProfile& profile) {
  for (const SourceSpec& source : profile.sources) {
    if (const auto* p = std::get_if<PopularityParams>(&source.params)) {
      return p->window_ms;
    }
  }
  return std::nullopt;
}

RankedList Truncate(RankedList list, size_t k) {
  if (list.entries.size() > k) list.entries.resize(k);
  return list;
}

}  // namespace

Result<RankedList> RunSourceOnState(const DomainState& state,
                                    const SourceSpec& source,
                                    const RecommendMode& mode, size_t depth,
                                    const ItemSet& exclude) {
  const InteractionMatrix& matrix = state.interactions->matrix;
  const auto* for_user = std::get_if<ForUser>(&mode);
  const auto* similar_to = std::get_if<SimilarTo>(&mode);

  if (const auto* p = std::get_if<UserCfParams>(&source.params)) {
    if (!for_user) {
      return RankedList{.entries = {}, .source_kind = SourceKind::kUserCf};
    }
    return UserCfRecommend(matrix, for_user->user_id, depth,
                           static_cast<size_t>(p->k_neighbors), exclude);
  }
  if (std::holds_alternative<ItemCfParams>(source.params)) {
    if (for_user) return ItemCfRecommend(matrix, for_user->user_id, depth, exclude);
    return ItemCfSimilarItems(matrix, similar_to->item_id, depth, exclude);
  }
  if (const auto* p = std::get_if<ContentParams>(&source.params)) {
    auto index = state.catalog->ContentIndex(p->text_fields);
    if (for_user) {
      return index->RecommendForUser(matrix, for_user->user_id, depth, exclude);
    }
    auto similar = index->SimilarItems(similar_to->item_id, depth, exclude);
    if (!similar && similar.code() == ErrorCode::kUnknownItem) {
      return RankedList{.entries = {}, .source_kind = SourceKind::kContent};
    }
    return similar;
  }
  if (const auto* p = std::get_if<EmbeddingParams>(&source.params)) {
    const EmbeddingSpace* space = state.Space(p->space_id);
    if (space == nullptr) {
      return MakeError(ErrorCode::kInvalidConfig,
                       "embedding space '" + p->space_id + "' not ingested");
    }
    std::vector<double> query;
    if (for_user) {
      query = UserEmbeddingProfile(*space, matrix.ItemsOf(for_user->user_id));
    } else if (const auto* raw = space->RawVector(similar_to->item_id)) {
      query = *raw;
    }
    if (query.empty() || IsZero(query)) {
      return RankedList{.entries = {}, .source_kind = SourceKind::kEmbedding};
    }
    std::optional<size_t> prune;
    if (p->prune_m) prune = static_cast<size_t>(*p->prune_m);
    return space->QueryTopK(query, depth, prune, exclude);
  }
  const auto& p = std::get<PopularityParams>(source.params);
  return TakeTop(*state.interactions->Popularity(p.window_ms), depth, exclude);
}

RecommendService::RecommendService(ServiceOptions options)
    : options_(std::move(options)) {}

RecommendService::~RecommendService() {
  stragglers_->WaitIdle();
  if (lock_fd_ >= 0) ::close(lock_fd_);
}

Result<std::unique_ptr<RecommendService>> RecommendService::Open(
    ServiceOptions options) {
  std::unique_ptr<RecommendService> service(
      new RecommendService(std::move(options)));
  if (service->options_.data_dir) {
    const fs::path& dir = *service->options_.data_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
      return MakeError(ErrorCode::kIoFailure,
                       "create " + dir.string() + ": " + ec.message());
    }
    const fs::path lock_path = dir / ".lock";
    int fd = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) {
      return MakeError(ErrorCode::kIoFailure, "open " + lock_path.string());
    }
    if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd);
      return MakeError(ErrorCode::kIoFailure,
                       dir.string() + " is in use by another process");
    }
    service->lock_fd_ = fd;
    if (Status s = service->LoadDomains(); !s.ok()) return s.error();
  }
  return service;
}

std::optional<fs::path> RecommendService::DomainDir(std::string_view id) const {
  if (!options_.data_dir) return std::nullopt;
  return *options_.data_dir / std::string(id);
}

Status RecommendService::LoadDomains() {
  std::error_code ec;
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(*options_.data_dir, ec)) {
    if (entry.is_directory() && fs::exists(entry.path() / "domain.json")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& dir : dirs) {
    std::ifstream in(dir / "domain.json");
    std::stringstream buffer;
    buffer << in.rdbuf();
    Json json = Json::parse(buffer.str(), nullptr, false);
    if (json.is_discarded()) {
      return MakeError(ErrorCode::kIoFailure,
                       "unreadable " + (dir / "domain.json").string());
    }
    auto config = DomainConfigFromJson(json, options_.default_budget_ms);
    if (!config) return config.error();
    if (config->domain_id != dir.filename().string()) {
      return MakeError(ErrorCode::kIoFailure,
                       "domain.json id does not match " + dir.string());
    }
    auto store = DomainStore::Open(
        DomainSchema{config->domain_id, config->entity_types,
                     config->interaction_types},
        dir);
    if (!store) return store.error();
    auto runtime = std::make_shared<DomainRuntime>();
    runtime->store = std::move(*store);
    const std::string id = config->domain_id;
    if (Status s = registry_.Adopt(std::move(*config)); !s.ok()) return s;
    std::unique_lock lock(runtimes_mu_);
    runtimes_.emplace(id, std::move(runtime));
  }
  return Status::Ok();
}

Status RecommendService::PersistConfig(const DomainConfig& config) const {
  auto dir = DomainDir(config.domain_id);
  if (!dir) return Status::Ok();
  std::error_code ec;
  fs::create_directories(*dir, ec);
  const fs::path tmp = *dir / "domain.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << ToJson(config).dump(2) << '\n';
    out.flush();
    if (!out) {
      return MakeError(ErrorCode::kIoFailure, "write " + tmp.string());
    }
  }
  fs::rename(tmp, *dir / "domain.json", ec);
  if (ec) {
    return MakeError(ErrorCode::kIoFailure, "rename: " + ec.message());
  }
  return Status::Ok();
}

std::shared_ptr<RecommendService::DomainRuntime> RecommendService::Runtime(
    std::string_view domain_id) const {
  std::shared_lock lock(runtimes_mu_);
  auto it = runtimes_.find(domain_id);
  return it == runtimes_.end() ? nullptr : it->second;
}

Result<uint64_t> RecommendService::RegisterDomain(DomainConfig config) {
  return registry_.Register(std::move(config), [this](const DomainConfig& c) {
    auto store = DomainStore::Open(
        DomainSchema{c.domain_id, c.entity_types, c.interaction_types},
        DomainDir(c.domain_id));
    if (!store) return Status(store.error());
    if (Status s = PersistConfig(c); !s.ok()) return s;
    auto runtime = std::make_shared<DomainRuntime>();
    runtime->store = std::move(*store);
    std::unique_lock lock(runtimes_mu_);
    runtimes_.emplace(c.domain_id, std::move(runtime));
    return Status::Ok();
  });
}

Result<uint64_t> RecommendService::UpdateProfile(std::string_view domain_id,
                                                 AlgorithmProfile profile) {
  return registry_.UpdateProfile(
      domain_id, std::move(profile),
      [this](const DomainConfig& c) { return PersistConfig(c); });
}

Result<DomainConfig> RecommendService::GetDomain(
    std::string_view domain_id) const {
  auto config = registry_.Get(domain_id);
  if (!config) return config.error();
  return **config;
}

template <typename Record, typename Fn>
Result<IngestReport> RecommendService::Ingest(std::string_view domain_id,
                                              std::span<const Record> records,
                                              Fn&& fn) {
  auto runtime = Runtime(domain_id);
  if (!runtime) return UnknownDomain(domain_id);
  Result<IngestReport> report = fn(*runtime->store, records);
  if (!report) {
    if (report.code() == ErrorCode::kIoFailure) runtime->io_failed = true;
    return report;
  }
  if (report->accepted > 0) runtime->last_ingest_ms = UnixMillis();
  return report;
}

Result<IngestReport> RecommendService::IngestItems(std::string_view domain_id,
                                                   std::span<const Item> items) {
  return Ingest(domain_id, items, [](DomainStore& store, auto records) {
    return store.IngestItems(records);
  });
}

Result<IngestReport> RecommendService::IngestInteractions(
    std::string_view domain_id, std::span<const Interaction> interactions) {
  return Ingest(domain_id, interactions, [](DomainStore& store, auto records) {
    return store.IngestInteractions(records);
  });
}

Result<IngestReport> RecommendService::IngestEmbeddings(
    std::string_view domain_id, std::span<const EmbeddingRecord> records) {
  return Ingest(domain_id, records, [](DomainStore& store, auto batch) {
    return store.IngestEmbeddings(batch);
  });
}

Result<SnapshotHandle> RecommendService::Snapshot(std::string_view domain_id) {
  auto runtime = Runtime(domain_id);
  if (!runtime) return UnknownDomain(domain_id);
  return runtime->store->Snapshot();
}

Status RecommendService::Restore(std::string_view domain_id,
                                 const SnapshotHandle& handle) {
  auto runtime = Runtime(domain_id);
  if (!runtime) return UnknownDomain(domain_id);
  return runtime->store->Restore(handle);
}

Result<std::vector<SnapshotHandle>> RecommendService::ListSnapshots(
    std::string_view domain_id) const {
  auto runtime = Runtime(domain_id);
  if (!runtime) return UnknownDomain(domain_id);
  return runtime->store->ListSnapshots();
}

Result<std::shared_ptr<const DomainState>> RecommendService::State(
    std::string_view domain_id) const {
  auto runtime = Runtime(domain_id);
  if (!runtime) return UnknownDomain(domain_id);
  return runtime->store->state();
}

Result<RankedList> RecommendService::PopularityRecommend(
    std::string_view domain_id, size_t k, std::optional<int64_t> window_ms,
    const ItemSet& exclude) const {
  auto runtime = Runtime(domain_id);
  if (!runtime) return UnknownDomain(domain_id);
  auto state = runtime->store->state();
  return TakeTop(*state->interactions->Popularity(window_ms), k, exclude);
}

Result<RankedList> RecommendService::RunSource(std::string_view domain_id,
                                               const SourceSpec& source,
                                               const RecommendMode& mode,
                                               size_t k) const {
  auto runtime = Runtime(domain_id);
  if (!runtime) return UnknownDomain(domain_id);
  auto state = runtime->store->state();
  ItemSet exclude;
  if (const auto* u = std::get_if<ForUser>(&mode)) {
    for (const auto& item : state->interactions->matrix.ItemsOf(u->user_id)) {
      exclude.insert(item);
    }
  } else {
    exclude.insert(std::get<SimilarTo>(mode).item_id);
  }
  return RunSourceOnState(*state, source, mode, k, exclude);
}

void RecommendService::InjectFault(std::string_view domain_id, SourceKind kind,
                                   Fault fault) {
  auto runtime = Runtime(domain_id);
  if (!runtime) return;
  std::lock_guard lock(runtime->fault_mu);
  runtime->faults[kind] = fault;
}

void RecommendService::ClearFaults(std::string_view domain_id) {
  auto runtime = Runtime(domain_id);
  if (!runtime) return;
  std::lock_guard lock(runtime->fault_mu);
  runtime->faults.clear();
  runtime->last_request_failed = false;
}

Result<RecommendResponse> RecommendService::Recommend(
    const RecommendRequest& request) {
  const auto start = Clock::now();
  auto runtime = Runtime(request.domain_id);
  if (!runtime) return UnknownDomain(request.domain_id);
  auto config_or = registry_.Get(request.domain_id);
  if (!config_or) return config_or.error();
  const std::shared_ptr<const DomainConfig> config = *config_or;
  const std::shared_ptr<const DomainState> state = runtime->store->state();

  const int64_t k = request.k.value_or(config->default_k);
  if (k < 1 || k > kMaxK) {
    return MakeError(ErrorCode::kMalformedRequest,
                     "k must be in [1, " + std::to_string(kMaxK) + "]");
  }
  const auto* for_user = std::get_if<ForUser>(&request.mode);
  const auto* similar_to = std::get_if<SimilarTo>(&request.mode);
  if ((for_user && for_user->user_id.empty()) ||
      (similar_to && similar_to->item_id.empty())) {
    return MakeError(ErrorCode::kMalformedRequest, "empty user_id / item_id");
  }
  int64_t budget_ms = config->latency_budget_ms;
  if (request.latency_budget_ms) {
    if (*request.latency_budget_ms < 0) {
      return MakeError(ErrorCode::kMalformedRequest, "negative budget");
    }
    budget_ms = *request.latency_budget_ms;
  }
  const Budget budget = budget_ms == 0
                            ? Budget()
                            : Budget(std::chrono::milliseconds(budget_ms));
  std::map<SourceKind, Fault> faults;
  {
    std::lock_guard lock(runtime->fault_mu);
    faults = runtime->faults;
  }

  auto exclude = std::make_shared<ItemSet>(request.exclude_items);
  if (for_user) {
    for (const auto& item : state->interactions->matrix.ItemsOf(for_user->user_id)) {
      exclude->insert(item);
    }
  } else {
    exclude->insert(similar_to->item_id);
  }
  const size_t depth =
      static_cast<size_t>(k) + request.exclude_items.size() +
      (request.allowed_entity_types ? 4 * static_cast<size_t>(k) : 0);

  struct Launched {
    const SourceSpec* spec;
    PendingTask<RankedList> task;
  };
  std::vector<Launched> launched;
  for (const SourceSpec& spec : config->profile.sources) {
    if (spec.weight == 0.0) continue;
    if (similar_to && spec.kind() == SourceKind::kUserCf) continue;
    std::optional<Fault> fault;
    if (auto it = faults.find(spec.kind()); it != faults.end()) fault = it->second;
    std::shared_ptr<const ItemSet> exclude_ro = exclude;
    auto task = PendingTask<RankedList>::Launch(
        [state, spec, mode = request.mode, depth, exclude_ro,
         fault]() -> Result<RankedList> {
          if (fault) {
            if (fault->delay.count() > 0) std::this_thread::sleep_for(fault->delay);
            if (fault->mode == FaultMode::kError) {
              return MakeError(ErrorCode::kIoFailure, "injected fault");
            }
            if (fault->mode == FaultMode::kThrow) {
              throw std::runtime_error("injected crash");
            }
          }
          return RunSourceOnState(*state, spec, mode, depth, *exclude_ro);
        },
        stragglers_);
    launched.push_back(Launched{&spec, std::move(task)});
  }

  std::optional<Clock::time_point> deadline;
  if (budget) deadline = start + *budget;

  RecommendResponse response;
  response.profile_version = config->version;
  response.state_seq = state->seq;
  FusionInput fusion;
  fusion.exclude = *exclude;
  bool any_failed = false;
  for (Launched& l : launched) {
    DeadlineResult<RankedList> result = l.task.AwaitUntil(deadline);
    SourceReport report{l.spec->kind(), result.latency_ms, SourceOutcome::kOk,
                        result.error};
    switch (result.outcome) {
      case DeadlineOutcome::kTimeout:
        report.outcome = SourceOutcome::kTimeout;
        any_failed = true;
        break;
      case DeadlineOutcome::kFailed:
        report.outcome = SourceOutcome::kError;
        any_failed = true;
        break;
      case DeadlineOutcome::kCompleted:
        if (result.value->empty()) {
          report.outcome = SourceOutcome::kEmpty;
        } else {
          fusion.sources.push_back(FusionSource{l.spec->kind(), l.spec->weight,
                                                std::move(*result.value)});
        }
        break;
    }
    response.sources_used.push_back(std::move(report));
  }

  const Catalog& catalog = state->catalog->catalog();
  if (!fusion.sources.empty()) {
    auto fused = Fuse(fusion, SIZE_MAX);
    if (fused) {
      response.items = Truncate(
          ApplyFilters(*fused, *exclude, request.allowed_entity_types, catalog),
          static_cast<size_t>(k));
    }
  }
  if (!response.items.empty()) {
    response.status = any_failed ? ResponseStatus::kDegraded : ResponseStatus::kOk;
  } else {
    RankedList popular = TakeTop(
        *state->interactions->Popularity(PopularityWindow(config->profile)),
        SIZE_MAX, *exclude);
    response.items = Truncate(
        ApplyFilters(popular, *exclude, request.allowed_entity_types, catalog),
        static_cast<size_t>(k));
    response.items.source_kind = SourceKind::kPopularity;
    response.status = response.items.empty() ? ResponseStatus::kEmpty
                                             : ResponseStatus::kFallback;
  }

  const bool all_failed =
      !launched.empty() &&
      std::all_of(response.sources_used.begin(), response.sources_used.end(),
                  [](const SourceReport& r) {
                    return r.outcome == SourceOutcome::kTimeout ||
                           r.outcome == SourceOutcome::kError;
                  });
  runtime->last_request_failed = all_failed;
  ++runtime->status_counts[static_cast<size_t>(response.status)];
  response.total_latency_ms = MillisSince(start);
  return response;
}

HealthReport RecommendService::Health() const {
  HealthReport report;
  for (const std::string& id : registry_.DomainIds()) {
    auto runtime = Runtime(id);
    auto config = registry_.Get(id);
    if (!runtime || !config) continue;
    DomainHealth health;
    health.domain_id = id;
    health.profile_version = (*config)->version;
    auto state = runtime->store->state();
    health.items = state->catalog->catalog().size();
    health.interactions = state->interactions->events.size();
    health.dangling_interactions = state->DanglingInteractions();
    for (const auto& [space_id, space] : state->spaces) {
      health.embedding_spaces[space_id] = space->size();
    }
    health.last_ingest_ms = runtime->last_ingest_ms.load();
    for (auto s : {ResponseStatus::kOk, ResponseStatus::kDegraded,
                   ResponseStatus::kFallback, ResponseStatus::kEmpty}) {
      health.request_outcomes[std::string(ResponseStatusName(s))] =
          runtime->status_counts[static_cast<size_t>(s)].load();
    }
    {
      std::lock_guard lock(runtime->fault_mu);
      for (const auto& [kind, fault] : runtime->faults) {
        health.problems.push_back("fault injected into " +
                                  std::string(SourceKindName(kind)));
      }
    }
    if (runtime->last_request_failed) {
      health.problems.push_back("every source failed on the last request");
    }
    if (runtime->io_failed) health.problems.push_back("ingest I/O failure");
    health.healthy = health.problems.empty();
    report.domains.push_back(std::move(health));
  }
  return report;
}

}  // namespace polyrec
