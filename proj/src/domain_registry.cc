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

#include "polyrec/domain_registry.hpp"


#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>

namespace polyrec {

namespace {

Error Invalid(std::string reason) {
  return MakeError(ErrorCode::kInvalidConfig, std::move(reason));
}

Status ValidateSource(const SourceSpec& source) {
  const std::string name(SourceKindName(source.kind()));
  if (!std::isfinite(source.weight)) {
    return Invalid(name + ": weight must be finite");
  }
  if (source.weight < 0.0) return Invalid(name + ": negative weight");

  if (const auto* p = std::get_if<UserCfParams>(&source.params)) {
    if (p->k_neighbors <= 0) return Invalid("user_cf: k_neighbors must be > 0");
  } else if (const auto* p = std::get_if<ContentParams>(&source.params)) {
    if (p->text_fields.empty()) return Invalid("content: text_fields is empty");
    for (const auto& field : p->text_fields) {
      if (field.empty()) return Invalid("content: empty text field name");
    }
  } else if (const auto* p = std::get_if<EmbeddingParams>(&source.params)) {
    if (p->space_id.empty()) return Invalid("embedding: space_id is empty");
    if (p->prune_m && *p->prune_m <= 0) {
      return Invalid("embedding: prune_m must be > 0 or \"full\"");
    }
  } else if (const auto* p = std::get_if<PopularityParams>(&source.params)) {
    if (p->window_ms && *p->window_ms <= 0) {
      return Invalid("popularity: window must be positive");
    }
  }
  return Status::Ok();
}

}  // namespace

Status ValidateProfile(const AlgorithmProfile& profile) {
  if (profile.sources.empty()) return Invalid("profile has no sources");
  int popularity_sources = 0;
  double total_weight = 0.0;
  for (const SourceSpec& source : profile.sources) {
    if (Status s = ValidateSource(source); !s.ok()) return s;
    if (source.kind() == SourceKind::kPopularity) ++popularity_sources;
    total_weight += source.weight;
  }
  if (popularity_sources > 1) {
    return Invalid("at most one popularity source is allowed");
  }
  if (!(total_weight > 0.0)) return Invalid("zero total weight");
  if (!std::isfinite(total_weight)) return Invalid("total weight overflows");
  return Status::Ok();
}

Status ValidateConfig(const DomainConfig& config) {
  if (config.domain_id.empty()) return Invalid("domain_id is empty");
  const bool safe_id =
      config.domain_id != "." && config.domain_id != ".." &&
      std::all_of(config.domain_id.begin(), config.domain_id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
               c == '-' || c == '.';
      });
  if (!safe_id) return Invalid("domain_id may only use [A-Za-z0-9_.-]");
  if (config.entity_types.empty()) return Invalid("entity_types is empty");
  if (config.interaction_types.empty()) {
    return Invalid("interaction_types is empty");
  }
  for (const auto& t : config.entity_types) {
    if (t.empty()) return Invalid("empty entity type");
  }
  for (const auto& t : config.interaction_types) {
    if (t.empty()) return Invalid("empty interaction type");
  }
  if (config.default_k <= 0) return Invalid("default_k must be > 0");
  if (config.latency_budget_ms <= 0) {
    return Invalid("latency_budget_ms must be > 0");
  }
  return ValidateProfile(config.profile);
}

DomainRegistry::Entry* DomainRegistry::Find(std::string_view domain_id) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(domain_id);
  return it == entries_.end() ? nullptr : it->second.get();
}

Result<uint64_t> DomainRegistry::Register(DomainConfig config,
                                          const CommitHook& on_commit) {
  if (Status s = ValidateConfig(config); !s.ok()) return s.error();
  config.version = 1;

  std::unique_lock lock(mu_);
  if (entries_.count(config.domain_id) > 0) {
    return MakeError(ErrorCode::kDuplicateDomain, config.domain_id);
  }
  if (on_commit) {
    if (Status s = on_commit(config); !s.ok()) return s.error();
  }
  auto entry = std::make_unique<Entry>();
  entry->current = std::make_shared<const DomainConfig>(config);
  entries_.emplace(config.domain_id, std::move(entry));
  return config.version;
}

Status DomainRegistry::Adopt(DomainConfig config) {
  if (Status s = ValidateConfig(config); !s.ok()) return s;
  if (config.version == 0) return Invalid("adopted config has version 0");
  std::unique_lock lock(mu_);
  if (entries_.count(config.domain_id) > 0) {
    return MakeError(ErrorCode::kDuplicateDomain, config.domain_id);
  }
  auto entry = std::make_unique<Entry>();
  std::string id = config.domain_id;
  entry->current = std::make_shared<const DomainConfig>(std::move(config));
  entries_.emplace(std::move(id), std::move(entry));
  return Status::Ok();
}

Result<uint64_t> DomainRegistry::UpdateProfile(std::string_view domain_id,
                                               AlgorithmProfile profile,
                                               const CommitHook& on_commit) {
  Entry* entry = Find(domain_id);
  if (entry == nullptr) {
    return MakeError(ErrorCode::kUnknownDomain, std::string(domain_id));
  }
  if (Status s = ValidateProfile(profile); !s.ok()) return s.error();

  std::lock_guard write_lock(entry->write_mu);
  auto next = std::make_shared<DomainConfig>(*std::atomic_load(&entry->current));
  next->profile = std::move(profile);
  next->version += 1;
  if (on_commit) {
    if (Status s = on_commit(*next); !s.ok()) return s.error();
  }
  std::shared_ptr<const DomainConfig> published = std::move(next);
  std::atomic_store(&entry->current, published);
  return published->version;
}

Result<std::shared_ptr<const DomainConfig>> DomainRegistry::Get(
    std::string_view domain_id) const {
  Entry* entry = Find(domain_id);
  if (entry == nullptr) {
    return MakeError(ErrorCode::kUnknownDomain, std::string(domain_id));
  }
  return std::atomic_load(&entry->current);
}

bool DomainRegistry::Contains(std::string_view domain_id) const {
  return Find(domain_id) != nullptr;
}

std::vector<std::string> DomainRegistry::DomainIds() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  ids.reserve(entries_.size());
  for (const auto& [id, entry] : entries_) ids.push_back(id);
  return ids;
}

}  // namespace polyrec
