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

#ifndef POLYREC_DOMAIN_REGISTRY_HPP_
#define POLYREC_DOMAIN_REGISTRY_HPP_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "polyrec/status.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

// Pure check of every DomainConfig / AlgorithmProfile invariant except
// versioning. Embedding space existence is checked at request time.
Status ValidateConfig(const DomainConfig& config);
Status ValidateProfile(const AlgorithmProfile& profile);

// Holds the per-domain configuration. Readers get immutable snapshots that
// stay valid for as long as they are held; writers are serialized per
// domain and publish with a single pointer swap, so a reader sees either
// the old or the new config and never a blend.
class DomainRegistry {
 public:
  // Invoked with the next config while the per-domain write lock is held,
  // before it becomes visible. A failing hook aborts the write.
  using CommitHook = std::function<Status(const DomainConfig&)>;

  DomainRegistry() = default;
  DomainRegistry(const DomainRegistry&) = delete;
  DomainRegistry& operator=(const DomainRegistry&) = delete;

  // The incoming version is ignored; registration always yields version 1.
  Result<uint64_t> Register(DomainConfig config,
                            const CommitHook& on_commit = {});

  // Installs a config exactly as given, version included. Used when
  // reloading persisted domains.
  Status Adopt(DomainConfig config);

  // Full-profile replacement.
  Result<uint64_t> UpdateProfile(std::string_view domain_id,
                                 AlgorithmProfile profile,
                                 const CommitHook& on_commit = {});

  Result<std::shared_ptr<const DomainConfig>> Get(
      std::string_view domain_id) const;

  bool Contains(std::string_view domain_id) const;
  std::vector<std::string> DomainIds() const;

 private:
  struct Entry {
    std::mutex write_mu;
    std::shared_ptr<const DomainConfig> current;  // atomic_load / atomic_store
  };

  Entry* Find(std::string_view domain_id) const;

  mutable std::shared_mutex mu_;
  std::map<std::string, std::unique_ptr<Entry>, std::less<>> entries_;
};

}  // namespace polyrec

#endif  // POLYREC_DOMAIN_REGISTRY_HPP_
