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

#ifndef POLYREC_EVALUATION_HPP_
#define POLYREC_EVALUATION_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyrec/domain_store.hpp"
#include "polyrec/json_codec.hpp"
#include "polyrec/status.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

struct TemporalSplitResult {
  std::vector<Interaction> train;
  std::vector<Interaction> test;  // at most one per user
};

// Leave-one-out: per user with >= 2 interactions the max (timestamp,
// item_id) event is held out. Input order is kept in `train`; `test` is
// ordered by user_id.
TemporalSplitResult TemporalSplit(std::span<const Interaction> interactions);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double ndcg = 0.0;
};

// Per-user metrics for a single held-out item found at 1-based `rank`
// (nullopt = not in the top k).
Metrics HitMetrics(std::optional<size_t> rank, size_t k);

struct MetricSummary {
  Metrics mean;
  size_t n_users = 0;
};

struct Percentiles {
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
  size_t n = 0;
};

// Nearest-rank percentiles; all zero for an empty sample.
Percentiles ComputePercentiles(std::vector<double> samples);

struct SliceReport {
  std::string tag;
  std::string value;  // kNoContextValue when the held-out event lacks the tag
  MetricSummary metrics;
};

inline constexpr const char* kNoContextValue = "<none>";

struct ProfileReport {
  std::string name;
  AlgorithmProfile profile;
  MetricSummary overall;
  std::vector<SliceReport> slices;  // ordered by (tag, value)
  std::map<std::string, Percentiles> source_latency_ms;
  Percentiles end_to_end_ms;
};

struct EvalReport {
  std::string domain_id;
  size_t k = 0;
  size_t n_users = 0;
  std::vector<ProfileReport> profiles;
};

struct EvalData {
  std::vector<Item> items;
  std::vector<Interaction> interactions;
  std::vector<EmbeddingRecord> embeddings;
};

EvalData EvalDataFromState(const DomainState& state);

struct EvalOptions {
  size_t k = 10;
  // Slice by this tag only; every tag seen in held-out events when unset.
  std::optional<std::string> slice_context;
  // Also evaluate each configured source alone (weight 1) and an
  // all-time popularity baseline.
  bool per_source = true;
};

// Splits `data`, loads the train part into a private in-memory service and
// queries it over loopback HTTP for every test user, once per profile
// variant. Requests run without a deadline so results are deterministic.
Result<EvalReport> Evaluate(const DomainConfig& config, const EvalData& data,
                            const EvalOptions& options);

Json ToJson(const EvalReport& report);
std::string FormatTable(const EvalReport& report);

}  // namespace polyrec

#endif  // POLYREC_EVALUATION_HPP_
