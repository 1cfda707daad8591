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

#ifndef POLYREC_BENCH_HPP_
#define POLYREC_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyrec/evaluation.hpp"
#include "polyrec/json_codec.hpp"
#include "polyrec/service.hpp"

namespace polyrec {

struct BenchOptions {
  size_t concurrency = 8;
  size_t requests = 1000;
  // Per-request budget; the domain budget applies when unset.
  std::optional<int64_t> budget_ms;
  size_t k = 10;
  uint64_t seed = 1;
  // Untimed requests issued first (per domain) to warm lazy indexes.
  size_t warmup = 16;
};

struct BenchReport {
  size_t requests = 0;
  size_t errors = 0;
  Percentiles end_to_end_ms;  // measured by the client
  Percentiles server_ms;      // total_latency_ms reported by the service
  double timeout_rate = 0.0;  // share of responses with any source timeout
  double fallback_rate = 0.0;
  std::map<std::string, double> source_timeout_rate;
  std::map<std::string, size_t> status_counts;
};

// Drives for_user requests over HTTP against `host:port`, cycling through
// `domain_ids` and drawing users that have interactions from the
// service's current state.
Result<BenchReport> RunBench(const RecommendService& service,
                             const std::string& host, int port,
                             const std::vector<std::string>& domain_ids,
                             const BenchOptions& options);

Json ToJson(const BenchReport& report);
std::string FormatTable(const BenchReport& report);

}  // namespace polyrec

#endif  // POLYREC_BENCH_HPP_
