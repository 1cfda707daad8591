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

#include "polyrec/bench.hpp"

#include <atomic>
#include <cstdio>
#include <random>
#include <sstream>
#include <thread>

#include "polyrec/http_api.hpp"

namespace polyrec {

Result<BenchReport> RunBench(const RecommendService& service,
                             const std::string& host, int port,
                             const std::vector<std::string>& domain_ids,
                             const BenchOptions& options) {
  BenchReport report;
  if (domain_ids.empty()) {
    return MakeError(ErrorCode::kMalformedRequest, "no domain to benchmark");
  }
  std::vector<std::vector<std::string>> users(domain_ids.size());
  for (size_t d = 0; d < domain_ids.size(); ++d) {
    auto state = service.State(domain_ids[d]);
    if (!state) return state.error();
    for (const auto& [user, items] : (*state)->interactions->matrix.items_by_user()) {
      users[d].push_back(user);
    }
    if (users[d].empty()) users[d].push_back("bench-cold-user");
  }
  if (options.requests == 0) return report;

  std::mt19937_64 rng(options.seed);
  std::vector<RecommendRequest> plan;
  auto make_request = [&](size_t d) {
    RecommendRequest r;
    r.domain_id = domain_ids[d];
    r.mode = ForUser{users[d][std::uniform_int_distribution<size_t>(
        0, users[d].size() - 1)(rng)]};
    r.k = static_cast<int64_t>(options.k);
    r.latency_budget_ms = options.budget_ms;
    return r;
  };
  for (size_t i = 0; i < options.requests; ++i) {
    plan.push_back(make_request(i % domain_ids.size()));
  }

  {
    RecommendClient client(host, port);
    for (size_t d = 0; d < domain_ids.size(); ++d) {
      for (size_t i = 0; i < options.warmup; ++i) {
        auto r = client.Recommend(make_request(d));
        if (!r && r.code() == ErrorCode::kUnknownDomain) return r.error();
      }
    }
  }

  std::vector<double> client_ms(plan.size(), -1.0);
  std::vector<std::optional<RecommendResponse>> responses(plan.size());
  std::atomic<size_t> next{0};
  std::vector<std::thread> workers;
  const size_t concurrency = std::max<size_t>(options.concurrency, 1);
  for (size_t w = 0; w < concurrency; ++w) {
    workers.emplace_back([&] {
      RecommendClient client(host, port);
      for (size_t i = next++; i < plan.size(); i = next++) {
        const auto start = Clock::now();
        auto r = client.Recommend(plan[i]);
        client_ms[i] = MillisSince(start);
        if (r) responses[i] = std::move(*r);
      }
    });
  }
  for (auto& t : workers) t.join();

  std::vector<double> end_to_end, server;
  size_t with_timeout = 0, fallbacks = 0;
  std::map<std::string, size_t> source_timeouts;
  for (size_t i = 0; i < plan.size(); ++i) {
    ++report.requests;
    if (!responses[i]) {
      ++report.errors;
      continue;
    }
    const RecommendResponse& r = *responses[i];
    end_to_end.push_back(client_ms[i]);
    server.push_back(r.total_latency_ms);
    ++report.status_counts[std::string(ResponseStatusName(r.status))];
    if (r.status == ResponseStatus::kFallback) ++fallbacks;
    bool any_timeout = false;
    for (const SourceReport& s : r.sources_used) {
      const std::string kind(SourceKindName(s.kind));
      source_timeouts.try_emplace(kind, 0);
      if (s.outcome == SourceOutcome::kTimeout) {
        any_timeout = true;
        ++source_timeouts[kind];
      }
    }
    if (any_timeout) ++with_timeout;
  }
  const size_t answered = end_to_end.size();
  report.end_to_end_ms = ComputePercentiles(std::move(end_to_end));
  report.server_ms = ComputePercentiles(std::move(server));
  if (answered > 0) {
    const double n = static_cast<double>(answered);
    report.timeout_rate = static_cast<double>(with_timeout) / n;
    report.fallback_rate = static_cast<double>(fallbacks) / n;
    for (const auto& [kind, count] : source_timeouts) {
      report.source_timeout_rate[kind] = static_cast<double>(count) / n;
    }
  }
  return report;
}

Json ToJson(const BenchReport& report) {
  auto pct = [](const Percentiles& p) {
    return Json{{"p50", p.p50}, {"p95", p.p95}, {"p99", p.p99}, {"n", p.n}};
  };
  return Json{{"requests", report.requests},
              {"errors", report.errors},
              {"end_to_end_ms", pct(report.end_to_end_ms)},
              {"server_ms", pct(report.server_ms)},
              {"timeout_rate", report.timeout_rate},
              {"fallback_rate", report.fallback_rate},
              {"source_timeout_rate", report.source_timeout_rate},
              {"status_counts", report.status_counts}};
}

std::string FormatTable(const BenchReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "requests %zu  errors %zu\n", report.requests,
                report.errors);
  out << line;
  auto row = [&](const char* name, const Percentiles& p) {
    std::snprintf(line, sizeof(line), "%-12s p50 %8.2f  p95 %8.2f  p99 %8.2f ms\n",
                  name, p.p50, p.p95, p.p99);
    out << line;
  };
  row("end_to_end", report.end_to_end_ms);
  row("server", report.server_ms);
  std::snprintf(line, sizeof(line), "timeout_rate %.4f  fallback_rate %.4f\n",
                report.timeout_rate, report.fallback_rate);
  out << line;
  for (const auto& [kind, rate] : report.source_timeout_rate) {
    std::snprintf(line, sizeof(line), "  %-12s timeout %.4f\n", kind.c_str(), rate);
    out << line;
  }
  for (const auto& [status, count] : report.status_counts) {
    std::snprintf(line, sizeof(line), "  status %-10s %zu\n", status.c_str(), count);
    out << line;
  }
  return out.str();
}

}  // namespace polyrec
