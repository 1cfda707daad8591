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

#include "polyrec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "polyrec/http_api.hpp"
#include "polyrec/service.hpp"

namespace polyrec {

TemporalSplitResult TemporalSplit(std::span<const Interaction> interactions) {
  // Index of the latest event per user, plus event counts.
  std::map<std::string, std::pair<size_t, size_t>> latest;  // user -> (idx, n)
  for (size_t i = 0; i < interactions.size(); ++i) {
    const Interaction& e = interactions[i];
    auto [it, inserted] = latest.try_emplace(e.user_id, i, 0);
    ++it->second.second;
    const Interaction& best = interactions[it->second.first];
    if (std::tie(e.timestamp, e.item_id) > std::tie(best.timestamp, best.item_id)) {
      it->second.first = i;
    }
  }
  std::vector<bool> held_out(interactions.size(), false);
  TemporalSplitResult split;
  for (const auto& [user, entry] : latest) {
    if (entry.second < 2) continue;
    held_out[entry.first] = true;
    split.test.push_back(interactions[entry.first]);
  }
  for (size_t i = 0; i < interactions.size(); ++i) {
    if (!held_out[i]) split.train.push_back(interactions[i]);
  }
  return split;
}

Metrics HitMetrics(std::optional<size_t> rank, size_t k) {
  if (!rank || *rank == 0 || *rank > k) return {};
  return Metrics{1.0 / static_cast<double>(k), 1.0,
                 1.0 / std::log2(static_cast<double>(*rank) + 1.0)};
}

Percentiles ComputePercentiles(std::vector<double> samples) {
  Percentiles out;
  out.n = samples.size();
  if (samples.empty()) return out;
  std::sort(samples.begin(), samples.end());
  auto at = [&](double p) {
    size_t rank = static_cast<size_t>(
        std::ceil(p / 100.0 * static_cast<double>(samples.size())));
    return samples[std::clamp<size_t>(rank, 1, samples.size()) - 1];
  };
  out.p50 = at(50);
  out.p95 = at(95);
  out.p99 = at(99);
  return out;
}

EvalData EvalDataFromState(const DomainState& state) {
  EvalData data;
  for (const auto& [id, item] : state.catalog->catalog().items()) {
    data.items.push_back(item);
  }
  data.interactions = state.interactions->events;
  for (const auto& [space_id, space] : state.spaces) {
    for (auto& [item_id, vector] : space->Items()) {
      data.embeddings.push_back({item_id, space_id, std::move(vector)});
    }
  }
  return data;
}

namespace {

struct Accumulator {
  Metrics sum;
  size_t n = 0;

  void Add(const Metrics& m) {
    sum.precision += m.precision;
    sum.recall += m.recall;
    sum.ndcg += m.ndcg;
    ++n;
  }
  MetricSummary Summary() const {
    MetricSummary s;
    s.n_users = n;
    if (n == 0) return s;
    const double d = static_cast<double>(n);
    s.mean = {sum.precision / d, sum.recall / d, sum.ndcg / d};
    return s;
  }
};

struct Variant {
  std::string name;
  AlgorithmProfile profile;
};

std::vector<Variant> Variants(const AlgorithmProfile& profile, bool per_source) {
  std::vector<Variant> out = {{"profile", profile}};
  if (!per_source) return out;
  std::map<std::string, int> seen;
  bool has_popularity = false;
  for (const SourceSpec& source : profile.sources) {
    if (source.weight == 0.0) continue;
    std::string name(SourceKindName(source.kind()));
    if (int n = seen[name]++; n > 0) name += "#" + std::to_string(n + 1);
    if (source.kind() == SourceKind::kPopularity) has_popularity = true;
    out.push_back({name, AlgorithmProfile{{SourceSpec{1.0, source.params}},
                                          FusionMode::kWeightedSum}});
  }
  if (!has_popularity) {
    out.push_back({"popularity",
                   AlgorithmProfile{{SourceSpec{1.0, PopularityParams{}}},
                                    FusionMode::kWeightedSum}});
  }
  return out;
}

Status LoadTrain(RecommendService& service, const std::string& domain_id,
                 const EvalData& data, const std::vector<Interaction>& train) {
  if (auto r = service.IngestItems(domain_id, data.items); !r) return r.error();
  if (auto r = service.IngestInteractions(domain_id, train); !r) return r.error();
  if (auto r = service.IngestEmbeddings(domain_id, data.embeddings); !r) {
    return r.error();
  }
  return Status::Ok();
}

}  // namespace

Result<EvalReport> Evaluate(const DomainConfig& config, const EvalData& data,
                            const EvalOptions& options) {
  if (options.k < 1 || options.k > static_cast<size_t>(kMaxK)) {
    return MakeError(ErrorCode::kMalformedRequest, "k out of range");
  }
  TemporalSplitResult split = TemporalSplit(data.interactions);
  if (split.test.empty()) {
    return MakeError(ErrorCode::kEmptyTestSet,
                     "no user has two or more interactions");
  }

  auto service_or = RecommendService::Open(ServiceOptions{});
  if (!service_or) return service_or.error();
  RecommendService& service = **service_or;
  if (auto v = service.RegisterDomain(config); !v) return v.error();
  if (Status s = LoadTrain(service, config.domain_id, data, split.train); !s.ok()) {
    return s.error();
  }
  HttpServer server(service, 4);
  auto port = server.Bind("127.0.0.1", 0);
  if (!port) return port.error();
  server.Start();
  RecommendClient client("127.0.0.1", *port);

  EvalReport report;
  report.domain_id = config.domain_id;
  report.k = options.k;
  report.n_users = split.test.size();

  for (const Variant& variant : Variants(config.profile, options.per_source)) {
    if (auto v = service.UpdateProfile(config.domain_id, variant.profile); !v) {
      return v.error();
    }
    ProfileReport profile_report;
    profile_report.name = variant.name;
    profile_report.profile = variant.profile;
    Accumulator overall;
    std::map<std::pair<std::string, std::string>, Accumulator> slices;
    std::map<std::string, std::vector<double>> source_latency;
    std::vector<double> end_to_end;

    std::set<std::string> tags;
    if (options.slice_context) {
      tags.insert(*options.slice_context);
    } else {
      for (const Interaction& e : split.test) {
        for (const auto& [tag, value] : e.context) tags.insert(tag);
      }
    }

    for (const Interaction& held : split.test) {
      RecommendRequest request;
      request.domain_id = config.domain_id;
      request.mode = ForUser{held.user_id};
      request.k = static_cast<int64_t>(options.k);
      request.context = held.context;
      request.latency_budget_ms = 0;
      const auto start = Clock::now();
      auto response = client.Recommend(request);
      end_to_end.push_back(MillisSince(start));
      if (!response) return response.error();
      for (const SourceReport& s : response->sources_used) {
        source_latency[std::string(SourceKindName(s.kind))].push_back(s.latency_ms);
      }
      std::optional<size_t> rank;
      const auto& entries = response->items.entries;
      for (size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].item_id == held.item_id) {
          rank = i + 1;
          break;
        }
      }
      const Metrics m = HitMetrics(rank, options.k);
      overall.Add(m);
      for (const std::string& tag : tags) {
        auto it = held.context.find(tag);
        slices[{tag, it == held.context.end() ? kNoContextValue : it->second}].Add(m);
      }
    }

    profile_report.overall = overall.Summary();
    for (const auto& [key, acc] : slices) {
      profile_report.slices.push_back({key.first, key.second, acc.Summary()});
    }
    for (auto& [kind, samples] : source_latency) {
      profile_report.source_latency_ms[kind] = ComputePercentiles(std::move(samples));
    }
    profile_report.end_to_end_ms = ComputePercentiles(std::move(end_to_end));
    report.profiles.push_back(std::move(profile_report));
  }
  server.Stop();
  return report;
}

namespace {

Json ToJson(const MetricSummary& s) {
  return Json{{"precision", s.mean.precision},
              {"recall", s.mean.recall},
              {"ndcg", s.mean.ndcg},
              {"n_users", s.n_users}};
}

Json ToJson(const Percentiles& p) {
  return Json{{"p50", p.p50}, {"p95", p.p95}, {"p99", p.p99}, {"n", p.n}};
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

Json ToJson(const EvalReport& report) {
  Json profiles = Json::array();
  for (const ProfileReport& p : report.profiles) {
    Json slices = Json::array();
    for (const SliceReport& s : p.slices) {
      Json entry = ToJson(s.metrics);
      entry["tag"] = s.tag;
      entry["value"] = s.value;
      slices.push_back(std::move(entry));
    }
    Json latency = Json::object();
    for (const auto& [kind, pct] : p.source_latency_ms) latency[kind] = ToJson(pct);
    profiles.push_back({{"name", p.name},
                        {"profile", polyrec::ToJson(p.profile)},
                        {"overall", ToJson(p.overall)},
                        {"slices", std::move(slices)},
                        {"source_latency_ms", std::move(latency)},
                        {"end_to_end_ms", ToJson(p.end_to_end_ms)}});
  }
  return Json{{"domain_id", report.domain_id},
              {"k", report.k},
              {"n_users", report.n_users},
              {"profiles", std::move(profiles)}};
}

std::string FormatTable(const EvalReport& report) {
  const std::string k = std::to_string(report.k);
  std::vector<std::vector<std::string>> rows = {
      {"profile", "slice", "users", "precision@" + k, "recall@" + k, "ndcg@" + k,
       "p50_ms", "p95_ms", "p99_ms"}};
  auto metric_row = [&](const std::string& name, const std::string& slice,
                        const MetricSummary& m) {
    return std::vector<std::string>{name,
                                    slice,
                                    std::to_string(m.n_users),
                                    Fixed(m.mean.precision, 4),
                                    Fixed(m.mean.recall, 4),
                                    Fixed(m.mean.ndcg, 4)};
  };
  for (const ProfileReport& p : report.profiles) {
    auto row = metric_row(p.name, "all", p.overall);
    row.push_back(Fixed(p.end_to_end_ms.p50, 2));
    row.push_back(Fixed(p.end_to_end_ms.p95, 2));
    row.push_back(Fixed(p.end_to_end_ms.p99, 2));
    rows.push_back(std::move(row));
    for (const SliceReport& s : p.slices) {
      auto slice_row = metric_row("", s.tag + "=" + s.value, s.metrics);
      slice_row.insert(slice_row.end(), {"", "", ""});
      rows.push_back(std::move(slice_row));
    }
    for (const auto& [kind, pct] : p.source_latency_ms) {
      rows.push_back({"", "source:" + kind, std::to_string(pct.n), "", "", "",
                      Fixed(pct.p50, 2), Fixed(pct.p95, 2), Fixed(pct.p99, 2)});
    }
  }
  std::vector<size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    std::string line;
    for (size_t c = 0; c < row.size(); ++c) {
      std::string cell = row[c];
      const bool left = c < 2;
      const std::string pad(width[c] - cell.size(), ' ');
      line += left ? cell + pad : pad + cell;
      if (c + 1 < row.size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

}  // namespace polyrec
