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

// polyrec: server and admin/evaluation command line.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polyrec/bench.hpp"
#include "polyrec/evaluation.hpp"
#include "polyrec/http_api.hpp"
#include "polyrec/json_codec.hpp"
#include "polyrec/service.hpp"
#include "polyrec/synthetic.hpp"

namespace {

using polyrec::Json;

std::string EnvOr(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value != nullptr && *value != '\0' ? value : fallback;
}

int Fail(const std::string& message) {
  std::cerr << "polyrec: " << message << '\n';
  return 1;
}

int Fail(const polyrec::Error& error) { return Fail(error.ToString()); }

polyrec::Result<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return polyrec::MakeError(polyrec::ErrorCode::kIoFailure, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

polyrec::Result<Json> ReadJson(const std::string& path) {
  auto text = ReadFile(path);
  if (!text) return text.error();
  Json json = Json::parse(*text, nullptr, false);
  if (json.is_discarded()) {
    return polyrec::MakeError(polyrec::ErrorCode::kMalformedRequest,
                              path + " is not valid JSON");
  }
  return json;
}

struct Globals {
  std::string data_dir;
  int64_t default_budget_ms = polyrec::kDefaultLatencyBudgetMs;
};

polyrec::Result<std::unique_ptr<polyrec::RecommendService>> OpenService(
    const Globals& g) {
  polyrec::ServiceOptions options;
  options.data_dir = g.data_dir;
  options.default_budget_ms = g.default_budget_ms;
  return polyrec::RecommendService::Open(options);
}

void PrintJson(const Json& json) { std::cout << json.dump(2) << '\n'; }

template <typename Parse, typename Ingest>
int LoadFile(const std::string& path, Parse parse, Ingest ingest) {
  auto body = ReadFile(path);
  if (!body) return Fail(body.error());
  auto batch = parse(*body);
  if (!batch) return Fail(batch.error());
  auto report = ingest(batch->records);
  if (!report) return Fail(report.error());
  for (polyrec::Rejection& r : report->rejected) {
    if (r.line >= 1 && r.line <= batch->lines.size()) r.line = batch->lines[r.line - 1];
  }
  report->rejected.insert(report->rejected.end(), batch->rejected.begin(),
                          batch->rejected.end());
  Json json = polyrec::ToJson(*report);
  json["file"] = path;
  PrintJson(json);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyrec: multi-domain real-time recommender"};
  app.require_subcommand(1);
  Globals g;
  g.data_dir = EnvOr("POLYREC_DATA_DIR", "polyrec-data");
  g.default_budget_ms = std::stoll(EnvOr("POLYREC_DEFAULT_BUDGET_MS",
                                         std::to_string(polyrec::kDefaultLatencyBudgetMs)));
  app.add_option("--data-dir", g.data_dir, "Data directory (POLYREC_DATA_DIR)");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string host = "0.0.0.0";
  int port = std::stoi(EnvOr("POLYREC_PORT", "8080"));
  int threads = 32;
  serve->add_option("--host", host);
  serve->add_option("--port", port, "Listen port (POLYREC_PORT)");
  serve->add_option("--threads", threads)->check(CLI::PositiveNumber);

  // domain
  auto* domain = app.add_subcommand("domain", "Domain administration");
  domain->require_subcommand(1);
  auto* reg = domain->add_subcommand("register", "Register a domain from a JSON file");
  std::string config_file;
  reg->add_option("file", config_file)->required();
  auto* set_profile = domain->add_subcommand("set-profile", "Replace a domain's profile");
  std::string domain_id, profile_file;
  set_profile->add_option("id", domain_id)->required();
  set_profile->add_option("file", profile_file)->required();
  auto* show = domain->add_subcommand("show", "Print a domain's config");
  show->add_option("id", domain_id)->required();

  // load
  auto* load = app.add_subcommand("load", "Ingest JSONL or JSON array files");
  std::string items_file, interactions_file, embeddings_file;
  load->add_option("id", domain_id)->required();
  load->add_option("--items", items_file);
  load->add_option("--interactions", interactions_file);
  load->add_option("--embeddings", embeddings_file);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate and ingest clustered synthetic data");
  polyrec::SyntheticOptions synth_options;
  synth->add_option("id", domain_id)->required();
  synth->add_option("--users", synth_options.n_users)->required();
  synth->add_option("--items", synth_options.n_items)->required();
  synth->add_option("--clusters", synth_options.n_clusters)->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_options.seed)->required();
  synth->add_option("--items-per-user", synth_options.items_per_user);
  synth->add_option("--dim", synth_options.dim);

  // eval
  auto* eval = app.add_subcommand("eval", "Offline leave-one-out evaluation");
  polyrec::EvalOptions eval_options;
  std::string slice_context;
  eval->add_option("id", domain_id)->required();
  eval->add_option("--k", eval_options.k)->required()->check(CLI::Range(1, 1000));
  eval->add_option("--slice-context", slice_context, "Context tag to slice by");

  // bench
  auto* bench = app.add_subcommand("bench", "Latency benchmark over HTTP");
  polyrec::BenchOptions bench_options;
  std::vector<std::string> bench_domains;
  int64_t budget_ms = -1;
  std::string slow_source;
  int64_t delay_ms = 500;
  bench->add_option("id", bench_domains, "One or more domain ids")->required();
  bench->add_option("--concurrency", bench_options.concurrency)->required();
  bench->add_option("--requests", bench_options.requests)->required();
  bench->add_option("--budget-ms", budget_ms, "Per-request budget (0 = unlimited)");
  bench->add_option("--k", bench_options.k);
  bench->add_option("--seed", bench_options.seed);
  bench->add_option("--slow-source", slow_source, "Delay this source kind");
  bench->add_option("--delay-ms", delay_ms);

  // snapshot
  auto* snapshot = app.add_subcommand("snapshot", "Write a snapshot of a domain");
  snapshot->add_option("id", domain_id)->required();

  CLI11_PARSE(app, argc, argv);

  if (serve->parsed()) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    auto service = OpenService(g);
    if (!service) return Fail(service.error());
    polyrec::HttpServer server(**service, threads);
    auto bound = server.Bind(host, port);
    if (!bound) return Fail(bound.error());
    server.Start();
    std::cerr << "polyrec: serving " << g.data_dir << " on " << host << ":"
              << *bound << '\n';
    int sig = 0;
    sigwait(&signals, &sig);
    server.Stop();
    return 0;
  }

  auto service_or = OpenService(g);
  if (!service_or) return Fail(service_or.error());
  polyrec::RecommendService& service = **service_or;

  if (reg->parsed()) {
    auto json = ReadJson(config_file);
    if (!json) return Fail(json.error());
    auto config = polyrec::DomainConfigFromJson(*json, g.default_budget_ms);
    if (!config) return Fail(config.error());
    auto version = service.RegisterDomain(std::move(*config));
    if (!version) return Fail(version.error());
    PrintJson(Json{{"version", *version}});
    return 0;
  }
  if (set_profile->parsed()) {
    auto json = ReadJson(profile_file);
    if (!json) return Fail(json.error());
    auto profile = polyrec::AlgorithmProfileFromJson(*json);
    if (!profile) return Fail(profile.error());
    auto version = service.UpdateProfile(domain_id, std::move(*profile));
    if (!version) return Fail(version.error());
    PrintJson(Json{{"version", *version}});
    return 0;
  }
  if (show->parsed()) {
    auto config = service.GetDomain(domain_id);
    if (!config) return Fail(config.error());
    PrintJson(polyrec::ToJson(*config));
    return 0;
  }
  if (load->parsed()) {
    if (items_file.empty() && interactions_file.empty() && embeddings_file.empty()) {
      return Fail("load needs --items, --interactions or --embeddings");
    }
    if (!service.GetDomain(domain_id)) {
      return Fail(polyrec::MakeError(polyrec::ErrorCode::kUnknownDomain, domain_id));
    }
    if (!items_file.empty()) {
      if (int rc = LoadFile(items_file, polyrec::ParseItems, [&](const auto& r) {
            return service.IngestItems(domain_id, r);
          })) {
        return rc;
      }
    }
    if (!interactions_file.empty()) {
      if (int rc = LoadFile(interactions_file, polyrec::ParseInteractions,
                            [&](const auto& r) {
                              return service.IngestInteractions(domain_id, r);
                            })) {
        return rc;
      }
    }
    if (!embeddings_file.empty()) {
      if (int rc = LoadFile(embeddings_file, polyrec::ParseEmbeddings,
                            [&](const auto& r) {
                              return service.IngestEmbeddings(domain_id, r);
                            })) {
        return rc;
      }
    }
    return 0;
  }
  if (synth->parsed()) {
    auto config = service.GetDomain(domain_id);
    if (!config) return Fail(config.error());
    polyrec::SyntheticData data = polyrec::GenerateSynthetic(*config, synth_options);
    auto items = service.IngestItems(domain_id, data.items);
    if (!items) return Fail(items.error());
    auto interactions = service.IngestInteractions(domain_id, data.interactions);
    if (!interactions) return Fail(interactions.error());
    auto embeddings = service.IngestEmbeddings(domain_id, data.embeddings);
    if (!embeddings) return Fail(embeddings.error());
    PrintJson(Json{{"items", items->accepted},
                   {"interactions", interactions->accepted},
                   {"embeddings", embeddings->accepted},
                   {"rejected", items->rejected.size() + interactions->rejected.size() +
                                    embeddings->rejected.size()}});
    return 0;
  }
  if (eval->parsed()) {
    auto config = service.GetDomain(domain_id);
    if (!config) return Fail(config.error());
    auto state = service.State(domain_id);
    if (!state) return Fail(state.error());
    if (!slice_context.empty()) eval_options.slice_context = slice_context;
    auto report = polyrec::Evaluate(*config, polyrec::EvalDataFromState(**state),
                                    eval_options);
    if (!report) return Fail(report.error());
    std::cout << polyrec::FormatTable(*report) << '\n';
    PrintJson(polyrec::ToJson(*report));
    return 0;
  }
  if (bench->parsed()) {
    if (budget_ms >= 0) bench_options.budget_ms = budget_ms;
    for (const std::string& id : bench_domains) {
      if (!service.GetDomain(id)) {
        return Fail(polyrec::MakeError(polyrec::ErrorCode::kUnknownDomain, id));
      }
    }
    if (!slow_source.empty()) {
      auto kind = polyrec::ParseSourceKind(slow_source);
      if (!kind) return Fail("unknown source kind '" + slow_source + "'");
      for (const std::string& id : bench_domains) {
        service.InjectFault(id, *kind,
                            polyrec::Fault{std::nullopt,
                                           std::chrono::milliseconds(delay_ms)});
      }
    }
    polyrec::HttpServer server(service);
    auto bound = server.Bind("127.0.0.1", 0);
    if (!bound) return Fail(bound.error());
    server.Start();
    auto report = polyrec::RunBench(service, "127.0.0.1", *bound, bench_domains,
                                    bench_options);
    server.Stop();
    if (!report) return Fail(report.error());
    std::cout << polyrec::FormatTable(*report) << '\n';
    PrintJson(polyrec::ToJson(*report));
    return 0;
  }
  if (snapshot->parsed()) {
    auto handle = service.Snapshot(domain_id);
    if (!handle) return Fail(handle.error());
    PrintJson(Json{{"domain_id", handle->domain_id},
                   {"seq", handle->seq},
                   {"path", handle->path.string()}});
    return 0;
  }
  return 0;
}
