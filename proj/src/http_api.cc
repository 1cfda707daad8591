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

#include "polyrec/http_api.hpp"

#include <algorithm>
#include <utility>

#define CPPHTTPLIB_TCP_NODELAY true
#include "httplib.h"

namespace polyrec {

namespace {

constexpr const char* kJsonType = "application/json";

Error Malformed(std::string message) {
  return MakeError(ErrorCode::kMalformedRequest, std::move(message));
}

void Reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJsonType);
}

void ReplyError(httplib::Response& res, const Error& error) {
  Reply(res, HttpStatusFor(error.code),
        Json{{"error", std::string(ErrorCodeName(error.code))},
             {"message", error.message}});
}

Result<Json> ParseBody(const httplib::Request& req) {
  Json json = Json::parse(req.body, nullptr, false);
  if (json.is_discarded()) return Malformed("request body is not valid JSON");
  return json;
}

Result<std::set<std::string>> StringSet(const Json& json, const char* key) {
  if (!json.is_array()) return Malformed(std::string(key) + " must be an array");
  std::set<std::string> out;
  for (const Json& v : json) {
    if (!v.is_string()) {
      return Malformed(std::string(key) + " entries must be strings");
    }
    out.insert(v.get<std::string>());
  }
  return out;
}

// Store rejections count lines within the accepted-by-parser records; map
// them back to positions in the request body.
IngestReport RemapLines(IngestReport report, const std::vector<size_t>& lines,
                        std::vector<Rejection> parse_rejections) {
  for (Rejection& r : report.rejected) {
    if (r.line >= 1 && r.line <= lines.size()) r.line = lines[r.line - 1];
  }
  report.rejected.insert(report.rejected.end(), parse_rejections.begin(),
                         parse_rejections.end());
  std::stable_sort(report.rejected.begin(), report.rejected.end(),
                   [](const Rejection& a, const Rejection& b) {
                     return a.line < b.line;
                   });
  return report;
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDomain:
    case ErrorCode::kUnknownItem:
      return 404;
    case ErrorCode::kDuplicateDomain:
      return 409;
    case ErrorCode::kIoFailure:
    case ErrorCode::kCorruptSnapshot:
      return 500;
    default:
      return 400;
  }
}

Result<RecommendRequest> RecommendRequestFromJson(std::string_view domain_id,
                                                  const Json& json) {
  if (!json.is_object()) return Malformed("request must be a JSON object");
  static const std::set<std::string> kKeys = {
      "mode",    "user_id",       "item_id",
      "k",       "context",       "allowed_entity_types",
      "exclude_items", "latency_budget_ms"};
  for (const auto& [key, value] : json.items()) {
    if (kKeys.count(key) == 0) return Malformed("unknown field '" + key + "'");
  }
  RecommendRequest request;
  request.domain_id = std::string(domain_id);
  auto mode = json.find("mode");
  if (mode == json.end() || !mode->is_string()) {
    return Malformed("mode must be \"for_user\" or \"similar_to\"");
  }
  auto id_field = [&](const char* key) -> Result<std::string> {
    auto it = json.find(key);
    if (it == json.end() || !it->is_string() || it->get<std::string>().empty()) {
      return Malformed(std::string(key) + " must be a nonempty string");
    }
    return it->get<std::string>();
  };
  if (*mode == "for_user") {
    if (json.contains("item_id")) return Malformed("for_user takes no item_id");
    auto user = id_field("user_id");
    if (!user) return user.error();
    request.mode = ForUser{*user};
  } else if (*mode == "similar_to") {
    if (json.contains("user_id")) return Malformed("similar_to takes no user_id");
    auto item = id_field("item_id");
    if (!item) return item.error();
    request.mode = SimilarTo{*item};
  } else {
    return Malformed("mode must be \"for_user\" or \"similar_to\"");
  }
  if (auto it = json.find("k"); it != json.end()) {
    if (!it->is_number_integer()) return Malformed("k must be an integer");
    request.k = it->get<int64_t>();
    if (*request.k < 1 || *request.k > kMaxK) {
      return Malformed("k must be in [1, " + std::to_string(kMaxK) + "]");
    }
  }
  if (auto it = json.find("context"); it != json.end()) {
    if (!it->is_object()) return Malformed("context must be an object");
    for (const auto& [tag, value] : it->items()) {
      if (!value.is_string()) return Malformed("context values must be strings");
      request.context[tag] = value.get<std::string>();
    }
  }
  if (auto it = json.find("allowed_entity_types");
      it != json.end() && !it->is_null()) {
    auto types = StringSet(*it, "allowed_entity_types");
    if (!types) return types.error();
    request.allowed_entity_types = std::move(*types);
  }
  if (auto it = json.find("exclude_items"); it != json.end() && !it->is_null()) {
    auto items = StringSet(*it, "exclude_items");
    if (!items) return items.error();
    request.exclude_items.insert(items->begin(), items->end());
  }
  if (auto it = json.find("latency_budget_ms"); it != json.end()) {
    if (!it->is_number_integer() || it->get<int64_t>() < 0) {
      return Malformed("latency_budget_ms must be a non-negative integer");
    }
    request.latency_budget_ms = it->get<int64_t>();
  }
  return request;
}

Json ToJson(const RecommendRequest& request) {
  Json json = Json::object();
  if (const auto* u = std::get_if<ForUser>(&request.mode)) {
    json["mode"] = "for_user";
    json["user_id"] = u->user_id;
  } else {
    json["mode"] = "similar_to";
    json["item_id"] = std::get<SimilarTo>(request.mode).item_id;
  }
  if (request.k) json["k"] = *request.k;
  if (!request.context.empty()) json["context"] = request.context;
  if (request.allowed_entity_types) {
    json["allowed_entity_types"] = *request.allowed_entity_types;
  }
  if (!request.exclude_items.empty()) {
    json["exclude_items"] = std::set<std::string>(request.exclude_items.begin(),
                                                  request.exclude_items.end());
  }
  if (request.latency_budget_ms) {
    json["latency_budget_ms"] = *request.latency_budget_ms;
  }
  return json;
}

Json ToJson(const RecommendResponse& response) {
  Json sources = Json::array();
  for (const SourceReport& s : response.sources_used) {
    Json entry = {{"kind", std::string(SourceKindName(s.kind))},
                  {"latency_ms", s.latency_ms},
                  {"outcome", std::string(SourceOutcomeName(s.outcome))}};
    if (!s.detail.empty()) entry["detail"] = s.detail;
    sources.push_back(std::move(entry));
  }
  return Json{{"items", ToJson(response.items)},
              {"status", std::string(ResponseStatusName(response.status))},
              {"sources_used", std::move(sources)},
              {"profile_version", response.profile_version},
              {"total_latency_ms", response.total_latency_ms},
              {"state_seq", response.state_seq}};
}

Result<RecommendResponse> RecommendResponseFromJson(const Json& json) {
  try {
    RecommendResponse response;
    for (const Json& e : json.at("items")) {
      response.items.entries.push_back(
          {e.at("item_id").get<std::string>(), e.at("score").get<double>()});
    }
    auto status = ParseResponseStatus(json.at("status").get<std::string>());
    if (!status) return Malformed("unknown status");
    response.status = *status;
    for (const Json& s : json.at("sources_used")) {
      auto kind = ParseSourceKind(s.at("kind").get<std::string>());
      auto outcome = ParseSourceOutcome(s.at("outcome").get<std::string>());
      if (!kind || !outcome) return Malformed("unknown source kind or outcome");
      response.sources_used.push_back(
          {*kind, s.at("latency_ms").get<double>(), *outcome,
           s.value("detail", std::string())});
    }
    response.profile_version = json.at("profile_version").get<uint64_t>();
    response.total_latency_ms = json.at("total_latency_ms").get<double>();
    response.state_seq = json.value("state_seq", uint64_t{0});
    return response;
  } catch (const Json::exception& e) {
    return Malformed(std::string("bad response: ") + e.what());
  }
}

Json ToJson(const HealthReport& report) {
  Json domains = Json::array();
  for (const DomainHealth& d : report.domains) {
    domains.push_back({{"domain_id", d.domain_id},
                       {"healthy", d.healthy},
                       {"problems", d.problems},
                       {"items", d.items},
                       {"interactions", d.interactions},
                       {"dangling_interactions", d.dangling_interactions},
                       {"embedding_spaces", d.embedding_spaces},
                       {"last_ingest_ms", d.last_ingest_ms},
                       {"request_outcomes", d.request_outcomes},
                       {"profile_version", d.profile_version}});
  }
  return Json{{"domains", std::move(domains)}};
}

struct HttpServer::Impl {
  RecommendService& service;
  httplib::Server server;

  explicit Impl(RecommendService& s) : service(s) {}

  template <typename Parse, typename Ingest>
  void HandleIngest(const httplib::Request& req, httplib::Response& res,
                    Parse parse, Ingest ingest) {
    const std::string id = req.path_params.at("id");
    if (!service.GetDomain(id)) {
      ReplyError(res, MakeError(ErrorCode::kUnknownDomain, id));
      return;
    }
    auto batch = parse(req.body);
    if (!batch) {
      ReplyError(res, batch.error());
      return;
    }
    auto report = ingest(id, batch->records);
    if (!report) {
      ReplyError(res, report.error());
      return;
    }
    Reply(res, 200,
          ToJson(RemapLines(std::move(*report), batch->lines,
                            std::move(batch->rejected))));
  }

  void Routes() {
    server.Post("/domains", [this](const httplib::Request& req,
                                   httplib::Response& res) {
      auto json = ParseBody(req);
      if (!json) return ReplyError(res, json.error());
      auto config =
          DomainConfigFromJson(*json, service.options().default_budget_ms);
      if (!config) return ReplyError(res, config.error());
      auto version = service.RegisterDomain(std::move(*config));
      if (!version) return ReplyError(res, version.error());
      Reply(res, 201, Json{{"version", *version}});
    });
    server.Put("/domains/:id/profile", [this](const httplib::Request& req,
                                              httplib::Response& res) {
      auto json = ParseBody(req);
      if (!json) return ReplyError(res, json.error());
      auto profile = AlgorithmProfileFromJson(*json);
      if (!profile) return ReplyError(res, profile.error());
      auto version =
          service.UpdateProfile(req.path_params.at("id"), std::move(*profile));
      if (!version) return ReplyError(res, version.error());
      Reply(res, 200, Json{{"version", *version}});
    });
    server.Get("/domains/:id", [this](const httplib::Request& req,
                                      httplib::Response& res) {
      auto config = service.GetDomain(req.path_params.at("id"));
      if (!config) return ReplyError(res, config.error());
      Reply(res, 200, ToJson(*config));
    });
    server.Post("/domains/:id/items", [this](const httplib::Request& req,
                                             httplib::Response& res) {
      HandleIngest(req, res, ParseItems,
                   [this](const std::string& id, const std::vector<Item>& r) {
                     return service.IngestItems(id, r);
                   });
    });
    server.Post("/domains/:id/interactions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
      HandleIngest(
          req, res, ParseInteractions,
          [this](const std::string& id, const std::vector<Interaction>& r) {
            return service.IngestInteractions(id, r);
          });
    });
    server.Post("/domains/:id/embeddings", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
      HandleIngest(
          req, res, ParseEmbeddings,
          [this](const std::string& id, const std::vector<EmbeddingRecord>& r) {
            return service.IngestEmbeddings(id, r);
          });
    });
    server.Post("/domains/:id/recommendations", [this](
                                                    const httplib::Request& req,
                                                    httplib::Response& res) {
      const std::string id = req.path_params.at("id");
      if (!service.GetDomain(id)) {
        return ReplyError(res, MakeError(ErrorCode::kUnknownDomain, id));
      }
      auto json = ParseBody(req);
      if (!json) return ReplyError(res, json.error());
      auto request = RecommendRequestFromJson(id, *json);
      if (!request) return ReplyError(res, request.error());
      auto response = service.Recommend(*request);
      if (!response) return ReplyError(res, response.error());
      Reply(res, 200, ToJson(*response));
    });
    server.Post("/domains/:id/snapshot", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      auto handle = service.Snapshot(req.path_params.at("id"));
      if (!handle) return ReplyError(res, handle.error());
      Reply(res, 200, Json{{"seq", handle->seq}, {"path", handle->path.string()}});
    });
    server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      Reply(res, 200, ToJson(service.Health()));
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        Reply(res, res.status,
              Json{{"error", "NotFound"}, {"message", "no such route"}});
      }
    });
  }
};

HttpServer::HttpServer(RecommendService& service, int threads)
    : impl_(std::make_unique<Impl>(service)) {
  impl_->server.new_task_queue = [threads] {
    return new httplib::ThreadPool(static_cast<size_t>(threads));
  };
  impl_->Routes();
}

HttpServer::~HttpServer() { Stop(); }

Result<int> HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    port_ = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) {
    return MakeError(ErrorCode::kIoFailure,
                     "cannot bind " + host + ":" + std::to_string(port));
  }
  return port_;
}

void HttpServer::Start() {
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::Run() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

struct RecommendClient::Impl {
  httplib::Client client;
  Impl(const std::string& host, int port) : client(host, port) {
    client.set_keep_alive(true);
    client.set_read_timeout(60, 0);
  }
};

RecommendClient::RecommendClient(const std::string& host, int port)
    : impl_(std::make_unique<Impl>(host, port)) {}

RecommendClient::~RecommendClient() = default;

Result<RecommendResponse> RecommendClient::Recommend(
    const RecommendRequest& request) {
  const std::string path = "/domains/" + request.domain_id + "/recommendations";
  auto res = impl_->client.Post(path, ToJson(request).dump(), kJsonType);
  if (!res) {
    return MakeError(ErrorCode::kIoFailure,
                     "HTTP request failed: " + httplib::to_string(res.error()));
  }
  Json json = Json::parse(res->body, nullptr, false);
  if (json.is_discarded()) return Malformed("response is not JSON");
  if (res->status != 200) {
    const std::string name = json.value("error", std::string());
    ErrorCode code = ErrorCode::kMalformedRequest;
    if (name == "UnknownDomain") code = ErrorCode::kUnknownDomain;
    if (res->status >= 500) code = ErrorCode::kIoFailure;
    return MakeError(code, json.value("message", name));
  }
  return RecommendResponseFromJson(json);
}

}  // namespace polyrec
