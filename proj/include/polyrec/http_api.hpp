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

#ifndef POLYREC_HTTP_API_HPP_
#define POLYREC_HTTP_API_HPP_

#include <memory>
#include <string>
#include <string_view>
#include <thread>

#include "polyrec/json_codec.hpp"
#include "polyrec/service.hpp"
#include "polyrec/status.hpp"

namespace polyrec {

int HttpStatusFor(ErrorCode code);

// {"mode":"for_user","user_id":...} or {"mode":"similar_to","item_id":...},
// plus optional k, context, allowed_entity_types, exclude_items and
// latency_budget_ms.
Result<RecommendRequest> RecommendRequestFromJson(std::string_view domain_id,
                                                  const Json& json);
Json ToJson(const RecommendRequest& request);  // domain_id is not included
Json ToJson(const RecommendResponse& response);
Result<RecommendResponse> RecommendResponseFromJson(const Json& json);
Json ToJson(const HealthReport& report);

// HTTP front end over a RecommendService. The service must outlive it.
class HttpServer {
 public:
  explicit HttpServer(RecommendService& service, int threads = 32);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port.
  Result<int> Bind(const std::string& host, int port);
  // Serves on a background thread until Stop().
  void Start();
  // Serves on the calling thread until Stop() is called from elsewhere.
  void Run();
  void Stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = -1;
};

// Blocking JSON client for the recommendation endpoint. One instance per
// thread.
class RecommendClient {
 public:
  RecommendClient(const std::string& host, int port);
  ~RecommendClient();

  RecommendClient(const RecommendClient&) = delete;
  RecommendClient& operator=(const RecommendClient&) = delete;

  Result<RecommendResponse> Recommend(const RecommendRequest& request);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace polyrec

#endif  // POLYREC_HTTP_API_HPP_
