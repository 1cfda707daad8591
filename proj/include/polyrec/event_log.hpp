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

#ifndef POLYREC_EVENT_LOG_HPP_
#define POLYREC_EVENT_LOG_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "polyrec/status.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

using EventPayload = std::variant<Item, Interaction, EmbeddingRecord>;

// One line of the per-domain log: {"seq": n, "kind": "...", "payload": {...}}
// with kind one of item | interaction | embedding.
struct Event {
  uint64_t seq = 0;
  EventPayload payload;
};

std::string EncodeEvent(const Event& event);
Result<Event> DecodeEvent(std::string_view line);

struct LogContents {
  std::vector<Event> events;
  // Byte length of the complete, newline-terminated prefix.
  uint64_t valid_bytes = 0;
};

// Append-only JSONL file. Append returns only after the bytes are fsync'ed.
class EventLog {
 public:
  // Opens (creating if needed) for appending. A torn final line left by a
  // crash mid-append is cut off first; it was never acknowledged.
  static Result<EventLog> Open(const std::filesystem::path& path);

  // Reads every complete event. A missing file reads as empty; a malformed
  // complete line is an IoFailure.
  static Result<LogContents> Read(const std::filesystem::path& path);

  EventLog(EventLog&& other) noexcept;
  EventLog& operator=(EventLog&& other) noexcept;
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;
  ~EventLog();

  Status Append(std::span<const Event> events);
  const std::filesystem::path& path() const { return path_; }

 private:
  EventLog(std::filesystem::path path, int fd) : path_(std::move(path)), fd_(fd) {}

  std::filesystem::path path_;
  int fd_ = -1;
};

}  // namespace polyrec

#endif  // POLYREC_EVENT_LOG_HPP_
