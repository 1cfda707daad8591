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

#include "polyrec/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "polyrec/json_codec.hpp"

namespace polyrec {

namespace {

Error IoError(const std::string& what) {
  return MakeError(ErrorCode::kIoFailure, what + ": " + std::strerror(errno));
}

}  // namespace

std::string EncodeEvent(const Event& event) {
  Json json;
  json["seq"] = event.seq;
  std::visit(
      [&](const auto& payload) {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, Item>) {
          json["kind"] = "item";
        } else if constexpr (std::is_same_v<T, Interaction>) {
          json["kind"] = "interaction";
        } else {
          json["kind"] = "embedding";
        }
        json["payload"] = ToJson(payload);
      },
      event.payload);
  return json.dump();
}

Result<Event> DecodeEvent(std::string_view line) {
  Json json = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (json.is_discarded() || !json.is_object()) {
    return MakeError(ErrorCode::kMalformedRecord, "event is not a JSON object");
  }
  auto seq = json.find("seq");
  auto kind = json.find("kind");
  auto payload = json.find("payload");
  if (seq == json.end() || !seq->is_number_unsigned() || kind == json.end() ||
      !kind->is_string() || payload == json.end()) {
    return MakeError(ErrorCode::kMalformedRecord, "bad event envelope");
  }
  Event event;
  event.seq = seq->get<uint64_t>();
  const std::string name = kind->get<std::string>();
  if (name == "item") {
    auto item = ItemFromJson(*payload);
    if (!item) return item.error();
    event.payload = std::move(*item);
  } else if (name == "interaction") {
    auto interaction = InteractionFromJson(*payload);
    if (!interaction) return interaction.error();
    event.payload = std::move(*interaction);
  } else if (name == "embedding") {
    auto record = EmbeddingRecordFromJson(*payload);
    if (!record) return record.error();
    event.payload = std::move(*record);
  } else {
    return MakeError(ErrorCode::kMalformedRecord, "unknown kind " + name);
  }
  return event;
}

Result<LogContents> EventLog::Read(const std::filesystem::path& path) {
  LogContents contents;
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return contents;
  std::ifstream in(path, std::ios::binary);
  if (!in) return IoError("open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string data = buffer.str();

  size_t pos = 0;
  size_t line_no = 0;
  while (pos < data.size()) {
    size_t end = data.find('\n', pos);
    if (end == std::string::npos) break;  // torn tail
    ++line_no;
    std::string_view line(data.data() + pos, end - pos);
    auto event = DecodeEvent(line);
    if (!event) {
      return MakeError(ErrorCode::kIoFailure,
                       path.string() + " line " + std::to_string(line_no) +
                           ": " + event.error().ToString());
    }
    contents.events.push_back(std::move(*event));
    pos = end + 1;
    contents.valid_bytes = pos;
  }
  return contents;
}

Result<EventLog> EventLog::Open(const std::filesystem::path& path) {
  auto contents = Read(path);
  if (!contents) return contents.error();
  int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) return IoError("open " + path.string());
  if (::ftruncate(fd, static_cast<off_t>(contents->valid_bytes)) != 0) {
    Error error = IoError("truncate " + path.string());
    ::close(fd);
    return error;
  }
  return EventLog(path, fd);
}

EventLog::EventLog(EventLog&& other) noexcept
    : path_(std::move(other.path_)), fd_(std::exchange(other.fd_, -1)) {}

EventLog& EventLog::operator=(EventLog&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(other.path_);
    fd_ = std::exchange(other.fd_, -1);
  }
  return *this;
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

Status EventLog::Append(std::span<const Event> events) {
  if (events.empty()) return Status::Ok();
  std::string buffer;
  for (const Event& event : events) {
    buffer += EncodeEvent(event);
    buffer += '\n';
  }
  const off_t start = ::lseek(fd_, 0, SEEK_END);
  const char* data = buffer.data();
  size_t remaining = buffer.size();
  while (remaining > 0) {
    ssize_t written = ::write(fd_, data, remaining);
    if (written < 0) {
      if (errno == EINTR) continue;
      Error error = IoError("write " + path_.string());
      // Drop the partial batch so no unacknowledged event is replayed.
      if (start >= 0 && ::ftruncate(fd_, start) != 0) {
        // The torn tail is dropped on the next open instead.
      }
      return error;
    }
    data += written;
    remaining -= static_cast<size_t>(written);
  }
  if (::fsync(fd_) != 0) return IoError("fsync " + path_.string());
  return Status::Ok();
}

}  // namespace polyrec
