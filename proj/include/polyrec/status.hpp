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

#ifndef POLYREC_STATUS_HPP_
#define POLYREC_STATUS_HPP_

#include <cassert>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace polyrec {

enum class ErrorCode {
  kUnknownDomain,
  kDuplicateDomain,
  kInvalidConfig,
  kInvalidEntityType,
  kMalformedRecord,
  kDimensionMismatch,
  kNonFiniteComponent,
  kZeroVector,
  kUnknownItem,
  kZeroTotalWeight,
  kIoFailure,
  kCorruptSnapshot,
  kEmptyTestSet,
  kMalformedRequest,
};

// Stable name used in logs, HTTP error bodies and rejection reports,
// e.g. "UnknownDomain".
std::string_view ErrorCodeName(ErrorCode code);

struct Error {
  ErrorCode code;
  std::string message;

  std::string ToString() const;
};

inline Error MakeError(ErrorCode code, std::string message = {}) {
  return Error{code, std::move(message)};
}

class Status {
 public:
  Status() = default;
  Status(Error error) : error_(std::move(error)) {}  // NOLINT

  static Status Ok() { return Status(); }

  bool ok() const { return !error_.has_value(); }
  ErrorCode code() const { return error_->code; }
  const Error& error() const { return *error_; }
  std::string ToString() const { return ok() ? "OK" : error_->ToString(); }

 private:
  std::optional<Error> error_;
};

// Value-or-error return type. Accessing value() on an error is a
// programming bug and asserts.
template <typename T>
class Result {
 public:
  Result(T value) : data_(std::move(value)) {}     // NOLINT
  Result(Error error) : data_(std::move(error)) {}  // NOLINT

  bool ok() const { return std::holds_alternative<T>(data_); }
  explicit operator bool() const { return ok(); }

  ErrorCode code() const { return error().code; }
  const Error& error() const {
    assert(!ok());
    return std::get<Error>(data_);
  }
  Status status() const { return ok() ? Status() : Status(error()); }

  T& value() & {
    assert(ok());
    return std::get<T>(data_);
  }
  const T& value() const& {
    assert(ok());
    return std::get<T>(data_);
  }
  T&& value() && {
    assert(ok());
    return std::get<T>(std::move(data_));
  }

  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }
  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }

 private:
  std::variant<T, Error> data_;
};

}  // namespace polyrec

#endif  // POLYREC_STATUS_HPP_
