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

#include "polyrec/status.hpp"

namespace polyrec {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDomain:
      return "UnknownDomain";
    case ErrorCode::kDuplicateDomain:
      return "DuplicateDomain";
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
    case ErrorCode::kInvalidEntityType:
      return "InvalidEntityType";
    case ErrorCode::kMalformedRecord:
      return "MalformedRecord";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kNonFiniteComponent:
      return "NonFiniteComponent";
    case ErrorCode::kZeroVector:
      return "ZeroVector";
    case ErrorCode::kUnknownItem:
      return "UnknownItem";
    case ErrorCode::kZeroTotalWeight:
      return "ZeroTotalWeight";
    case ErrorCode::kIoFailure:
      return "IoFailure";
    case ErrorCode::kCorruptSnapshot:
      return "CorruptSnapshot";
    case ErrorCode::kEmptyTestSet:
      return "EmptyTestSet";
    case ErrorCode::kMalformedRequest:
      return "MalformedRequest";
  }
  return "Unknown";
}

std::string Error::ToString() const {
  std::string out(ErrorCodeName(code));
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

}  // namespace polyrec
