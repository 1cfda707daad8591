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

#include "polyrec/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

namespace polyrec {

std::string_view SourceKindName(SourceKind kind) {
  switch (kind) {
    case SourceKind::kUserCf:
      return "user_cf";
    case SourceKind::kItemCf:
      return "item_cf";
    case SourceKind::kContent:
      return "content";
    case SourceKind::kEmbedding:
      return "embedding";
    case SourceKind::kPopularity:
      return "popularity";
  }
  return "unknown";
}

std::optional<SourceKind> ParseSourceKind(std::string_view name) {
  for (SourceKind kind : kAllSourceKinds) {
    if (SourceKindName(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<std::string> RankedList::ItemIds() const {
  std::vector<std::string> ids;
  ids.reserve(entries.size());
  for (const auto& entry : entries) ids.push_back(entry.item_id);
  return ids;
}

std::vector<ScoredItem> TopK(std::vector<ScoredItem> candidates, size_t k) {
  if (candidates.size() > k) {
    std::partial_sort(candidates.begin(), candidates.begin() + k,
                      candidates.end(), RanksBefore);
    candidates.resize(k);
  } else {
    std::sort(candidates.begin(), candidates.end(), RanksBefore);
  }
  return candidates;
}

bool IsWellFormed(const RankedList& list) {
  std::unordered_set<std::string_view> seen;
  for (size_t i = 0; i < list.entries.size(); ++i) {
    const ScoredItem& entry = list.entries[i];
    if (!std::isfinite(entry.score)) return false;
    if (!seen.insert(entry.item_id).second) return false;
    if (i > 0 && entry.score > list.entries[i - 1].score) return false;
  }
  return true;
}

namespace {

struct DurationUnit {
  std::string_view suffix;
  int64_t millis;
};

// Longest suffix first so "ms" is not read as "m".
constexpr DurationUnit kUnits[] = {
    {"ms", 1}, {"s", 1000}, {"m", 60'000}, {"h", 3'600'000}, {"d", 86'400'000}};

}  // namespace

Result<int64_t> ParseDurationMs(std::string_view text) {
  for (const DurationUnit& unit : kUnits) {
    if (text.size() <= unit.suffix.size() || !text.ends_with(unit.suffix)) {
      continue;
    }
    std::string_view digits = text.substr(0, text.size() - unit.suffix.size());
    int64_t value = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) break;
    if (value <= 0 || value > INT64_MAX / unit.millis) break;
    return value * unit.millis;
  }
  return MakeError(ErrorCode::kInvalidConfig,
                   "bad duration '" + std::string(text) + "'");
}

std::string FormatDurationMs(int64_t ms) {
  for (auto it = std::rbegin(kUnits); it != std::rend(kUnits); ++it) {
    if (ms % it->millis == 0) {
      return std::to_string(ms / it->millis) + std::string(it->suffix);
    }
  }
  return std::to_string(ms) + "ms";
}

}  // namespace polyrec
