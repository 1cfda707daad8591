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

#ifndef POLYREC_JSON_CODEC_HPP_
#define POLYREC_JSON_CODEC_HPP_

#include <string_view>
#include <vector>

#include "json.hpp"
#include "polyrec/status.hpp"
#include "polyrec/types.hpp"

namespace polyrec {

using Json = nlohmann::json;

// DomainConfig schema mirrors the struct field by field. Source params are
// validated against their kind; unknown keys are rejected.
Json ToJson(const SourceSpec& source);
Json ToJson(const AlgorithmProfile& profile);
Json ToJson(const DomainConfig& config);
Result<SourceSpec> SourceSpecFromJson(const Json& json);
Result<AlgorithmProfile> AlgorithmProfileFromJson(const Json& json);
Result<DomainConfig> DomainConfigFromJson(
    const Json& json, int64_t default_budget_ms = kDefaultLatencyBudgetMs);

Json ToJson(const Item& item);
Json ToJson(const Interaction& interaction);
Json ToJson(const EmbeddingRecord& record);
Result<Item> ItemFromJson(const Json& json);
Result<Interaction> InteractionFromJson(const Json& json);
Result<EmbeddingRecord> EmbeddingRecordFromJson(const Json& json);

Json ToJson(const RankedList& list);
Json ToJson(const IngestReport& report);

// Records parsed from a JSON array or a JSONL body. `lines[i]` is the
// 1-based position of `records[i]`; unparseable records land in `rejected`.
template <typename T>
struct ParsedBatch {
  std::vector<T> records;
  std::vector<size_t> lines;
  std::vector<Rejection> rejected;
};

// Whole-body failures (e.g. an unterminated JSON array) are returned as
// MalformedRequest.
Result<ParsedBatch<Item>> ParseItems(std::string_view body);
Result<ParsedBatch<Interaction>> ParseInteractions(std::string_view body);
Result<ParsedBatch<EmbeddingRecord>> ParseEmbeddings(std::string_view body);

}  // namespace polyrec

#endif  // POLYREC_JSON_CODEC_HPP_
