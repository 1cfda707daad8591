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

#include "polyrec/json_codec.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace polyrec {

namespace {

Error Bad(ErrorCode code, std::string message) {
  return MakeError(code, std::move(message));
}

Status CheckKeys(const Json& json, std::initializer_list<std::string_view> allowed,
                 ErrorCode code, std::string_view where) {
  for (const auto& [key, value] : json.items()) {
    bool known = false;
    for (std::string_view name : allowed) known = known || key == name;
    if (!known) {
      return Bad(code, std::string(where) + ": unknown field '" + key + "'");
    }
  }
  return Status::Ok();
}

Result<std::string> RequiredString(const Json& json, const char* key,
                                   ErrorCode code) {
  auto it = json.find(key);
  if (it == json.end() || !it->is_string()) {
    return Bad(code, std::string("missing or non-string '") + key + "'");
  }
  return it->get<std::string>();
}

Result<int64_t> RequiredInteger(const Json& json, const char* key,
                                ErrorCode code) {
  auto it = json.find(key);
  if (it == json.end() || !it->is_number_integer()) {
    return Bad(code, std::string("missing or non-integer '") + key + "'");
  }
  return it->get<int64_t>();
}

Result<std::set<std::string>> StringSet(const Json& json, const char* key) {
  auto it = json.find(key);
  if (it == json.end() || !it->is_array()) {
    return Bad(ErrorCode::kInvalidConfig,
               std::string("'") + key + "' must be an array of strings");
  }
  std::set<std::string> out;
  for (const Json& v : *it) {
    if (!v.is_string()) {
      return Bad(ErrorCode::kInvalidConfig,
                 std::string("'") + key + "' must contain only strings");
    }
    out.insert(v.get<std::string>());
  }
  return out;
}

Result<std::map<std::string, std::string>> StringMap(const Json& json,
                                                     const char* key) {
  std::map<std::string, std::string> out;
  auto it = json.find(key);
  if (it == json.end() || it->is_null()) return out;
  if (!it->is_object()) {
    return Bad(ErrorCode::kMalformedRecord,
               std::string("'") + key + "' must be an object");
  }
  for (const auto& [k, v] : it->items()) {
    if (k.empty()) {
      return Bad(ErrorCode::kMalformedRecord,
                 std::string("'") + key + "' has an empty key");
    }
    if (!v.is_string()) {
      return Bad(ErrorCode::kMalformedRecord,
                 std::string("'") + key + "." + k + "' must be a string");
    }
    out.emplace(k, v.get<std::string>());
  }
  return out;
}

Json ParamsToJson(const SourceParams& params) {
  Json out = Json::object();
  if (const auto* p = std::get_if<UserCfParams>(&params)) {
    out["k_neighbors"] = p->k_neighbors;
  } else if (const auto* p = std::get_if<ContentParams>(&params)) {
    out["text_fields"] = p->text_fields;
  } else if (const auto* p = std::get_if<EmbeddingParams>(&params)) {
    out["space_id"] = p->space_id;
    if (p->prune_m) {
      out["prune_m"] = *p->prune_m;
    } else {
      out["prune_m"] = "full";
    }
  } else if (const auto* p = std::get_if<PopularityParams>(&params)) {
    out["window"] = p->window_ms ? FormatDurationMs(*p->window_ms) : "all_time";
  }
  return out;
}

Result<SourceParams> ParamsFromJson(SourceKind kind, const Json& params) {
  const ErrorCode code = ErrorCode::kInvalidConfig;
  if (!params.is_object()) return Bad(code, "params must be an object");
  switch (kind) {
    case SourceKind::kUserCf: {
      if (Status s = CheckKeys(params, {"k_neighbors"}, code, "user_cf");
          !s.ok()) {
        return s.error();
      }
      UserCfParams p;
      if (params.contains("k_neighbors")) {
        auto k = RequiredInteger(params, "k_neighbors", code);
        if (!k) return k.error();
        p.k_neighbors = *k;
      }
      return SourceParams(p);
    }
    case SourceKind::kItemCf: {
      if (Status s = CheckKeys(params, {}, code, "item_cf"); !s.ok()) {
        return s.error();
      }
      return SourceParams(ItemCfParams{});
    }
    case SourceKind::kContent: {
      if (Status s = CheckKeys(params, {"text_fields"}, code, "content");
          !s.ok()) {
        return s.error();
      }
      ContentParams p;
      auto it = params.find("text_fields");
      if (it == params.end() || !it->is_array()) {
        return Bad(code, "content: text_fields must be an array");
      }
      for (const Json& field : *it) {
        if (!field.is_string()) {
          return Bad(code, "content: text_fields must contain strings");
        }
        p.text_fields.push_back(field.get<std::string>());
      }
      return SourceParams(std::move(p));
    }
    case SourceKind::kEmbedding: {
      if (Status s =
              CheckKeys(params, {"space_id", "prune_m"}, code, "embedding");
          !s.ok()) {
        return s.error();
      }
      EmbeddingParams p;
      auto space = RequiredString(params, "space_id", code);
      if (!space) return space.error();
      p.space_id = *space;
      auto it = params.find("prune_m");
      if (it != params.end()) {
        if (it->is_string() && it->get<std::string>() == "full") {
          p.prune_m = std::nullopt;
        } else if (it->is_number_integer()) {
          p.prune_m = it->get<int64_t>();
        } else {
          return Bad(code, "embedding: prune_m must be an integer or \"full\"");
        }
      }
      return SourceParams(std::move(p));
    }
    case SourceKind::kPopularity: {
      if (Status s = CheckKeys(params, {"window"}, code, "popularity");
          !s.ok()) {
        return s.error();
      }
      PopularityParams p;
      auto it = params.find("window");
      if (it != params.end()) {
        if (!it->is_string()) {
          return Bad(code, "popularity: window must be a string");
        }
        const std::string window = it->get<std::string>();
        if (window != "all_time") {
          auto ms = ParseDurationMs(window);
          if (!ms) return ms.error();
          p.window_ms = *ms;
        }
      }
      return SourceParams(p);
    }
  }
  return Bad(code, "unknown source kind");
}

}  // namespace

Json ToJson(const SourceSpec& source) {
  return Json{{"kind", SourceKindName(source.kind())},
              {"weight", source.weight},
              {"params", ParamsToJson(source.params)}};
}

Json ToJson(const AlgorithmProfile& profile) {
  Json sources = Json::array();
  for (const auto& source : profile.sources) sources.push_back(ToJson(source));
  return Json{{"sources", std::move(sources)}, {"fusion_mode", "weighted_sum"}};
}

Json ToJson(const DomainConfig& config) {
  return Json{{"domain_id", config.domain_id},
              {"entity_types", config.entity_types},
              {"interaction_types", config.interaction_types},
              {"profile", ToJson(config.profile)},
              {"default_k", config.default_k},
              {"latency_budget_ms", config.latency_budget_ms},
              {"version", config.version}};
}

Result<SourceSpec> SourceSpecFromJson(const Json& json) {
  const ErrorCode code = ErrorCode::kInvalidConfig;
  if (!json.is_object()) return Bad(code, "source must be an object");
  if (Status s = CheckKeys(json, {"kind", "weight", "params"}, code, "source");
      !s.ok()) {
    return s.error();
  }
  auto kind_name = RequiredString(json, "kind", code);
  if (!kind_name) return kind_name.error();
  auto kind = ParseSourceKind(*kind_name);
  if (!kind) return Bad(code, "unknown source kind '" + *kind_name + "'");

  SourceSpec spec;
  auto weight = json.find("weight");
  if (weight == json.end() || !weight->is_number()) {
    return Bad(code, "source weight must be a number");
  }
  spec.weight = weight->get<double>();

  auto params_it = json.find("params");
  auto params = ParamsFromJson(
      *kind, params_it == json.end() ? Json::object() : *params_it);
  if (!params) return params.error();
  spec.params = std::move(*params);
  return spec;
}

Result<AlgorithmProfile> AlgorithmProfileFromJson(const Json& json) {
  const ErrorCode code = ErrorCode::kInvalidConfig;
  if (!json.is_object()) return Bad(code, "profile must be an object");
  if (Status s = CheckKeys(json, {"sources", "fusion_mode"}, code, "profile");
      !s.ok()) {
    return s.error();
  }
  AlgorithmProfile profile;
  auto mode = json.find("fusion_mode");
  if (mode != json.end() &&
      !(mode->is_string() && mode->get<std::string>() == "weighted_sum")) {
    return Bad(code, "fusion_mode must be \"weighted_sum\"");
  }
  auto sources = json.find("sources");
  if (sources == json.end() || !sources->is_array()) {
    return Bad(code, "profile.sources must be an array");
  }
  for (const Json& source_json : *sources) {
    auto source = SourceSpecFromJson(source_json);
    if (!source) return source.error();
    profile.sources.push_back(std::move(*source));
  }
  return profile;
}

Result<DomainConfig> DomainConfigFromJson(const Json& json,
                                          int64_t default_budget_ms) {
  const ErrorCode code = ErrorCode::kInvalidConfig;
  if (!json.is_object()) return Bad(code, "config must be an object");
  if (Status s = CheckKeys(json,
                           {"domain_id", "entity_types", "interaction_types",
                            "profile", "default_k", "latency_budget_ms",
                            "version"},
                           code, "config");
      !s.ok()) {
    return s.error();
  }
  DomainConfig config;
  config.latency_budget_ms = default_budget_ms;
  auto id = RequiredString(json, "domain_id", code);
  if (!id) return id.error();
  config.domain_id = *id;

  auto entity_types = StringSet(json, "entity_types");
  if (!entity_types) return entity_types.error();
  config.entity_types = std::move(*entity_types);
  auto interaction_types = StringSet(json, "interaction_types");
  if (!interaction_types) return interaction_types.error();
  config.interaction_types = std::move(*interaction_types);

  auto profile_it = json.find("profile");
  if (profile_it == json.end()) return Bad(code, "missing 'profile'");
  auto profile = AlgorithmProfileFromJson(*profile_it);
  if (!profile) return profile.error();
  config.profile = std::move(*profile);

  if (json.contains("default_k")) {
    auto k = RequiredInteger(json, "default_k", code);
    if (!k) return k.error();
    config.default_k = *k;
  }
  if (json.contains("latency_budget_ms")) {
    auto budget = RequiredInteger(json, "latency_budget_ms", code);
    if (!budget) return budget.error();
    config.latency_budget_ms = *budget;
  }
  if (json.contains("version")) {
    auto version = RequiredInteger(json, "version", code);
    if (!version) return version.error();
    if (*version < 0) return Bad(code, "version must be >= 0");
    config.version = static_cast<uint64_t>(*version);
  }
  return config;
}

Json ToJson(const Item& item) {
  Json attributes = Json::object();
  for (const auto& [key, value] : item.attributes) {
    std::visit([&](const auto& v) { attributes[key] = v; }, value);
  }
  return Json{{"item_id", item.item_id},
              {"entity_type", item.entity_type},
              {"text_fields", item.text_fields},
              {"attributes", std::move(attributes)},
              {"created_at", item.created_at}};
}

Json ToJson(const Interaction& interaction) {
  return Json{{"user_id", interaction.user_id},
              {"item_id", interaction.item_id},
              {"interaction_type", interaction.interaction_type},
              {"timestamp", interaction.timestamp},
              {"context", interaction.context}};
}

Json ToJson(const EmbeddingRecord& record) {
  return Json{{"item_id", record.item_id},
              {"space_id", record.space_id},
              {"vector", record.vector}};
}

Result<Item> ItemFromJson(const Json& json) {
  const ErrorCode code = ErrorCode::kMalformedRecord;
  if (!json.is_object()) return Bad(code, "item must be an object");
  Item item;
  auto id = RequiredString(json, "item_id", code);
  if (!id) return id.error();
  item.item_id = *id;
  auto type = RequiredString(json, "entity_type", code);
  if (!type) return type.error();
  item.entity_type = *type;
  auto text = StringMap(json, "text_fields");
  if (!text) return text.error();
  item.text_fields = std::move(*text);

  auto attrs = json.find("attributes");
  if (attrs != json.end() && !attrs->is_null()) {
    if (!attrs->is_object()) return Bad(code, "'attributes' must be an object");
    for (const auto& [key, value] : attrs->items()) {
      if (value.is_boolean()) {
        item.attributes.emplace(key, value.get<bool>());
      } else if (value.is_number_integer()) {
        item.attributes.emplace(key, value.get<int64_t>());
      } else if (value.is_number()) {
        item.attributes.emplace(key, value.get<double>());
      } else if (value.is_string()) {
        item.attributes.emplace(key, value.get<std::string>());
      } else {
        return Bad(code, "attribute '" + key + "' must be a scalar");
      }
    }
  }
  if (json.contains("created_at")) {
    auto created = RequiredInteger(json, "created_at", code);
    if (!created) return created.error();
    item.created_at = *created;
  }
  return item;
}

Result<Interaction> InteractionFromJson(const Json& json) {
  const ErrorCode code = ErrorCode::kMalformedRecord;
  if (!json.is_object()) return Bad(code, "interaction must be an object");
  Interaction interaction;
  auto user = RequiredString(json, "user_id", code);
  if (!user) return user.error();
  interaction.user_id = *user;
  auto item = RequiredString(json, "item_id", code);
  if (!item) return item.error();
  interaction.item_id = *item;
  auto type = RequiredString(json, "interaction_type", code);
  if (!type) return type.error();
  interaction.interaction_type = *type;
  auto ts = RequiredInteger(json, "timestamp", code);
  if (!ts) return ts.error();
  interaction.timestamp = *ts;
  auto context = StringMap(json, "context");
  if (!context) return context.error();
  interaction.context = std::move(*context);
  return interaction;
}

Result<EmbeddingRecord> EmbeddingRecordFromJson(const Json& json) {
  const ErrorCode code = ErrorCode::kMalformedRecord;
  if (!json.is_object()) return Bad(code, "embedding must be an object");
  EmbeddingRecord record;
  auto item = RequiredString(json, "item_id", code);
  if (!item) return item.error();
  record.item_id = *item;
  auto space = RequiredString(json, "space_id", code);
  if (!space) return space.error();
  record.space_id = *space;
  auto vec = json.find("vector");
  if (vec == json.end() || !vec->is_array()) {
    return Bad(code, "'vector' must be an array");
  }
  record.vector.reserve(vec->size());
  for (const Json& component : *vec) {
    // Serializers commonly write NaN and infinities as null.
    if (component.is_null()) {
      record.vector.push_back(std::numeric_limits<double>::quiet_NaN());
    } else if (component.is_number()) {
      record.vector.push_back(component.get<double>());
    } else {
      return Bad(code, "'vector' must contain numbers");
    }
  }
  return record;
}

Json ToJson(const RankedList& list) {
  Json entries = Json::array();
  for (const auto& entry : list.entries) {
    entries.push_back(Json{{"item_id", entry.item_id}, {"score", entry.score}});
  }
  return entries;
}

Json ToJson(const IngestReport& report) {
  Json rejected = Json::array();
  for (const auto& r : report.rejected) {
    rejected.push_back(Json{{"line", r.line},
                            {"reason", std::string(ErrorCodeName(r.code)) +
                                           (r.reason.empty() ? "" : ": ") +
                                           r.reason}});
  }
  return Json{{"accepted", report.accepted}, {"rejected", std::move(rejected)}};
}

namespace {

template <typename T>
Result<ParsedBatch<T>> ParseBatch(std::string_view body,
                                  Result<T> (*from_json)(const Json&)) {
  ParsedBatch<T> batch;
  auto add = [&](const Json& json, size_t line) {
    Result<T> record = from_json(json);
    if (record) {
      batch.records.push_back(std::move(*record));
      batch.lines.push_back(line);
    } else {
      batch.rejected.push_back(
          Rejection{line, record.code(), record.error().message});
    }
  };

  size_t first = body.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && body[first] == '[') {
    Json array = Json::parse(body, nullptr, /*allow_exceptions=*/false);
    if (array.is_discarded() || !array.is_array()) {
      return MakeError(ErrorCode::kMalformedRequest, "body is not valid JSON");
    }
    for (size_t i = 0; i < array.size(); ++i) add(array[i], i + 1);
    return batch;
  }

  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t end = body.find('\n', pos);
    if (end == std::string_view::npos) end = body.size();
    std::string_view line = body.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    Json json = Json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (json.is_discarded()) {
      batch.rejected.push_back(
          Rejection{line_no, ErrorCode::kMalformedRecord, "invalid JSON"});
      continue;
    }
    add(json, line_no);
  }
  return batch;
}

}  // namespace

Result<ParsedBatch<Item>> ParseItems(std::string_view body) {
  return ParseBatch<Item>(body, &ItemFromJson);
}

Result<ParsedBatch<Interaction>> ParseInteractions(std::string_view body) {
  return ParseBatch<Interaction>(body, &InteractionFromJson);
}

Result<ParsedBatch<EmbeddingRecord>> ParseEmbeddings(std::string_view body) {
  return ParseBatch<EmbeddingRecord>(body, &EmbeddingRecordFromJson);
}

}  // namespace polyrec
