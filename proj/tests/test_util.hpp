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

#ifndef POLYREC_TESTS_TEST_UTIL_HPP_
#define POLYREC_TESTS_TEST_UTIL_HPP_

#include <stdlib.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "polyrec/json_codec.hpp"
#include "polyrec/types.hpp"

namespace polyrec::testing {

// Directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "polyrec-test-XXXXXX").string();
    path_ = mkdtemp(pattern.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline DomainConfig FixtureConfig(const std::string& name) {
  const auto path = std::filesystem::path(POLYREC_FIXTURES_DIR) / (name + ".json");
  return DomainConfigFromJson(Json::parse(ReadText(path))).value();
}

inline SourceSpec Source(double weight, SourceParams params) {
  return SourceSpec{weight, std::move(params)};
}

inline DomainConfig SimpleConfig(const std::string& id,
                                 std::vector<SourceSpec> sources) {
  DomainConfig config;
  config.domain_id = id;
  config.entity_types = {"item", "other"};
  config.interaction_types = {"view", "click"};
  config.profile.sources = std::move(sources);
  return config;
}

inline Item MakeItem(const std::string& id, const std::string& type,
                     const std::string& text = "") {
  Item item;
  item.item_id = id;
  item.entity_type = type;
  if (!text.empty()) item.text_fields["text"] = text;
  return item;
}

inline Interaction MakeInteraction(const std::string& user, const std::string& item,
                                   int64_t ts, const std::string& type = "view") {
  return Interaction{user, item, type, ts, {}};
}

}  // namespace polyrec::testing

#endif  // POLYREC_TESTS_TEST_UTIL_HPP_
