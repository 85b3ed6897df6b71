// Copyright 2026 The aggrtest Authors
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

#include "fixtures.hpp"

#include <atomic>
#include <string>

#include <fmt/format.h>
#include <gtest/gtest.h>
#include <unistd.h>

namespace aggrtest::testing_support {

nlohmann::json tiny_suite() {
  return nlohmann::json::parse(R"({
    "schema_version": 1,
    "suite_id": "tiny",
    "seed": 7,
    "labels": ["BUG", "FEATURE", "INVALID", "DUPLICATE"],
    "corpus": {"rows": [
      {"item_id": "i1", "base_id": "i1", "class": "BUG", "variant_type": "BASE", "text": "it breaks", "provenance": "authored"},
      {"item_id": "i2", "base_id": "i2", "class": "FEATURE", "variant_type": "BASE", "text": "add a knob", "provenance": "authored"}
    ]},
    "assets": {
      "prompts": {"p": {"text": "Classify: {input}"}},
      "scripted": {"table": {"by_item": {"i1": "BUG", "i2": "FEATURE"}, "fallback": "UNKNOWN"}}
    },
    "suts": [{
      "sut_id": "s", "component": "prompt-template", "prompt": "p",
      "model": {"kind": "scripted", "name": "table"},
      "configuration": {"temperature": 0.0, "top_p": 1.0, "n": 1, "max_tokens": 16}
    }],
    "goals": [{"goal_id": "G1", "description": "labels are right"}],
    "properties": [{"property_id": "P1", "goal_id": "G1", "description": "exact label", "oracle_ref": "O1"}],
    "oracles": [{"oracle_id": "O1", "kind": "exact-match", "parameters": {"expected": "BUG"}}],
    "cases": [{
      "case_id": "c1", "sut_id": "s", "properties": ["P1"], "input": {"item": "i1"},
      "repeats": 3, "oracle": "O1", "aggregation": {"rule": "strict-all"}
    }]
  })");
}

Suite must_validate(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  auto result = validate_suite(doc, base_dir);
  std::string all;
  for (const auto& e : result.errors) all += format_validation_error(e) + "\n";
  EXPECT_TRUE(result.ok()) << all;
  if (!result.ok()) throw std::runtime_error("suite invalid:\n" + all);
  return *result.suite;
}

std::filesystem::path bundled(const std::string& name) {
  return std::filesystem::path(AGGRTEST_SUITES_DIR) / name;
}

std::vector<InputItem> base_rows(const std::vector<std::string>& classes, int per_class) {
  std::vector<InputItem> rows;
  for (const auto& label : classes) {
    for (int k = 1; k <= per_class; ++k) {
      auto id = fmt::format("{}-{:03d}", label, k);
      rows.push_back({id, id, label, VariantType::base,
                      fmt::format("Report {} number {}: the thing, it does not work.", label, k), Provenance::authored,
                      std::nullopt});
    }
  }
  return rows;
}

std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             fmt::format("aggrtest-{}-{}-{}", tag, static_cast<long>(::getpid()), counter++);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace aggrtest::testing_support
