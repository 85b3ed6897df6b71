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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aggrtest/error.hpp"
#include "aggrtest/model.hpp"

namespace aggrtest {

inline constexpr int kSuiteSchemaVersion = 1;

// Labels of the issue-report classification task, in canonical order.
std::vector<std::string> label_set();
bool is_member(const std::vector<std::string>& labels, std::string_view label);

// A fully cross-referenced suite with every asset resolved in memory.
struct Suite {
  int schema_version = kSuiteSchemaVersion;
  std::string suite_id;
  std::uint64_t seed = 0;
  std::vector<std::string> labels;

  std::vector<SutSpec> suts;
  std::vector<Goal> goals;
  std::vector<Property> properties;
  std::vector<OracleSpec> oracles;
  std::vector<TestCase> cases;
  std::vector<InputItem> corpus;

  std::map<std::string, std::string> prompts;
  std::map<std::string, ScriptedTable> scripted;
  std::map<std::string, ResponseDistribution> distributions;
  std::vector<IndexedIssue> issue_index;

  const SutSpec* find_sut(std::string_view sut_id) const noexcept;
  const OracleSpec* find_oracle(std::string_view oracle_id) const noexcept;
  const Property* find_property(std::string_view property_id) const noexcept;
  const TestCase* find_case(std::string_view case_id) const noexcept;
  const InputItem* find_item(std::string_view item_id) const noexcept;

  bool operator==(const Suite&) const = default;
};

struct ValidationError {
  ErrorKind kind;
  // JSON pointer into the suite document, e.g. "/cases/1/aggregation/rule".
  std::string path;
  std::string message;

  bool operator==(const ValidationError&) const = default;
};

std::string format_validation_error(const ValidationError& error);

// Either a complete suite or the full list of errors; never both.
struct SuiteValidation {
  std::optional<Suite> suite;
  std::vector<ValidationError> errors;

  bool ok() const noexcept { return suite.has_value(); }
};

// Asset values in the document may be inline objects or paths relative to
// `base_dir`. A missing asset file is an unresolved-reference.
SuiteValidation validate_suite(const nlohmann::json& document, const std::filesystem::path& base_dir = {});

// Reads and validates a suite file. Throws Error(io) when the file cannot be
// read and Error(parse) when it is not JSON; validation errors are returned.
SuiteValidation load_suite(const std::filesystem::path& path);

// Reads a suite file into a JSON document without validating it.
nlohmann::json read_suite_document(const std::filesystem::path& path);

// Fully inlined canonical document; validate_suite(serialize_suite(s)) == s.
nlohmann::json serialize_suite(const Suite& suite);

nlohmann::json to_json(const SutSpec& sut);
// Parses one SUT entry; errors are appended with paths under `path`.
std::optional<SutSpec> parse_sut(const nlohmann::json& node, const std::string& path,
                                 std::vector<ValidationError>& errors);

// Identity of a suite for cross-version comparison: covers cases, oracles,
// properties, goals, labels, SUT ids/components and the corpus, but not SUT
// models, configurations, prompts or the seed, so runs of one suite against
// different SUT versions share a digest.
std::string suite_digest(const Suite& suite);

// Replaces the SUTs with matching sut_id in a suite document. Throws
// Error(precondition) when a replacement has no counterpart.
void bind_suts(nlohmann::json& document, const std::vector<nlohmann::json>& replacements);

}  // namespace aggrtest
