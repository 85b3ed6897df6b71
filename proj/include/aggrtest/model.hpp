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

// Test-case data model: SUT instances, goals and properties, oracle and
// aggregation specifications, and per-run / per-case verdicts. Everything here
// is a plain value type; a validated Suite is immutable and may be shared by
// concurrent runners.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aggrtest/corpus.hpp"

namespace aggrtest {

// ---------------------------------------------------------------------------
// System under test

enum class BindingKind { http_endpoint, scripted, stochastic };

std::string_view to_string(BindingKind kind) noexcept;
std::optional<BindingKind> parse_binding_kind(std::string_view text) noexcept;

struct ModelBinding {
  BindingKind kind = BindingKind::scripted;
  // Sent on the wire for http-endpoint; asset registry key otherwise.
  std::string name;
  // Present exactly when kind == http_endpoint.
  std::optional<std::string> endpoint;
  // Explicit extra attempts after a transport failure or 5xx (http only).
  int retries = 0;
  int timeout_ms = 30000;

  bool operator==(const ModelBinding&) const = default;
};

struct ModelConfig {
  double temperature = 0.0;
  double top_p = 1.0;
  std::optional<int> top_k;
  int n = 1;
  int max_tokens = 16;
  std::optional<std::uint64_t> seed;

  bool operator==(const ModelConfig&) const = default;
};

struct SutSpec {
  std::string sut_id;
  // Registered component kind, see kComponentClassifyIssueReport and
  // kComponentPromptTemplate.
  std::string component;
  // Versioned prompt template asset key; empty for components without one.
  std::string prompt_id;
  ModelBinding model;
  ModelConfig configuration;
  // "name@version" tool identifiers.
  std::vector<std::string> tools;

  bool operator==(const SutSpec&) const = default;
};

inline constexpr std::string_view kComponentClassifyIssueReport = "classify-issue-report";
inline constexpr std::string_view kComponentPromptTemplate = "prompt-template";
inline constexpr std::string_view kDuplicationFinderTool = "DuplicationFinder";

bool is_registered_component(std::string_view component) noexcept;

// ---------------------------------------------------------------------------
// Goals and properties

struct Goal {
  std::string goal_id;
  std::string description;

  bool operator==(const Goal&) const = default;
};

struct Property {
  std::string property_id;
  std::string goal_id;
  std::string description;
  std::string oracle_ref;

  bool operator==(const Property&) const = default;
};

// ---------------------------------------------------------------------------
// Oracles

enum class OracleKind {
  // atomic: one run -> one Verdict
  single_label,
  duplicate_alignment,
  exact_match,
  regex_match,
  contains,
  json_format,
  similarity_threshold,
  llm_judge,
  // consistency: computed over the RunSets of a case
  repeatability,
  paraphrase_agreement,
  format_agreement,
};

std::string_view to_string(OracleKind kind) noexcept;
std::optional<OracleKind> parse_oracle_kind(std::string_view text) noexcept;
bool is_atomic(OracleKind kind) noexcept;

// Flat parameter record; only the fields belonging to `kind` are meaningful.
struct OracleSpec {
  std::string oracle_id;
  OracleKind kind = OracleKind::exact_match;

  // single-label
  std::vector<std::string> labels;
  std::vector<std::string> id_labels;
  bool strict = false;
  // exact-match
  std::string expected;
  bool expected_from_class = false;
  // regex-match
  std::string pattern;
  // contains
  std::string needle;
  // json-format
  std::vector<std::string> required_keys;
  // similarity-threshold
  std::string reference;
  double threshold = 0.0;
  std::optional<std::string> scorer_endpoint;
  // llm-judge; rubric placeholders are {scenario} and {output}
  std::string judge_sut;
  std::string rubric;

  bool operator==(const OracleSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Aggregation

enum class AggregationRule { identity, strict_all, majority, pass_rate, wilson_lower_bound };

std::string_view to_string(AggregationRule rule) noexcept;
std::optional<AggregationRule> parse_aggregation_rule(std::string_view text) noexcept;

struct AggregationSpec {
  AggregationRule rule = AggregationRule::identity;
  // Required for pass-rate and wilson-lower-bound, in [0,1].
  std::optional<double> threshold;
  // Required for wilson-lower-bound, in (0,1).
  std::optional<double> confidence;
  // Error verdicts are dropped from n when set; otherwise they count as
  // non-passing runs.
  bool exclude_errors = true;

  bool operator==(const AggregationSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Test cases

struct InputSelector {
  enum class Mode { item, class_filter, all };
  Mode mode = Mode::all;
  std::string item_id;
  std::string class_label;
  // Empty means every variant type.
  std::vector<VariantType> variant_types;

  bool operator==(const InputSelector&) const = default;
};

struct Budget {
  // An action is one non-empty line of the SUT output.
  std::optional<int> max_actions;
  // Whitespace-separated tokens of the SUT output.
  std::optional<int> max_output_tokens;

  bool operator==(const Budget&) const = default;
};

inline constexpr int kDefaultRepeats = 10;

struct TestCase {
  std::string case_id;
  std::string sut_id;
  std::vector<std::string> properties;
  InputSelector input;
  int repeats = kDefaultRepeats;
  std::string oracle_id;
  AggregationSpec aggregation;
  std::optional<Budget> budget;

  bool operator==(const TestCase&) const = default;
};

// ---------------------------------------------------------------------------
// Verdicts

enum class VerdictStatus { pass, fail, error };

std::string_view to_string(VerdictStatus status) noexcept;
std::optional<VerdictStatus> parse_verdict_status(std::string_view text) noexcept;

struct Verdict {
  VerdictStatus status = VerdictStatus::error;
  std::string detail;
  std::optional<double> score;

  static Verdict pass(std::string detail = {}, std::optional<double> score = std::nullopt) {
    return {VerdictStatus::pass, std::move(detail), score};
  }
  static Verdict fail(std::string detail, std::optional<double> score = std::nullopt) {
    return {VerdictStatus::fail, std::move(detail), score};
  }
  static Verdict error(std::string detail) {
    return {VerdictStatus::error, detail.empty() ? std::string("unspecified error") : std::move(detail), std::nullopt};
  }

  bool passed() const noexcept { return status == VerdictStatus::pass; }
  bool operator==(const Verdict&) const = default;
};

struct Interval {
  double low = 0.0;
  double high = 1.0;

  bool operator==(const Interval&) const = default;
};

struct AggregateVerdict {
  std::string case_id;
  std::vector<Verdict> run_verdicts;  // index = run index
  AggregationSpec rule;
  int pass_count = 0;
  // Runs that entered the rule: all runs, minus errors when excluded.
  int counted = 0;
  // pass_count / counted; equals pass_count / run_verdicts.size() when no
  // run errored.
  double pass_rate = 0.0;
  std::optional<Interval> interval;
  VerdictStatus status = VerdictStatus::error;
  std::string detail;

  bool operator==(const AggregateVerdict&) const = default;
};

// ---------------------------------------------------------------------------
// Assets referenced by SUT bindings

struct ScriptedTable {
  // Exact rendered prompt -> output.
  std::map<std::string, std::string> by_prompt;
  // Input item id -> output, consulted when no prompt entry matches.
  std::map<std::string, std::string> by_item;
  std::string fallback = "UNKNOWN";

  bool operator==(const ScriptedTable&) const = default;
};

struct WeightedOutput {
  std::string output;
  double probability = 0.0;

  bool operator==(const WeightedOutput&) const = default;
};

inline constexpr std::string_view kWildcardEntry = "*";

struct ResponseDistribution {
  // Keyed by input item id, or kWildcardEntry for the default entry.
  std::map<std::string, std::vector<WeightedOutput>> entries;

  bool operator==(const ResponseDistribution&) const = default;
};

struct IndexedIssue {
  std::string issue_id;
  std::string text;

  bool operator==(const IndexedIssue&) const = default;
};

}  // namespace aggrtest
