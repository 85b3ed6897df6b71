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

// Atomic oracles: one RunRecord (or one output) -> one Verdict. All of them
// are pure; llm_judge is pure given a deterministic judge.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aggrtest/model.hpp"
#include "aggrtest/sut.hpp"

namespace aggrtest {

struct LabelCheckOptions {
  // Labels that may be followed by one id token, e.g. "DUPLICATE #12".
  std::vector<std::string> id_labels;
  // Disables the trailing-period allowance.
  bool strict = false;
};

// Whitespace normalization plus, unless strict, removal of one trailing
// period. This is the boundary of "no extra content".
std::string normalize_label_output(std::string_view output, bool strict = false);

// O1: passes iff the normalized output is exactly one label (optionally with
// an id for id-bearing labels). Failure detail names P1.1 (several labels),
// P1.2 (no member label) or P1.3 (extra content).
Verdict check_single_label(std::string_view output, std::span<const std::string> labels,
                           const LabelCheckOptions& options = {});

struct Decision {
  std::string label;
  std::optional<std::string> id;

  bool operator==(const Decision&) const = default;
};

// Ids compare without an optional leading '#'.
std::string canonical_issue_id(std::string_view id);

// Strict parse of a well-formed decision: "<LABEL>" or "<ID_LABEL> <id>".
std::optional<Decision> parse_decision(std::string_view output, std::span<const std::string> labels,
                                       std::span<const std::string> id_labels);

// Lenient scan used for duplicate alignment: finds the first label token
// anywhere in the output and, after DUPLICATE, an id token.
std::optional<Decision> scan_decision(std::string_view output, std::span<const std::string> labels);

// O2 / O3. Error verdict (missing-tool-trace) when the record has no
// DuplicationFinder entry.
Verdict check_duplicate_alignment(const RunRecord& record, const std::optional<Decision>& decision);

Verdict exact_match(std::string_view output, std::string_view expected);
// ECMAScript search semantics; anchor explicitly for a full match. Throws
// Error(invalid_pattern).
Verdict regex_match(std::string_view output, std::string_view pattern);
Verdict contains(std::string_view output, std::string_view needle);

Verdict json_format_check(std::string_view output, std::span<const std::string> required_keys = {});

// Character-level edit distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

// 1 - editdist / max length over normalized code points; 1 for two empty texts.
double levenshtein_similarity(std::string_view a, std::string_view b);
// |A ∩ B| / |A ∪ B| over whitespace tokens; 1 for two empty texts.
double token_jaccard(std::string_view a, std::string_view b);
// max of the two terms; symmetric, in [0,1].
double similarity(std::string_view a, std::string_view b);

// Passes iff similarity > threshold (strict). score carries the similarity.
Verdict similarity_threshold(std::string_view output, std::string_view reference, double threshold);

// Pluggable scorer for similarity-threshold, e.g. an external endpoint.
using SimilarityScorer = std::function<double(std::string_view, std::string_view)>;
Verdict similarity_threshold(std::string_view output, std::string_view reference, double threshold,
                             const SimilarityScorer& scorer);

// Returns the judge's answer or throws Error.
using JudgeInvoker = std::function<std::string(const std::string& prompt)>;

std::string render_rubric(std::string_view rubric, std::string_view scenario, std::string_view output);

// Renders the rubric with the record's input and output, asks the judge
// once, and passes iff the trimmed, lowercased answer contains "yes".
Verdict llm_judge(const JudgeInvoker& judge, std::string_view rubric, const RunRecord& record);
Verdict llm_judge(const SutContext& ctx, const SutSpec& judge, std::string_view rubric, const RunRecord& record);

// Non-empty output lines.
int count_actions(std::string_view output);

// Fails when the record exceeds the budget; passes otherwise.
Verdict check_budget(const RunRecord& record, const Budget& budget);

struct OracleContext {
  const SutContext* sut_context = nullptr;
  const SutSpec* judge = nullptr;
  // Class label of the record's input item, for expected_from_class.
  std::string item_class;
  std::optional<Budget> budget;
};

// Runs one atomic oracle spec against a record, then the budget. Records
// carrying a SUT error yield an error verdict without consulting the oracle.
Verdict evaluate_atomic(const OracleSpec& spec, const RunRecord& record, const OracleContext& ctx);

}  // namespace aggrtest
