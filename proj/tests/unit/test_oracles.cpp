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

#include <gtest/gtest.h>

#include "aggrtest/error.hpp"
#include "aggrtest/oracles.hpp"
#include "aggrtest/suite.hpp"
#include "../support/fixtures.hpp"
#include "../support/generators.hpp"
#include "../support/reference.hpp"

namespace aggrtest {
namespace {

const std::vector<std::string> kLabels = label_set();
const LabelCheckOptions kDuplicateIds{{"DUPLICATE"}, false};

bool mentions(const Verdict& v, std::string_view fragment) { return v.detail.find(fragment) != std::string::npos; }

TEST(SingleLabel, Examples) {
  EXPECT_EQ(check_single_label("BUG", kLabels).status, VerdictStatus::pass);
  auto two = check_single_label("BUG or FEATURE", kLabels);
  EXPECT_EQ(two.status, VerdictStatus::fail);
  EXPECT_TRUE(mentions(two, "P1.1")) << two.detail;
  auto chatty = check_single_label("Answer: BUG", kLabels);
  EXPECT_EQ(chatty.status, VerdictStatus::fail);
  EXPECT_TRUE(mentions(chatty, "P1.3")) << chatty.detail;
  auto none = check_single_label("QUESTION", kLabels);
  EXPECT_EQ(none.status, VerdictStatus::fail);
  EXPECT_TRUE(mentions(none, "P1.2")) << none.detail;
}

TEST(SingleLabel, NormalizationBoundary) {
  EXPECT_TRUE(check_single_label("  BUG \n", kLabels).passed());
  EXPECT_TRUE(check_single_label("BUG.", kLabels).passed());
  EXPECT_FALSE(check_single_label("BUG..", kLabels).passed());
  EXPECT_FALSE(check_single_label("BUG.", kLabels, {{}, true}).passed());
  EXPECT_FALSE(check_single_label("bug", kLabels).passed());
  EXPECT_FALSE(check_single_label("", kLabels).passed());
  EXPECT_EQ(normalize_label_output("  It is\ta BUG.  "), "It is a BUG");
  EXPECT_EQ(normalize_label_output("BUG.", true), "BUG.");
}

TEST(SingleLabel, IdBearingLabels) {
  EXPECT_TRUE(check_single_label("DUPLICATE #12", kLabels, kDuplicateIds).passed());
  EXPECT_TRUE(check_single_label("DUPLICATE 12", kLabels, kDuplicateIds).passed());
  EXPECT_FALSE(check_single_label("DUPLICATE #12", kLabels).passed());
  EXPECT_FALSE(check_single_label("BUG #12", kLabels, kDuplicateIds).passed());
  EXPECT_FALSE(check_single_label("DUPLICATE #12 #13", kLabels, kDuplicateIds).passed());
}

TEST(SingleLabel, CrossOracleConsistencyWithExactMatch) {
  // Whenever O1 passes, the normalized output exact-matches exactly one label.
  std::vector<std::string> crafted = {"BUG", " FEATURE. ", "INVALID\n", "DUPLICATE", "BUG FEATURE", "Bug",
                                      "It is a BUG.", "FEATURE!", "", "INVALID.", "\tDUPLICATE  ", "BUG, FEATURE"};
  gen::Source src(31);
  for (int i = 0; i < 500; ++i) {
    std::string s = src.coin(50) ? src.pick(kLabels) : gen::text(src, 6);
    if (src.coin(30)) s = " " + s + (src.coin(50) ? "." : " ");
    crafted.push_back(s);
  }
  for (const auto& output : crafted) {
    if (!check_single_label(output, kLabels).passed()) continue;
    int matches = 0;
    for (const auto& label : kLabels) matches += exact_match(normalize_label_output(output), label).passed();
    EXPECT_EQ(matches, 1) << "'" << output << "'";
  }
}

RunRecord record_with_tool(std::optional<std::string> tool_output, std::string raw) {
  RunRecord r;
  r.raw_output = std::move(raw);
  if (tool_output) r.tool_trace.push_back({"DuplicationFinder", "text", *tool_output});
  return r;
}

TEST(DuplicateAlignment, Examples) {
  auto same = check_duplicate_alignment(record_with_tool("#7", "DUPLICATE #7"), Decision{"DUPLICATE", "#7"});
  EXPECT_TRUE(same.passed()) << same.detail;
  auto other = check_duplicate_alignment(record_with_tool("#7", "DUPLICATE #9"), Decision{"DUPLICATE", "#9"});
  EXPECT_EQ(other.status, VerdictStatus::fail);
  EXPECT_TRUE(mentions(other, "P2.3")) << other.detail;
  auto invented = check_duplicate_alignment(record_with_tool("null", "DUPLICATE #3"), Decision{"DUPLICATE", "#3"});
  EXPECT_EQ(invented.status, VerdictStatus::fail);
  EXPECT_TRUE(mentions(invented, "P2.2")) << invented.detail;
}

TEST(DuplicateAlignment, RemainingCells) {
  auto ignored = check_duplicate_alignment(record_with_tool("#7", "BUG"), Decision{"BUG", std::nullopt});
  EXPECT_EQ(ignored.status, VerdictStatus::fail);
  EXPECT_TRUE(mentions(ignored, "P2.1")) << ignored.detail;
  EXPECT_TRUE(check_duplicate_alignment(record_with_tool("null", "BUG"), Decision{"BUG", std::nullopt}).passed());
  EXPECT_TRUE(check_duplicate_alignment(record_with_tool("#7", "DUPLICATE 7"), Decision{"DUPLICATE", "7"}).passed());
  auto missing = check_duplicate_alignment(record_with_tool(std::nullopt, "BUG"), Decision{"BUG", std::nullopt});
  EXPECT_EQ(missing.status, VerdictStatus::error);
  EXPECT_TRUE(mentions(missing, "missing-tool-trace")) << missing.detail;
}

TEST(Decisions, ParseAndScan) {
  std::vector<std::string> ids = {"DUPLICATE"};
  EXPECT_EQ(parse_decision("DUPLICATE #12", kLabels, ids), (Decision{"DUPLICATE", "#12"}));
  EXPECT_EQ(parse_decision("BUG", kLabels, ids), (Decision{"BUG", std::nullopt}));
  EXPECT_FALSE(parse_decision("Answer: BUG", kLabels, ids));
  EXPECT_EQ(scan_decision("Answer: BUG", kLabels), (Decision{"BUG", std::nullopt}));
  EXPECT_EQ(scan_decision("I think DUPLICATE #12.", kLabels), (Decision{"DUPLICATE", "#12"}));
  EXPECT_EQ(scan_decision("DUPLICATE of something", kLabels), (Decision{"DUPLICATE", std::nullopt}));
  EXPECT_FALSE(scan_decision("no idea", kLabels));
  EXPECT_EQ(canonical_issue_id("#12"), "12");
  EXPECT_EQ(canonical_issue_id("12"), "12");
}

TEST(Deterministic, ExactRegexContains) {
  EXPECT_TRUE(exact_match("BUG", "BUG").passed());
  EXPECT_FALSE(exact_match("bug", "BUG").passed());
  EXPECT_TRUE(contains("yes indeed", "yes").passed());
  EXPECT_FALSE(contains("Yes indeed", "yes").passed());
  EXPECT_TRUE(regex_match("abc", "^a.c$").passed());
  EXPECT_FALSE(regex_match("abcd", "^a.c$").passed());
  EXPECT_TRUE(regex_match("xxabcxx", "a.c").passed());
  try {
    regex_match("abc", "([");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_pattern);
  }
}

TEST(JsonFormat, Examples) {
  EXPECT_TRUE(json_format_check(R"({"label":"BUG"})").passed());
  EXPECT_FALSE(json_format_check(R"({"label": BUG})").passed());
  std::vector<std::string> need_id = {"id"};
  auto missing = json_format_check(R"({"label":"BUG"})", need_id);
  EXPECT_FALSE(missing.passed());
  EXPECT_TRUE(mentions(missing, "id")) << missing.detail;
  EXPECT_TRUE(json_format_check(R"({"label":"BUG","id":"#1"})", need_id).passed());
  EXPECT_FALSE(json_format_check("[1,2]", need_id).passed());
  EXPECT_FALSE(json_format_check(R"({"a":1} trailing)").passed());
}

TEST(Similarity, KittenSitting) {
  // Oracle: independent Wagner-Fischer matrix gives distance 3 over 7.
  ASSERT_EQ(reference::edit_distance(U"kitten", U"sitting"), 3U);
  double expected = 1.0 - 3.0 / 7.0;
  EXPECT_NEAR(levenshtein_similarity("kitten", "sitting"), expected, 1e-12);
  EXPECT_EQ(token_jaccard("kitten", "sitting"), 0.0);
  EXPECT_NEAR(similarity("kitten", "sitting"), 0.5714, 1e-4);
}

TEST(Similarity, TokenOrderInsensitive) {
  ASSERT_EQ(reference::jaccard_term("a b c", "c b a"), 1.0);
  EXPECT_EQ(token_jaccard("a b c", "c b a"), 1.0);
  EXPECT_EQ(similarity("a b c", "c b a"), 1.0);
}

TEST(Similarity, PropertiesOverRandomStrings) {
  gen::Source src(32);
  for (int i = 0; i < 1000; ++i) {
    auto a = gen::text(src);
    auto b = src.coin(20) ? a : gen::text(src);
    double ab = similarity(a, b);
    ASSERT_EQ(ab, similarity(b, a)) << i;
    ASSERT_GE(ab, 0.0);
    ASSERT_LE(ab, 1.0);
    ASSERT_EQ(similarity(a, a), 1.0) << "'" << a << "'";
    double lev = reference::levenshtein_term(a, b);
    double jac = reference::jaccard_term(a, b);
    ASSERT_NEAR(levenshtein_similarity(a, b), lev, 1e-12) << i;
    ASSERT_NEAR(token_jaccard(a, b), jac, 1e-12) << i;
    ASSERT_GE(ab + 1e-12, lev);
    if (jac <= lev) ASSERT_NEAR(ab, lev, 1e-12);
  }
}

TEST(Similarity, EditDistanceAgreesWithMatrixOracle) {
  gen::Source src(33);
  for (int i = 0; i < 500; ++i) {
    auto a = reference::utf8_code_points(gen::text(src, 25));
    auto b = reference::utf8_code_points(gen::text(src, 25));
    ASSERT_EQ(edit_distance(a, b), reference::edit_distance(a, b)) << i;
  }
}

TEST(SimilarityThreshold, StrictComparison) {
  auto same = similarity_threshold("identical text", "identical text", 0.99);
  EXPECT_TRUE(same.passed());
  EXPECT_EQ(same.score, 1.0);
  auto kitten = similarity_threshold("kitten", "sitting", 0.6);
  EXPECT_FALSE(kitten.passed());
  ASSERT_TRUE(kitten.score.has_value());
  EXPECT_NEAR(*kitten.score, 0.5714, 1e-4);
  gen::Source src(34);
  for (int i = 0; i < 200; ++i) {
    auto a = gen::text(src);
    ASSERT_FALSE(similarity_threshold(a, src.coin(50) ? a : gen::text(src), 1.0).passed());
  }
}

TEST(SimilarityThreshold, PluggableScorer) {
  auto v = similarity_threshold("a", "b", 0.5, [](std::string_view, std::string_view) { return 0.75; });
  EXPECT_TRUE(v.passed());
  EXPECT_EQ(v.score, 0.75);
}

RunRecord judged_record() {
  RunRecord r;
  r.input_text = "create a deck";
  r.raw_output = "tap add\ntype name";
  return r;
}

TEST(LlmJudge, YesNoAndUnavailable) {
  std::string seen;
  auto yes = llm_judge(
      [&](const std::string& prompt) {
        seen = prompt;
        return std::string("  YES, no redundant steps.");
      },
      "Scenario: {scenario}\nSteps: {output}\nNo redundant steps?", judged_record());
  EXPECT_TRUE(yes.passed());
  EXPECT_EQ(seen, "Scenario: create a deck\nSteps: tap add\ntype name\nNo redundant steps?");
  EXPECT_TRUE(mentions(yes, "YES, no redundant steps.")) << yes.detail;

  auto no = llm_judge([](const std::string&) { return std::string("no"); }, "{scenario} {output}", judged_record());
  EXPECT_EQ(no.status, VerdictStatus::fail);

  auto down = llm_judge([](const std::string&) -> std::string { throw Error(ErrorKind::endpoint_unreachable, "refused"); },
                        "{scenario} {output}", judged_record());
  EXPECT_EQ(down.status, VerdictStatus::error);
  EXPECT_TRUE(mentions(down, "refused")) << down.detail;
}

TEST(LlmJudge, ScriptedJudgeThroughSutContextIsPure) {
  auto doc = testing_support::tiny_suite();
  doc["assets"]["scripted"]["judge"] = {{"by_item", {{"i1", "yes"}}}, {"fallback", "no"}};
  doc["suts"].push_back(doc["suts"][0]);
  doc["suts"][1]["sut_id"] = "judge";
  doc["suts"][1]["model"]["name"] = "judge";
  auto suite = testing_support::must_validate(doc);
  SutContext ctx(suite);
  auto record = judged_record();
  record.input_item_id = "i1";
  auto first = llm_judge(ctx, *suite.find_sut("judge"), "{scenario}: {output}", record);
  auto second = llm_judge(ctx, *suite.find_sut("judge"), "{scenario}: {output}", record);
  EXPECT_TRUE(first.passed()) << first.detail;
  EXPECT_EQ(first, second);
  record.input_item_id = "i2";
  EXPECT_EQ(llm_judge(ctx, *suite.find_sut("judge"), "{scenario}: {output}", record).status, VerdictStatus::fail);
}

TEST(Budget, ActionsAndTokens) {
  EXPECT_EQ(count_actions("a\n\nb\n  \nc"), 3);
  EXPECT_EQ(count_actions(""), 0);
  RunRecord r;
  r.raw_output = "one two\nthree\nfour five six";
  EXPECT_TRUE(check_budget(r, {3, 6}).passed());
  EXPECT_FALSE(check_budget(r, {2, std::nullopt}).passed());
  EXPECT_FALSE(check_budget(r, {std::nullopt, 5}).passed());
}

TEST(EvaluateAtomic, DispatchBudgetAndErrors) {
  OracleSpec spec;
  spec.oracle_id = "c";
  spec.kind = OracleKind::contains;
  spec.needle = "created";
  RunRecord r;
  r.raw_output = "open\ndeck created";
  OracleContext ctx;
  EXPECT_TRUE(evaluate_atomic(spec, r, ctx).passed());
  ctx.budget = Budget{1, std::nullopt};
  EXPECT_EQ(evaluate_atomic(spec, r, ctx).status, VerdictStatus::fail);
  r.error = RunError{ErrorKind::endpoint_unreachable, "refused"};
  auto err = evaluate_atomic(spec, r, ctx);
  EXPECT_EQ(err.status, VerdictStatus::error);
  EXPECT_TRUE(mentions(err, "endpoint-unreachable")) << err.detail;

  OracleSpec by_class;
  by_class.kind = OracleKind::exact_match;
  by_class.expected_from_class = true;
  RunRecord label;
  label.raw_output = "FEATURE";
  OracleContext class_ctx;
  class_ctx.item_class = "FEATURE";
  EXPECT_TRUE(evaluate_atomic(by_class, label, class_ctx).passed());

  OracleSpec bad_regex;
  bad_regex.kind = OracleKind::regex_match;
  bad_regex.pattern = "([";
  EXPECT_EQ(evaluate_atomic(bad_regex, label, OracleContext{}).status, VerdictStatus::error);
}

TEST(EvaluateAtomic, OraclesArePure) {
  gen::Source src(35);
  OracleSpec single;
  single.kind = OracleKind::single_label;
  single.labels = kLabels;
  single.id_labels = {"DUPLICATE"};
  OracleSpec sim;
  sim.kind = OracleKind::similarity_threshold;
  sim.reference = "tap add deck";
  sim.threshold = 0.4;
  for (int i = 0; i < 300; ++i) {
    RunRecord r;
    r.raw_output = src.coin(40) ? src.pick(kLabels) : gen::text(src);
    for (const auto* spec : {&single, &sim}) {
      ASSERT_EQ(evaluate_atomic(*spec, r, {}), evaluate_atomic(*spec, r, {}));
    }
  }
}

}  // namespace
}  // namespace aggrtest
