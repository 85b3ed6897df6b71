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

#include <algorithm>

#include <gtest/gtest.h>

#include "aggrtest/error.hpp"
#include "aggrtest/suite.hpp"
#include "../support/fixtures.hpp"

namespace aggrtest {
namespace {

using testing_support::bundled;
using testing_support::must_validate;
using testing_support::tiny_suite;

bool has_error(const SuiteValidation& v, ErrorKind kind, std::string_view path_fragment,
               std::string_view message_fragment = {}) {
  return std::any_of(v.errors.begin(), v.errors.end(), [&](const ValidationError& e) {
    return e.kind == kind && e.path.find(path_fragment) != std::string::npos &&
           e.message.find(message_fragment) != std::string::npos;
  });
}

std::string dump(const SuiteValidation& v) {
  std::string all;
  for (const auto& e : v.errors) all += format_validation_error(e) + "\n";
  return all;
}

TEST(LabelSet, CanonicalOrderAndMembership) {
  EXPECT_EQ(label_set(), (std::vector<std::string>{"BUG", "FEATURE", "INVALID", "DUPLICATE"}));
  EXPECT_TRUE(is_member(label_set(), "DUPLICATE"));
  EXPECT_FALSE(is_member(label_set(), "QUESTION"));
}

TEST(Suite, BundledClassifyIssueReportIsValid) {
  auto v = load_suite(bundled("classify_issue_report") / "suite.json");
  ASSERT_TRUE(v.ok()) << dump(v);
  EXPECT_EQ(v.suite->goals.size(), 3U);
  EXPECT_EQ(v.suite->properties.size(), 9U);
  EXPECT_EQ(v.suite->labels, label_set());
  const SutSpec* sut = v.suite->find_sut("classifier");
  ASSERT_NE(sut, nullptr);
  EXPECT_EQ(sut->model.name, "Mistral-7B-v0.1");
  EXPECT_EQ(sut->configuration.temperature, 0.0);
  EXPECT_EQ(sut->configuration.top_p, 1.0);
  EXPECT_EQ(sut->configuration.n, 1);
  EXPECT_EQ(sut->configuration.max_tokens, 16);
  EXPECT_EQ(sut->tools, (std::vector<std::string>{"DuplicationFinder@0.3"}));
}

TEST(Suite, BundledTable1IsValid) {
  auto v = load_suite(bundled("table1") / "suite.json");
  ASSERT_TRUE(v.ok()) << dump(v);
  EXPECT_EQ(v.suite->cases.size(), 2U);
  EXPECT_EQ(v.suite->distributions.size(), 2U);
}

TEST(Suite, TinySuiteResolvesEverything) {
  auto suite = must_validate(tiny_suite());
  EXPECT_EQ(suite.find_case("c1")->repeats, 3);
  EXPECT_EQ(suite.find_oracle("O1")->kind, OracleKind::exact_match);
  EXPECT_EQ(suite.find_item("i2")->class_label, "FEATURE");
  EXPECT_EQ(suite.prompts.at("p"), "Classify: {input}");
}

TEST(Suite, RepeatsOneRequiresIdentityRule) {
  auto doc = tiny_suite();
  doc["cases"][0]["repeats"] = 1;
  doc["cases"][0]["aggregation"] = {{"rule", "majority"}};
  auto v = validate_suite(doc);
  EXPECT_FALSE(v.ok());
  EXPECT_FALSE(v.suite.has_value());
  EXPECT_TRUE(has_error(v, ErrorKind::bound_violation, "/cases/0/aggregation")) << dump(v);
}

TEST(Suite, UnresolvedOracleIsListedByName) {
  auto doc = tiny_suite();
  doc["properties"][0]["oracle_ref"] = "O99";
  auto v = validate_suite(doc);
  EXPECT_TRUE(has_error(v, ErrorKind::unresolved_reference, "/properties/0/oracle_ref", "O99")) << dump(v);
}

TEST(Suite, BoundViolationsNamePaths) {
  auto doc = tiny_suite();
  doc["suts"][0]["configuration"]["top_p"] = 0.0;
  doc["suts"][0]["configuration"]["temperature"] = -0.1;
  doc["suts"][0]["configuration"]["max_tokens"] = 0;
  auto v = validate_suite(doc);
  EXPECT_TRUE(has_error(v, ErrorKind::bound_violation, "/suts/0/configuration/top_p")) << dump(v);
  EXPECT_TRUE(has_error(v, ErrorKind::bound_violation, "/suts/0/configuration/temperature")) << dump(v);
  EXPECT_TRUE(has_error(v, ErrorKind::bound_violation, "/suts/0/configuration/max_tokens")) << dump(v);
}

TEST(Suite, ReportsEveryErrorNotJustTheFirst) {
  auto doc = tiny_suite();
  doc["suts"].push_back(doc["suts"][0]);
  doc["cases"][0]["sut_id"] = "nope";
  doc["cases"][0]["input"] = {{"item", "missing-item"}};
  auto v = validate_suite(doc);
  EXPECT_TRUE(has_error(v, ErrorKind::duplicate_id, "/suts/1")) << dump(v);
  EXPECT_TRUE(has_error(v, ErrorKind::unresolved_reference, "/cases/0/sut_id", "nope")) << dump(v);
  EXPECT_TRUE(has_error(v, ErrorKind::unresolved_reference, "/cases/0/input", "missing-item")) << dump(v);
}

TEST(Suite, EndpointPresentExactlyForHttp) {
  auto doc = tiny_suite();
  doc["suts"][0]["model"] = {{"kind", "http-endpoint"}, {"name", "m"}};
  EXPECT_FALSE(validate_suite(doc).ok());
  doc["suts"][0]["model"]["endpoint"] = "http://127.0.0.1:9/v1/chat/completions";
  EXPECT_TRUE(validate_suite(doc).ok()) << dump(validate_suite(doc));
  auto scripted = tiny_suite();
  scripted["suts"][0]["model"]["endpoint"] = "http://127.0.0.1:9";
  EXPECT_FALSE(validate_suite(scripted).ok());
}

TEST(Suite, GoalWithoutPropertyIsRejected) {
  auto doc = tiny_suite();
  doc["goals"].push_back({{"goal_id", "G2"}, {"description", "lonely"}});
  auto v = validate_suite(doc);
  EXPECT_FALSE(v.ok());
  EXPECT_TRUE(has_error(v, ErrorKind::bound_violation, "/goals/1")) << dump(v);
}

TEST(Suite, CasePropertyMustResolve) {
  auto doc = tiny_suite();
  doc["cases"][0]["properties"] = {"P7"};
  auto v = validate_suite(doc);
  EXPECT_TRUE(has_error(v, ErrorKind::unresolved_reference, "/cases/0/properties/0", "P7")) << dump(v);
}

TEST(Suite, SimilarityThresholdMustBeInUnitInterval) {
  auto doc = tiny_suite();
  doc["oracles"][0] = {{"oracle_id", "O1"}, {"kind", "similarity-threshold"},
                       {"parameters", {{"reference", "x"}, {"threshold", 1.5}}}};
  auto v = validate_suite(doc);
  EXPECT_TRUE(has_error(v, ErrorKind::bound_violation, "/oracles/0/parameters/threshold")) << dump(v);
}

TEST(Suite, JudgeMustDifferFromSutUnderTest) {
  auto doc = tiny_suite();
  doc["oracles"][0] = {{"oracle_id", "O1"}, {"kind", "llm-judge"},
                       {"parameters", {{"judge", "s"}, {"rubric", "{scenario} {output} ok?"}}}};
  auto v = validate_suite(doc);
  EXPECT_FALSE(v.ok());
  EXPECT_TRUE(has_error(v, ErrorKind::bound_violation, "/cases/0/oracle", "differ")) << dump(v);

  doc["suts"].push_back(doc["suts"][0]);
  doc["suts"][1]["sut_id"] = "judge";
  doc["oracles"][0]["parameters"]["judge"] = "judge";
  auto ok = validate_suite(doc);
  EXPECT_TRUE(ok.ok()) << dump(ok);
}

TEST(Suite, AggregationParameterPresence) {
  auto doc = tiny_suite();
  doc["cases"][0]["aggregation"] = {{"rule", "pass-rate"}};
  EXPECT_TRUE(has_error(validate_suite(doc), ErrorKind::bound_violation, "/cases/0/aggregation"));
  doc["cases"][0]["aggregation"] = {{"rule", "wilson-lower-bound"}, {"threshold", 0.5}};
  EXPECT_TRUE(has_error(validate_suite(doc), ErrorKind::bound_violation, "/cases/0/aggregation"));
  doc["cases"][0]["aggregation"] = {{"rule", "wilson-lower-bound"}, {"threshold", 0.5}, {"confidence", 0.95}};
  EXPECT_TRUE(validate_suite(doc).ok());
}

TEST(Suite, StochasticProbabilitiesMustSumToOne) {
  auto doc = tiny_suite();
  doc["assets"]["distributions"] = {
      {"d", {{"entries", {{"*", {{{"output", "a"}, {"probability", 0.5}}, {{"output", "b"}, {"probability", 0.4}}}}}}}}};
  doc["suts"][0]["model"] = {{"kind", "stochastic"}, {"name", "d"}};
  EXPECT_FALSE(validate_suite(doc).ok());
  doc["assets"]["distributions"]["d"]["entries"]["*"][1]["probability"] = 0.5;
  auto v = validate_suite(doc);
  EXPECT_TRUE(v.ok()) << dump(v);
}

TEST(Suite, RoundTripThroughCanonicalDocument) {
  for (const char* name : {"classify_issue_report", "table1"}) {
    auto loaded = load_suite(bundled(name) / "suite.json");
    ASSERT_TRUE(loaded.ok()) << dump(loaded);
    auto again = validate_suite(serialize_suite(*loaded.suite));
    ASSERT_TRUE(again.ok()) << name << "\n" << dump(again);
    EXPECT_TRUE(*again.suite == *loaded.suite) << name;
  }
  auto tiny = must_validate(tiny_suite());
  EXPECT_TRUE(must_validate(serialize_suite(tiny)) == tiny);
}

TEST(Suite, DigestIgnoresModelButNotCases) {
  auto a = must_validate(tiny_suite());
  auto doc = tiny_suite();
  doc["suts"][0]["configuration"]["temperature"] = 0.7;
  doc["seed"] = 99;
  auto b = must_validate(doc);
  EXPECT_EQ(suite_digest(a), suite_digest(b));
  doc["cases"][0]["repeats"] = 4;
  EXPECT_NE(suite_digest(a), suite_digest(must_validate(doc)));
}

TEST(Suite, BindReplacesBySutId) {
  auto doc = tiny_suite();
  auto replacement = doc["suts"][0];
  replacement["configuration"]["temperature"] = 0.5;
  bind_suts(doc, {replacement});
  EXPECT_EQ(doc["suts"][0]["configuration"]["temperature"], 0.5);
  replacement["sut_id"] = "unknown";
  EXPECT_THROW(bind_suts(doc, {replacement}), Error);
}

TEST(Suite, MissingAssetFileIsUnresolved) {
  auto doc = tiny_suite();
  doc["assets"]["prompts"]["p"] = "does/not/exist.txt";
  auto v = validate_suite(doc, testing_support::scratch_dir("suite"));
  EXPECT_TRUE(has_error(v, ErrorKind::unresolved_reference, "/assets/prompts/p")) << dump(v);
}

TEST(Suite, WrongSchemaVersionIsSchemaError) {
  auto doc = tiny_suite();
  doc["schema_version"] = 2;
  auto v = validate_suite(doc);
  EXPECT_TRUE(has_error(v, ErrorKind::schema, "/schema_version")) << dump(v);
}

}  // namespace
}  // namespace aggrtest
