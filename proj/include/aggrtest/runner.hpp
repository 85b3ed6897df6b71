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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aggrtest/model.hpp"
#include "aggrtest/suite.hpp"
#include "aggrtest/sut.hpp"

namespace aggrtest {

struct RunSet {
  std::string case_id;
  std::vector<RunRecord> records;  // index = run index
  std::vector<Verdict> verdicts;   // aligned with records

  bool operator==(const RunSet&) const = default;
};

// A case bound to one corpus item. A selector matching several items yields
// one instance per item with id "<case_id>/<item_id>"; a single match keeps
// the plain case id.
struct CaseInstance {
  std::string instance_id;
  const TestCase* test_case = nullptr;
  const InputItem* item = nullptr;
};

std::vector<const InputItem*> select_items(const Suite& suite, const InputSelector& selector);
std::vector<CaseInstance> expand_case(const Suite& suite, const TestCase& test_case);

// N runs of one instance, seeded from derive_case_seed(suite_seed,
// instance_id). Runs against http bindings execute concurrently; records
// are always ordered by run index.
RunSet run_repeated(const SutContext& ctx, const SutSpec& sut, const TestCase& test_case, const InputItem& item,
                    const std::string& instance_id, std::uint64_t suite_seed);

struct CaseResult {
  std::string case_id;       // instance id
  std::string definition_id; // TestCase::case_id
  std::string sut_id;
  std::string item_id;
  std::string oracle_id;
  std::vector<std::string> properties;
  std::uint64_t case_seed = 0;
  RunSet runs;
  AggregateVerdict aggregate;

  bool operator==(const CaseResult&) const = default;
};

// Outcome of one consistency oracle (O4-O6 style) over one case definition.
// Reported as metrics; not part of the pass/fail exit status.
struct ConsistencyResult {
  std::string case_id;  // TestCase::case_id
  std::string oracle_id;
  OracleKind kind = OracleKind::repeatability;
  std::vector<std::string> properties;
  // Instance id (repeatability) or base id (agreement) -> verdict.
  std::map<std::string, Verdict> verdicts;
  int passing = 0;
  int assessed = 0;
  double share = 0.0;
  std::string detail;

  bool operator==(const ConsistencyResult&) const = default;
};

// Share of passing subjects for one oracle. scope is "all", or "tool=id" /
// "tool=null" for duplicate-alignment oracles.
struct Metric {
  std::string oracle_id;
  std::string scope;
  int passing = 0;
  int total = 0;
  double share = 0.0;

  bool operator==(const Metric&) const = default;
};

struct RunSummary {
  int passed = 0;
  int failed = 0;
  int errored = 0;

  bool operator==(const RunSummary&) const = default;
};

inline constexpr int kReportSchemaVersion = 1;

struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string suite_id;
  std::string suite_digest;
  std::string corpus_digest;
  std::uint64_t seed = 0;
  std::optional<std::string> sut_filter;
  // Configuration echo of every SUT that ran.
  std::vector<SutSpec> suts;
  std::vector<CaseResult> cases;
  std::vector<ConsistencyResult> consistency;
  std::vector<Metric> metrics;
  RunSummary summary;

  bool operator==(const RunReport&) const = default;
};

struct RunOptions {
  // Overrides the suite seed.
  std::optional<std::uint64_t> seed;
  // Runs only the cases of this SUT.
  std::optional<std::string> sut_id;
};

// Throws Error(precondition) when sut_id names no SUT of the suite.
RunReport run_suite(const Suite& suite, const SutContext& ctx, const RunOptions& options = {});

// Exit status of `run`: 0 all pass, 3 when every case errored, 1 otherwise.
int run_exit_code(const RunReport& report);

}  // namespace aggrtest
