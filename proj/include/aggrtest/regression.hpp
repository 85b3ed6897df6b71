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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aggrtest/runner.hpp"

namespace aggrtest {

enum class Delta { stable_pass, stable_fail, improvement, regression, error_involved };

std::string_view to_string(Delta delta) noexcept;
Delta classify_delta(VerdictStatus a, VerdictStatus b) noexcept;

struct RegressionRow {
  std::string case_id;
  VerdictStatus status_a = VerdictStatus::error;
  VerdictStatus status_b = VerdictStatus::error;
  Delta delta = Delta::error_involved;
  double pass_rate_a = 0.0;
  double pass_rate_b = 0.0;
  // pass_rate_b - pass_rate_a.
  double pass_rate_delta = 0.0;
  // Lower pass rate without an aggregate flip; context only.
  bool degradation = false;

  bool operator==(const RegressionRow&) const = default;
};

struct RegressionReport {
  std::string suite_id;
  std::string suite_digest;
  // "sut_id=model name" per SUT echoed in each report.
  std::vector<std::string> sut_a;
  std::vector<std::string> sut_b;
  std::vector<RegressionRow> rows;
  std::map<Delta, int> counts;
  int degradations = 0;

  int count(Delta delta) const;
  bool operator==(const RegressionReport&) const = default;
};

// Throws Error(suite_mismatch) naming the first differing case id, or the
// differing digest, when the reports do not cover the same suite.
RegressionReport diff_reports(const RunReport& a, const RunReport& b);

nlohmann::json to_json(const RegressionReport& report);
std::string render_regression_text(const RegressionReport& report);

struct SweepResult {
  // "v<index>:<model name>" per variant, in input order.
  std::vector<std::string> variant_labels;
  std::vector<std::string> case_ids;
  // cells[case][variant]
  std::vector<std::vector<AggregateVerdict>> cells;
  // Full report per variant; any two can go through diff_reports.
  std::vector<RunReport> reports;
};

// Runs the suite once per SUT variant. Each variant replaces the suite SUT
// with the same sut_id and must keep its component. Throws
// Error(precondition) for fewer than two variants or an unknown sut_id.
SweepResult sweep(const Suite& suite, std::span<const SutSpec> variants, const RunOptions& options = {},
                  const HttpGenerator& transport = {});

nlohmann::json to_json(const SweepResult& result);
std::string render_sweep_text(const SweepResult& result);

}  // namespace aggrtest
