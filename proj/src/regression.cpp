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

#include "aggrtest/regression.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "aggrtest/error.hpp"
#include "aggrtest/http_client.hpp"
#include "aggrtest/report.hpp"

namespace aggrtest {

namespace {

constexpr std::array<Delta, 5> kDeltas = {Delta::stable_pass, Delta::stable_fail, Delta::improvement,
                                          Delta::regression, Delta::error_involved};

std::vector<std::string> sut_identities(const RunReport& report) {
  std::vector<std::string> out;
  for (const auto& sut : report.suts) out.push_back(sut.sut_id + "=" + sut.model.name);
  return out;
}

}  // namespace

std::string_view to_string(Delta delta) noexcept {
  switch (delta) {
    case Delta::stable_pass: return "stable-pass";
    case Delta::stable_fail: return "stable-fail";
    case Delta::improvement: return "improvement";
    case Delta::regression: return "regression";
    case Delta::error_involved: return "error-involved";
  }
  return "unknown";
}

Delta classify_delta(VerdictStatus a, VerdictStatus b) noexcept {
  if (a == VerdictStatus::error || b == VerdictStatus::error) return Delta::error_involved;
  if (a == VerdictStatus::pass) return b == VerdictStatus::pass ? Delta::stable_pass : Delta::regression;
  return b == VerdictStatus::pass ? Delta::improvement : Delta::stable_fail;
}

int RegressionReport::count(Delta delta) const {
  auto it = counts.find(delta);
  return it == counts.end() ? 0 : it->second;
}

RegressionReport diff_reports(const RunReport& a, const RunReport& b) {
  if (a.suite_digest != b.suite_digest) {
    throw Error(ErrorKind::suite_mismatch,
                fmt::format("suite digests differ ({} vs {})", a.suite_digest.substr(0, 12), b.suite_digest.substr(0, 12)));
  }
  if (a.corpus_digest != b.corpus_digest) {
    throw Error(ErrorKind::suite_mismatch, fmt::format("corpus digests differ ({} vs {})", a.corpus_digest.substr(0, 12),
                                                       b.corpus_digest.substr(0, 12)));
  }
  std::size_t common = std::min(a.cases.size(), b.cases.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (a.cases[i].case_id != b.cases[i].case_id) {
      throw Error(ErrorKind::suite_mismatch,
                  fmt::format("case {} differs: '{}' vs '{}'", i, a.cases[i].case_id, b.cases[i].case_id));
    }
  }
  if (a.cases.size() != b.cases.size()) {
    const auto& longer = a.cases.size() > b.cases.size() ? a : b;
    throw Error(ErrorKind::suite_mismatch,
                fmt::format("case '{}' is only in report {}", longer.cases[common].case_id, &longer == &a ? "A" : "B"));
  }

  RegressionReport report;
  report.suite_id = a.suite_id;
  report.suite_digest = a.suite_digest;
  report.sut_a = sut_identities(a);
  report.sut_b = sut_identities(b);
  for (auto delta : kDeltas) report.counts[delta] = 0;
  for (std::size_t i = 0; i < common; ++i) {
    const auto& ca = a.cases[i].aggregate;
    const auto& cb = b.cases[i].aggregate;
    RegressionRow row;
    row.case_id = a.cases[i].case_id;
    row.status_a = ca.status;
    row.status_b = cb.status;
    row.delta = classify_delta(ca.status, cb.status);
    row.pass_rate_a = ca.pass_rate;
    row.pass_rate_b = cb.pass_rate;
    row.pass_rate_delta = cb.pass_rate - ca.pass_rate;
    row.degradation = (row.delta == Delta::stable_pass || row.delta == Delta::stable_fail) && row.pass_rate_delta < 0.0;
    ++report.counts[row.delta];
    if (row.degradation) ++report.degradations;
    report.rows.push_back(std::move(row));
  }
  return report;
}

nlohmann::json to_json(const RegressionReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"case_id", row.case_id},
                    {"status_a", to_string(row.status_a)},
                    {"status_b", to_string(row.status_b)},
                    {"delta", to_string(row.delta)},
                    {"pass_rate_a", row.pass_rate_a},
                    {"pass_rate_b", row.pass_rate_b},
                    {"pass_rate_delta", row.pass_rate_delta},
                    {"degradation", row.degradation}});
  }
  nlohmann::json counts = nlohmann::json::object();
  for (auto delta : kDeltas) counts[std::string(to_string(delta))] = report.count(delta);
  counts["degradation"] = report.degradations;
  return {{"schema_version", kReportSchemaVersion},
          {"suite_id", report.suite_id},
          {"suite_digest", report.suite_digest},
          {"sut_a", report.sut_a},
          {"sut_b", report.sut_b},
          {"summary", counts},
          {"rows", rows}};
}

std::string render_regression_text(const RegressionReport& report) {
  std::string out = fmt::format("suite {}\nA: {}\nB: {}\n", report.suite_id, fmt::join(report.sut_a, ", "),
                                fmt::join(report.sut_b, ", "));
  std::size_t width = 4;
  for (const auto& row : report.rows) width = std::max(width, row.case_id.size());
  out += fmt::format("{:<{}}  {:<6}  {:<6}  {:<14}  {:>7}  {:>7}  {:>8}\n", "CASE", width, "A", "B", "DELTA", "RATE-A",
                     "RATE-B", "CHANGE");
  for (const auto& row : report.rows) {
    out += fmt::format("{:<{}}  {:<6}  {:<6}  {:<14}  {:>7.3f}  {:>7.3f}  {:>+8.3f}{}\n", row.case_id, width,
                       to_string(row.status_a), to_string(row.status_b), to_string(row.delta), row.pass_rate_a,
                       row.pass_rate_b, row.pass_rate_delta, row.degradation ? "  degradation" : "");
  }
  out += fmt::format("\nsummary: {} regression, {} improvement, {} stable-pass, {} stable-fail, {} error-involved, "
                     "{} degradation\n",
                     report.count(Delta::regression), report.count(Delta::improvement),
                     report.count(Delta::stable_pass), report.count(Delta::stable_fail),
                     report.count(Delta::error_involved), report.degradations);
  return out;
}

SweepResult sweep(const Suite& suite, std::span<const SutSpec> variants, const RunOptions& options,
                  const HttpGenerator& transport) {
  if (variants.size() < 2) {
    throw Error(ErrorKind::precondition, fmt::format("a sweep needs at least 2 SUT variants, got {}", variants.size()));
  }
  SweepResult result;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const SutSpec& variant = variants[v];
    auto slot = std::find_if(suite.suts.begin(), suite.suts.end(),
                             [&](const SutSpec& s) { return s.sut_id == variant.sut_id; });
    if (slot == suite.suts.end()) {
      throw Error(ErrorKind::precondition, "variant " + std::to_string(v) + " names unknown SUT '" + variant.sut_id + "'");
    }
    if (slot->component != variant.component) {
      throw Error(ErrorKind::precondition, fmt::format("variant {} changes the component of '{}' from {} to {}", v,
                                                       variant.sut_id, slot->component, variant.component));
    }
    Suite bound = suite;
    bound.suts[static_cast<std::size_t>(slot - suite.suts.begin())] = variant;
    SutContext ctx(bound, transport ? transport : HttpGenerator(http_generate));
    result.reports.push_back(run_suite(bound, ctx, options));
    result.variant_labels.push_back(fmt::format("v{}:{}", v, variant.model.name));
  }
  for (const auto& c : result.reports.front().cases) result.case_ids.push_back(c.case_id);
  result.cells.resize(result.case_ids.size());
  for (std::size_t i = 0; i < result.case_ids.size(); ++i) {
    for (const auto& report : result.reports) result.cells[i].push_back(report.cases[i].aggregate);
  }
  return result;
}

nlohmann::json to_json(const SweepResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < result.case_ids.size(); ++i) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& cell : result.cells[i]) {
      cells.push_back({{"status", to_string(cell.status)},
                       {"pass_count", cell.pass_count},
                       {"counted", cell.counted},
                       {"pass_rate", cell.pass_rate}});
    }
    rows.push_back({{"case_id", result.case_ids[i]}, {"cells", cells}});
  }
  return {{"schema_version", kReportSchemaVersion}, {"variants", result.variant_labels}, {"rows", rows}};
}

std::string render_sweep_text(const SweepResult& result) {
  std::size_t width = 4;
  for (const auto& id : result.case_ids) width = std::max(width, id.size());
  std::string out = fmt::format("{:<{}}", "CASE", width);
  for (const auto& label : result.variant_labels) out += fmt::format("  {:<18}", label);
  out += "\n";
  for (std::size_t i = 0; i < result.case_ids.size(); ++i) {
    out += fmt::format("{:<{}}", result.case_ids[i], width);
    for (const auto& cell : result.cells[i]) {
      out += fmt::format("  {:<18}", fmt::format("{} {}/{}", to_string(cell.status), cell.pass_count, cell.counted));
    }
    out += "\n";
  }
  return out;
}

}  // namespace aggrtest
