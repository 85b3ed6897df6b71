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

#include "aggrtest/runner.hpp"

#include <algorithm>
#include <thread>

#include <fmt/format.h>

#include "aggrtest/aggregation.hpp"
#include "aggrtest/error.hpp"
#include "aggrtest/http_client.hpp"
#include "aggrtest/oracles.hpp"
#include "aggrtest/seed.hpp"

namespace aggrtest {

std::vector<const InputItem*> select_items(const Suite& suite, const InputSelector& selector) {
  std::vector<const InputItem*> items;
  for (const auto& item : suite.corpus) {
    if (selector.mode == InputSelector::Mode::item && item.item_id != selector.item_id) continue;
    if (selector.mode == InputSelector::Mode::class_filter && item.class_label != selector.class_label) continue;
    if (!selector.variant_types.empty() &&
        std::find(selector.variant_types.begin(), selector.variant_types.end(), item.variant_type) ==
            selector.variant_types.end()) {
      continue;
    }
    items.push_back(&item);
  }
  return items;
}

std::vector<CaseInstance> expand_case(const Suite& suite, const TestCase& test_case) {
  auto items = select_items(suite, test_case.input);
  std::vector<CaseInstance> instances;
  instances.reserve(items.size());
  for (const auto* item : items) {
    std::string id = items.size() == 1 ? test_case.case_id : test_case.case_id + "/" + item->item_id;
    instances.push_back({std::move(id), &test_case, item});
  }
  return instances;
}

RunSet run_repeated(const SutContext& ctx, const SutSpec& sut, const TestCase& test_case, const InputItem& item,
                    const std::string& instance_id, std::uint64_t suite_seed) {
  const OracleSpec* oracle = ctx.suite->find_oracle(test_case.oracle_id);
  if (oracle == nullptr) throw Error(ErrorKind::precondition, "oracle '" + test_case.oracle_id + "' is not defined");
  std::uint64_t case_seed = derive_case_seed(suite_seed, instance_id);
  auto n = static_cast<std::size_t>(test_case.repeats);

  RunSet set;
  set.case_id = instance_id;
  set.records.resize(n);
  auto run_one = [&](std::size_t i) {
    set.records[i] = invoke(ctx, sut, item, case_seed, static_cast<int>(i), instance_id);
  };
  if (sut.model.kind == BindingKind::http_endpoint && n > 1) {
    std::size_t width = std::max<std::size_t>(1, max_inflight());
    for (std::size_t start = 0; start < n; start += width) {
      std::vector<std::thread> workers;
      for (std::size_t i = start; i < std::min(n, start + width); ++i) workers.emplace_back(run_one, i);
      for (auto& worker : workers) worker.join();
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) run_one(i);
  }

  OracleContext oracle_ctx;
  oracle_ctx.sut_context = &ctx;
  if (oracle->kind == OracleKind::llm_judge) oracle_ctx.judge = ctx.suite->find_sut(oracle->judge_sut);
  oracle_ctx.item_class = item.class_label;
  oracle_ctx.budget = test_case.budget;
  set.verdicts.reserve(n);
  for (const auto& record : set.records) set.verdicts.push_back(evaluate_atomic(*oracle, record, oracle_ctx));
  return set;
}

namespace {

void finish_share(ConsistencyResult& result) {
  result.passing = 0;
  result.assessed = 0;
  for (const auto& [subject, verdict] : result.verdicts) {
    if (verdict.status == VerdictStatus::error) continue;
    ++result.assessed;
    if (verdict.passed()) ++result.passing;
  }
  result.share = result.assessed > 0 ? static_cast<double>(result.passing) / result.assessed : 0.0;
  result.detail = fmt::format("{}/{} passing", result.passing, result.assessed);
  if (result.assessed < static_cast<int>(result.verdicts.size())) {
    result.detail += fmt::format(", {} error(s)", result.verdicts.size() - result.assessed);
  }
}

ConsistencyResult run_consistency(const Suite& suite, const TestCase& test_case, const OracleSpec& oracle,
                                  std::vector<std::string> properties, std::span<const CaseResult> instances,
                                  std::span<const CaseInstance> bound) {
  ConsistencyResult result;
  result.case_id = test_case.case_id;
  result.oracle_id = oracle.oracle_id;
  result.kind = oracle.kind;
  result.properties = std::move(properties);
  auto extractor = decision_label_extractor(suite.labels);

  if (oracle.kind == OracleKind::repeatability) {
    for (const auto& instance : instances) {
      result.verdicts[instance.case_id] = repeatability(instance.runs.records, extractor);
    }
    finish_share(result);
    return result;
  }

  VariantGroups groups;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const InputItem& item = *bound[i].item;
    groups[item.base_id].push_back({item.item_id, item.variant_type, instances[i].runs.records});
  }
  for (auto it = groups.begin(); it != groups.end();) {
    bool has_base = std::any_of(it->second.begin(), it->second.end(),
                                [](const VariantRuns& r) { return r.variant_type == VariantType::base; });
    if (has_base) {
      ++it;
      continue;
    }
    result.verdicts[it->first] = Verdict::error("missing-base: the case does not run BASE item " + it->first);
    it = groups.erase(it);
  }
  auto filter = oracle.kind == OracleKind::paraphrase_agreement ? VariantFilter::semantic : VariantFilter::syntactic;
  auto agreement = variant_agreement(groups, filter, extractor);
  for (auto& [base_id, verdict] : agreement.per_base) result.verdicts[base_id] = std::move(verdict);
  finish_share(result);
  return result;
}

std::optional<bool> tool_returned_id(const CaseResult& result) {
  if (result.runs.records.empty()) return std::nullopt;
  for (const auto& call : result.runs.records.front().tool_trace) {
    if (call.tool == kDuplicationFinderTool) return call.output != "null";
  }
  return std::nullopt;
}

void add_metric(std::vector<Metric>& metrics, const std::string& oracle_id, const std::string& scope, bool passed) {
  auto it = std::find_if(metrics.begin(), metrics.end(),
                         [&](const Metric& m) { return m.oracle_id == oracle_id && m.scope == scope; });
  if (it == metrics.end()) {
    metrics.push_back({oracle_id, scope, 0, 0, 0.0});
    it = std::prev(metrics.end());
  }
  ++it->total;
  if (passed) ++it->passing;
}

std::vector<Metric> compute_metrics(const Suite& suite, const RunReport& report) {
  std::vector<Metric> metrics;
  for (const auto& result : report.cases) {
    bool passed = result.aggregate.status == VerdictStatus::pass;
    add_metric(metrics, result.oracle_id, "all", passed);
    const OracleSpec* oracle = suite.find_oracle(result.oracle_id);
    if (oracle != nullptr && oracle->kind == OracleKind::duplicate_alignment) {
      if (auto found = tool_returned_id(result)) add_metric(metrics, result.oracle_id, *found ? "tool=id" : "tool=null", passed);
    }
  }
  for (const auto& consistency : report.consistency) {
    for (const auto& [subject, verdict] : consistency.verdicts) {
      if (verdict.status == VerdictStatus::error) continue;
      add_metric(metrics, consistency.oracle_id, "all", verdict.passed());
    }
  }
  for (auto& metric : metrics) {
    metric.share = metric.total > 0 ? static_cast<double>(metric.passing) / metric.total : 0.0;
  }
  return metrics;
}

}  // namespace

RunReport run_suite(const Suite& suite, const SutContext& ctx, const RunOptions& options) {
  if (options.sut_id && suite.find_sut(*options.sut_id) == nullptr) {
    throw Error(ErrorKind::precondition, "suite has no SUT '" + *options.sut_id + "'");
  }
  RunReport report;
  report.suite_id = suite.suite_id;
  report.suite_digest = suite_digest(suite);
  report.corpus_digest = corpus_digest(suite.corpus);
  report.seed = options.seed.value_or(suite.seed);
  report.sut_filter = options.sut_id;
  report.suts = suite.suts;

  for (const auto& test_case : suite.cases) {
    if (options.sut_id && test_case.sut_id != *options.sut_id) continue;
    const SutSpec* sut = suite.find_sut(test_case.sut_id);
    if (sut == nullptr) throw Error(ErrorKind::precondition, "SUT '" + test_case.sut_id + "' is not defined");
    auto instances = expand_case(suite, test_case);
    std::size_t first = report.cases.size();
    for (const auto& instance : instances) {
      CaseResult result;
      result.case_id = instance.instance_id;
      result.definition_id = test_case.case_id;
      result.sut_id = test_case.sut_id;
      result.item_id = instance.item->item_id;
      result.oracle_id = test_case.oracle_id;
      result.properties = test_case.properties;
      result.case_seed = derive_case_seed(report.seed, instance.instance_id);
      result.runs = run_repeated(ctx, *sut, test_case, *instance.item, instance.instance_id, report.seed);
      result.aggregate = aggregate(result.runs.verdicts, test_case.aggregation, instance.instance_id);
      report.cases.push_back(std::move(result));
    }

    // Consistency oracles named by the case's properties, one result each.
    std::vector<std::pair<const OracleSpec*, std::vector<std::string>>> checkers;
    for (const auto& property_id : test_case.properties) {
      const Property* property = suite.find_property(property_id);
      const OracleSpec* oracle = property == nullptr ? nullptr : suite.find_oracle(property->oracle_ref);
      if (oracle == nullptr || is_atomic(oracle->kind)) continue;
      auto it = std::find_if(checkers.begin(), checkers.end(), [&](const auto& c) { return c.first == oracle; });
      if (it == checkers.end()) {
        checkers.push_back({oracle, {property_id}});
      } else {
        it->second.push_back(property_id);
      }
    }
    std::span<const CaseResult> case_results(report.cases.data() + first, instances.size());
    for (auto& [oracle, properties] : checkers) {
      report.consistency.push_back(
          run_consistency(suite, test_case, *oracle, std::move(properties), case_results, instances));
    }
  }

  for (const auto& result : report.cases) {
    switch (result.aggregate.status) {
      case VerdictStatus::pass: ++report.summary.passed; break;
      case VerdictStatus::fail: ++report.summary.failed; break;
      case VerdictStatus::error: ++report.summary.errored; break;
    }
  }
  report.metrics = compute_metrics(suite, report);
  return report;
}

int run_exit_code(const RunReport& report) {
  std::size_t errored = 0, failed = 0;
  for (const auto& c : report.cases) {
    errored += c.aggregate.status == VerdictStatus::error;
    failed += c.aggregate.status == VerdictStatus::fail;
  }
  if (!report.cases.empty() && errored == report.cases.size()) return 3;
  return failed > 0 || errored > 0 ? 1 : 0;
}

}  // namespace aggrtest
