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

#include "aggrtest/aggregation.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "aggrtest/error.hpp"
#include "aggrtest/oracles.hpp"

namespace aggrtest {

namespace {

std::string histogram_text(const std::map<std::string, int>& histogram) {
  std::string text = "{";
  for (const auto& [label, count] : histogram) {
    if (text.size() > 1) text += ", ";
    text += fmt::format("{}:{}", label, count);
  }
  return text + "}";
}

}  // namespace

AggregateVerdict aggregate(std::vector<Verdict> verdicts, const AggregationSpec& spec, std::string case_id) {
  AggregateVerdict result;
  result.case_id = std::move(case_id);
  result.rule = spec;
  int total = static_cast<int>(verdicts.size());
  int errors = 0;
  for (const auto& verdict : verdicts) {
    if (verdict.status == VerdictStatus::pass) ++result.pass_count;
    if (verdict.status == VerdictStatus::error) ++errors;
  }
  result.counted = spec.exclude_errors ? total - errors : total;
  result.pass_rate = result.counted > 0 ? static_cast<double>(result.pass_count) / result.counted : 0.0;
  result.run_verdicts = std::move(verdicts);

  if (total == 0 || result.counted == 0) {
    result.status = VerdictStatus::error;
    result.detail = fmt::format("empty-after-exclusion: {} of {} runs errored", errors, total);
    return result;
  }
  if (static_cast<double>(errors) > kMaxErrorShare * total) {
    result.status = VerdictStatus::error;
    result.detail = fmt::format("{} of {} runs errored (more than {:.0f}%)", errors, total, kMaxErrorShare * 100);
    return result;
  }

  const int n = result.counted;
  const int k = result.pass_count;
  bool pass = false;
  switch (spec.rule) {
    case AggregationRule::identity: {
      if (total != 1) {
        result.status = VerdictStatus::error;
        result.detail = fmt::format("identity rule needs exactly one run, got {}", total);
        return result;
      }
      const Verdict& only = result.run_verdicts.front();
      result.status = only.status;
      result.detail = only.detail;
      return result;
    }
    case AggregationRule::strict_all:
      pass = k == n;
      result.detail = fmt::format("{}/{} runs passed; strict-all", k, n);
      break;
    case AggregationRule::majority:
      pass = 2 * k > n;
      result.detail = fmt::format("{}/{} runs passed; majority needs more than {}", k, n, n / 2.0);
      break;
    case AggregationRule::pass_rate: {
      double threshold = spec.threshold.value_or(0.0);
      pass = result.pass_rate > threshold;
      result.detail = fmt::format("pass rate {:.4f} {} threshold {}", result.pass_rate, pass ? ">" : "<=", threshold);
      break;
    }
    case AggregationRule::wilson_lower_bound: {
      double threshold = spec.threshold.value_or(0.0);
      double confidence = spec.confidence.value_or(0.95);
      result.interval = wilson_interval(k, n, confidence);
      pass = result.interval->low > threshold;
      result.detail = fmt::format("Wilson {}% interval [{:.4f}, {:.4f}]; low {} threshold {}", confidence * 100,
                                  result.interval->low, result.interval->high, pass ? ">" : "<=", threshold);
      break;
    }
  }
  if (errors > 0) result.detail += fmt::format("; {} errored run(s) {}", errors, spec.exclude_errors ? "excluded" : "counted as non-passing");
  result.status = pass ? VerdictStatus::pass : VerdictStatus::fail;
  return result;
}

AggregateVerdict aggregate_strict_all(std::vector<Verdict> verdicts) {
  return aggregate(std::move(verdicts), {AggregationRule::strict_all, std::nullopt, std::nullopt, true});
}

AggregateVerdict aggregate_majority(std::vector<Verdict> verdicts) {
  return aggregate(std::move(verdicts), {AggregationRule::majority, std::nullopt, std::nullopt, true});
}

AggregateVerdict aggregate_pass_rate(std::vector<Verdict> verdicts, double threshold) {
  return aggregate(std::move(verdicts), {AggregationRule::pass_rate, threshold, std::nullopt, true});
}

AggregateVerdict aggregate_wilson(std::vector<Verdict> verdicts, double threshold, double confidence) {
  return aggregate(std::move(verdicts), {AggregationRule::wilson_lower_bound, threshold, confidence, true});
}

double wilson_z(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorKind::bound_violation, fmt::format("confidence {} outside (0,1)", confidence));
  }
  boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, (1.0 + confidence) / 2.0);
}

Interval wilson_interval(int pass_count, int n, double confidence) {
  if (n < 1 || pass_count < 0 || pass_count > n) {
    throw Error(ErrorKind::precondition, fmt::format("Wilson interval needs 0 <= {} <= {} and n >= 1", pass_count, n));
  }
  double z = wilson_z(confidence);
  double nn = n;
  double p = pass_count / nn;
  double z2 = z * z;
  double denominator = 1.0 + z2 / nn;
  double center = (p + z2 / (2.0 * nn)) / denominator;
  double half = z / denominator * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  Interval interval{center - half, center + half};
  if (pass_count == 0) interval.low = 0.0;
  if (pass_count == n) interval.high = 1.0;
  interval.low = std::clamp(interval.low, 0.0, p);
  interval.high = std::clamp(interval.high, p, 1.0);
  return interval;
}

LabelExtractor decision_label_extractor(std::vector<std::string> labels) {
  return [labels = std::move(labels)](const RunRecord& record) -> std::optional<std::string> {
    if (record.error) return std::nullopt;
    auto decision = scan_decision(record.raw_output, labels);
    if (!decision) return std::nullopt;
    return decision->label;
  };
}

Verdict repeatability(std::span<const RunRecord> records, const LabelExtractor& extractor) {
  if (records.size() < 2) {
    return Verdict::error(fmt::format("repeatability needs at least 2 runs, got {}", records.size()));
  }
  std::map<std::string, int> histogram;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto label = extractor(records[i]);
    if (!label) return Verdict::error(fmt::format("extractor-failure: no label in run {}", i));
    ++histogram[*label];
  }
  if (histogram.size() == 1) {
    return Verdict::pass(fmt::format("{} in all {} runs", histogram.begin()->first, records.size()));
  }
  return Verdict::fail("labels differ across runs: " + histogram_text(histogram));
}

std::optional<std::string> majority_label(std::span<const RunRecord> records, const LabelExtractor& extractor) {
  std::map<std::string, int> histogram;
  for (const auto& record : records) {
    auto label = extractor(record);
    if (!label) return std::nullopt;
    ++histogram[*label];
  }
  for (const auto& [label, count] : histogram) {
    if (2 * count > static_cast<int>(records.size())) return label;
  }
  return std::nullopt;
}

AgreementResult variant_agreement(const VariantGroups& groups, VariantFilter filter, const LabelExtractor& extractor) {
  auto wanted = [&](VariantType type) {
    return filter == VariantFilter::syntactic ? is_syntactic(type) : is_semantic(type);
  };
  AgreementResult result;
  for (const auto& [base_id, runs] : groups) {
    auto base = std::find_if(runs.begin(), runs.end(),
                             [](const VariantRuns& r) { return r.variant_type == VariantType::base; });
    if (base == runs.end()) throw Error(ErrorKind::missing_base, "no BASE run set for base '" + base_id + "'");
    std::vector<const VariantRuns*> variants;
    for (const auto& r : runs) {
      if (wanted(r.variant_type)) variants.push_back(&r);
    }
    if (variants.empty()) continue;
    auto base_label = majority_label(base->records, extractor);
    Verdict verdict;
    if (!base_label) {
      verdict = Verdict::fail("BASE has no majority label");
    } else {
      std::vector<std::string> disagreeing;
      for (const auto* variant : variants) {
        auto label = majority_label(variant->records, extractor);
        if (label != base_label) {
          disagreeing.push_back(fmt::format("{} ({})", to_string(variant->variant_type), label.value_or("no majority")));
        }
      }
      if (disagreeing.empty()) {
        verdict = Verdict::pass(fmt::format("{} variant(s) agree on {}", variants.size(), *base_label));
      } else {
        std::string names;
        for (const auto& d : disagreeing) names += (names.empty() ? "" : ", ") + d;
        verdict = Verdict::fail(fmt::format("BASE majority {} but {}", *base_label, names));
      }
    }
    ++result.assessed;
    if (verdict.passed()) ++result.passing;
    result.per_base[base_id] = std::move(verdict);
  }
  result.share = result.assessed > 0 ? static_cast<double>(result.passing) / result.assessed : 0.0;
  return result;
}

}  // namespace aggrtest
