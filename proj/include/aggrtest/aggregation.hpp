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

// Aggregated oracles: N per-run verdicts -> one AggregateVerdict, plus the
// consistency checks computed over whole run sets.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aggrtest/model.hpp"
#include "aggrtest/sut.hpp"

namespace aggrtest {

// An aggregate whose error verdicts exceed this share of all runs is itself
// an error.
inline constexpr double kMaxErrorShare = 0.2;

AggregateVerdict aggregate(std::vector<Verdict> verdicts, const AggregationSpec& spec, std::string case_id = {});

AggregateVerdict aggregate_strict_all(std::vector<Verdict> verdicts);
// Exact ties fail.
AggregateVerdict aggregate_majority(std::vector<Verdict> verdicts);
// Passes iff pass_rate > threshold.
AggregateVerdict aggregate_pass_rate(std::vector<Verdict> verdicts, double threshold);
// Passes iff the Wilson lower bound > threshold.
AggregateVerdict aggregate_wilson(std::vector<Verdict> verdicts, double threshold, double confidence);

// Two-sided normal quantile for the confidence level, e.g. 1.95996 for 0.95.
double wilson_z(double confidence);
// Wilson score interval; low is exactly 0 when pass_count = 0 and high is
// exactly 1 when pass_count = n.
Interval wilson_interval(int pass_count, int n, double confidence);

// Label of one run, or nullopt when none can be extracted.
using LabelExtractor = std::function<std::optional<std::string>(const RunRecord&)>;

// First member label anywhere in the output (lenient scan). Errored records
// yield nullopt.
LabelExtractor decision_label_extractor(std::vector<std::string> labels);

// O4: one identical label over every run. Error verdict when fewer than two
// records are given or the extractor fails on any of them.
Verdict repeatability(std::span<const RunRecord> records, const LabelExtractor& extractor);

// Label with a strict majority of the runs, nullopt when there is none or
// any run lacks a label.
std::optional<std::string> majority_label(std::span<const RunRecord> records, const LabelExtractor& extractor);

struct VariantRuns {
  std::string item_id;
  VariantType variant_type = VariantType::base;
  std::vector<RunRecord> records;
};

// base_id -> run sets of the base and its variants.
using VariantGroups = std::map<std::string, std::vector<VariantRuns>>;

enum class VariantFilter { syntactic, semantic };

struct AgreementResult {
  std::map<std::string, Verdict> per_base;
  int passing = 0;
  // Bases with a pass or fail verdict; error verdicts stay out of the share.
  int assessed = 0;
  double share = 0.0;

  bool operator==(const AgreementResult&) const = default;
};

// O5 (semantic) / O6 (syntactic): a base passes iff every filtered variant's
// majority label equals the base's. Bases without a filtered variant are not
// subjects. Throws Error(missing_base) when a group has no BASE run set.
AgreementResult variant_agreement(const VariantGroups& groups, VariantFilter filter, const LabelExtractor& extractor);

}  // namespace aggrtest
