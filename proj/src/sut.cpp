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

#include "aggrtest/sut.hpp"

#include <algorithm>
#include <chrono>

#include "aggrtest/http_client.hpp"
#include "aggrtest/oracles.hpp"
#include "aggrtest/suite.hpp"
#include "aggrtest/text.hpp"

namespace aggrtest {

namespace {

// Largest distance d with 1 - d/longest >= cutoff, evaluated exactly as
// levenshtein_similarity does.
std::optional<std::size_t> distance_limit(std::size_t longest, double cutoff) {
  double span = static_cast<double>(longest);
  auto limit = std::min(longest, static_cast<std::size_t>(std::max(0.0, (1.0 - cutoff) * span)) + 1);
  while (1.0 - static_cast<double>(limit) / span < cutoff) {
    if (limit == 0) return std::nullopt;
    --limit;
  }
  return limit;
}

// Edit distance when it is at most `limit`, nullopt otherwise.
std::optional<std::size_t> bounded_edit_distance(std::u32string_view a, std::u32string_view b, std::size_t limit) {
  if (a.size() < b.size()) std::swap(a, b);
  if (a.size() - b.size() > limit) return std::nullopt;
  const std::size_t over = limit + 1;
  std::vector<std::size_t> row(b.size() + 1, over);
  for (std::size_t j = 0; j <= std::min(b.size(), limit); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t lo = i > limit ? i - limit : 1;
    std::size_t hi = std::min(b.size(), i + limit);
    std::size_t diagonal = row[lo - 1];
    row[lo - 1] = lo == 1 ? std::min(i, over) : over;
    std::size_t band_min = row[lo - 1];
    for (std::size_t j = lo; j <= hi; ++j) {
      std::size_t above = row[j];
      std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute, over});
      band_min = std::min(band_min, row[j]);
      diagonal = above;
    }
    if (band_min > limit) return std::nullopt;
  }
  if (row[b.size()] > limit) return std::nullopt;
  return row[b.size()];
}

}  // namespace

SutContext::SutContext(const Suite& s) : suite(&s), http(http_generate) {}

ScriptedResult scripted_generate(const ScriptedTable& table, std::string_view prompt) {
  if (auto it = table.by_prompt.find(std::string(prompt)); it != table.by_prompt.end()) return {it->second, false};
  return {table.fallback, true};
}

ScriptedResult scripted_generate(const ScriptedTable& table, std::string_view prompt, std::string_view item_id) {
  if (auto it = table.by_prompt.find(std::string(prompt)); it != table.by_prompt.end()) return {it->second, false};
  if (auto it = table.by_item.find(std::string(item_id)); it != table.by_item.end()) return {it->second, false};
  return {table.fallback, true};
}

std::string stochastic_generate(const ResponseDistribution& dist, std::string_view item_id, Rng& rng) {
  auto it = dist.entries.find(std::string(item_id));
  if (it == dist.entries.end()) it = dist.entries.find(std::string(kWildcardEntry));
  if (it == dist.entries.end() || it->second.empty()) {
    throw Error(ErrorKind::missing_distribution_entry,
                "no distribution entry for item '" + std::string(item_id) + "' and no wildcard");
  }
  const auto& outputs = it->second;
  double u = rng.uniform01();
  double cumulative = 0.0;
  for (const auto& weighted : outputs) {
    cumulative += weighted.probability;
    if (u < cumulative) return weighted.output;
  }
  // Rounding left u above the last cumulative sum.
  return outputs.back().output;
}

std::optional<std::string> duplication_finder(std::string_view issue_text, std::span<const IndexedIssue> index,
                                              double cutoff) {
  // Same decisions as comparing similarity() against the cutoff, but the
  // Levenshtein term is only computed inside the band that can reach it.
  auto query = decode_utf8(normalize(issue_text));
  std::optional<std::string> best;
  double best_score = -1.0;
  for (const auto& issue : index) {
    double score = token_jaccard(issue_text, issue.text);
    auto text = decode_utf8(normalize(issue.text));
    std::size_t longest = std::max(query.size(), text.size());
    if (longest == 0) {
      score = 1.0;
    } else if (auto limit = distance_limit(longest, cutoff)) {
      if (auto distance = bounded_edit_distance(query, text, *limit)) {
        score = std::max(score, 1.0 - static_cast<double>(*distance) / static_cast<double>(longest));
      }
    }
    if (score >= cutoff && score > best_score) {
      best = issue.issue_id;
      best_score = score;
    }
  }
  return best;
}

std::string render_prompt(std::string_view prompt_template, std::string_view input_text) {
  return replace_all(prompt_template, "{input}", input_text);
}

Generation generate(const SutContext& ctx, const SutSpec& sut, const std::string& prompt, std::string_view item_id,
                    std::uint64_t seed) {
  const auto& binding = sut.model;
  switch (binding.kind) {
    case BindingKind::scripted: {
      auto it = ctx.suite->scripted.find(binding.name);
      if (it == ctx.suite->scripted.end()) {
        throw Error(ErrorKind::precondition, "scripted table '" + binding.name + "' is not loaded");
      }
      auto result = scripted_generate(it->second, prompt, item_id);
      return {std::move(result.text), result.miss, 0};
    }
    case BindingKind::stochastic: {
      auto it = ctx.suite->distributions.find(binding.name);
      if (it == ctx.suite->distributions.end()) {
        throw Error(ErrorKind::precondition, "distribution '" + binding.name + "' is not loaded");
      }
      Rng rng(seed);
      return {stochastic_generate(it->second, item_id, rng), false, 0};
    }
    case BindingKind::http_endpoint: {
      auto start = std::chrono::steady_clock::now();
      std::string text = ctx.http(binding, sut.configuration, prompt);
      auto elapsed = std::chrono::steady_clock::now() - start;
      return {std::move(text), false, std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()};
    }
  }
  throw Error(ErrorKind::precondition, "unknown binding kind");
}

namespace {

const std::string& prompt_template(const SutContext& ctx, const SutSpec& sut) {
  auto it = ctx.suite->prompts.find(sut.prompt_id);
  if (it == ctx.suite->prompts.end()) {
    throw Error(ErrorKind::precondition, "prompt template '" + sut.prompt_id + "' is not loaded");
  }
  return it->second;
}

bool has_tool(const SutSpec& sut, std::string_view tool) {
  return std::any_of(sut.tools.begin(), sut.tools.end(),
                     [&](const std::string& t) { return std::string_view(t).substr(0, t.find('@')) == tool; });
}

// Fills `record` progressively so a failing model call keeps the tool trace.
void run_classify(const SutContext& ctx, const SutSpec& sut, const InputItem& issue, std::uint64_t seed,
                  RunRecord& record) {
  if (!has_tool(sut, kDuplicationFinderTool)) {
    throw Error(ErrorKind::tool_failure, "SUT '" + sut.sut_id + "' has no DuplicationFinder tool");
  }
  auto match = duplication_finder(issue.text, ctx.suite->issue_index);
  record.tool_trace.push_back({std::string(kDuplicationFinderTool), issue.text, match.value_or("null")});
  if (match) {
    record.raw_output = "DUPLICATE " + *match;
    return;
  }
  record.prompt_sent = render_prompt(prompt_template(ctx, sut), issue.text);
  ++record.model_calls;
  auto generation = generate(ctx, sut, record.prompt_sent, issue.item_id, seed);
  record.raw_output = std::move(generation.text);
  record.scripted_miss = generation.scripted_miss;
  record.latency_ms = generation.latency_ms;
}

void run_prompt_template(const SutContext& ctx, const SutSpec& sut, const InputItem& input, std::uint64_t seed,
                         RunRecord& record) {
  record.prompt_sent = render_prompt(prompt_template(ctx, sut), input.text);
  ++record.model_calls;
  auto generation = generate(ctx, sut, record.prompt_sent, input.item_id, seed);
  record.raw_output = std::move(generation.text);
  record.scripted_miss = generation.scripted_miss;
  record.latency_ms = generation.latency_ms;
}

void fill_identity(RunRecord& record, const SutSpec& sut, const InputItem& input, std::uint64_t seed) {
  record.input_item_id = input.item_id;
  record.input_text = input.text;
  record.seed_used = seed;
  record.model_name = sut.model.name;
}

}  // namespace

RunRecord classify_issue_report(const SutContext& ctx, const SutSpec& sut, const InputItem& issue,
                                std::uint64_t seed) {
  RunRecord record;
  fill_identity(record, sut, issue, seed);
  try {
    run_classify(ctx, sut, issue, seed, record);
  } catch (const Error& e) {
    record.error = RunError{e.kind(), e.message()};
  }
  return record;
}

RunRecord invoke(const SutContext& ctx, const SutSpec& sut, const InputItem& input, std::uint64_t case_seed,
                 int run_index, std::string_view case_id) {
  std::uint64_t seed = derive_run_seed(case_seed, static_cast<std::uint64_t>(run_index));
  RunRecord record;
  record.case_id = std::string(case_id);
  record.run_index = run_index;
  fill_identity(record, sut, input, seed);
  try {
    if (sut.component == kComponentClassifyIssueReport) {
      run_classify(ctx, sut, input, seed, record);
    } else if (sut.component == kComponentPromptTemplate) {
      run_prompt_template(ctx, sut, input, seed, record);
    } else {
      throw Error(ErrorKind::precondition, "component '" + sut.component + "' is not registered");
    }
  } catch (const Error& e) {
    record.error = RunError{e.kind(), e.message()};
  }
  return record;
}

}  // namespace aggrtest
