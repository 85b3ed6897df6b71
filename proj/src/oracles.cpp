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

#include "aggrtest/oracles.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "aggrtest/http_client.hpp"
#include "aggrtest/suite.hpp"
#include "aggrtest/text.hpp"

namespace aggrtest {

namespace {

constexpr std::string_view kDuplicateLabel = "DUPLICATE";

bool contains_label(std::span<const std::string> labels, std::string_view token) {
  return std::find(labels.begin(), labels.end(), token) != labels.end();
}

bool is_id_char(char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '-' || c == '_' ||
         c == '.';
}

bool looks_like_id(std::string_view token) {
  if (!token.empty() && token.front() == '#') token.remove_prefix(1);
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), is_id_char);
}

// Drops leading/trailing characters that cannot be part of a label or id.
std::string_view strip_punctuation(std::string_view token) {
  auto keep = [](char c) { return is_id_char(c) || c == '#'; };
  while (!token.empty() && !keep(token.front())) token.remove_prefix(1);
  while (!token.empty() && (!keep(token.back()) || token.back() == '.')) token.remove_suffix(1);
  return token;
}

std::optional<Decision> parse_normalized(std::string_view normalized, std::span<const std::string> labels,
                                         std::span<const std::string> id_labels) {
  auto tokens = split_whitespace(normalized);
  if (tokens.size() == 1 && contains_label(labels, tokens[0])) return Decision{tokens[0], std::nullopt};
  if (tokens.size() == 2 && contains_label(labels, tokens[0]) && contains_label(id_labels, tokens[0]) &&
      looks_like_id(tokens[1])) {
    return Decision{tokens[0], tokens[1]};
  }
  return std::nullopt;
}

}  // namespace

std::string normalize_label_output(std::string_view output, bool strict) {
  std::string normalized = normalize(output);
  if (!strict && !normalized.empty() && normalized.back() == '.') {
    normalized.pop_back();
    while (!normalized.empty() && normalized.back() == ' ') normalized.pop_back();
  }
  return normalized;
}

Verdict check_single_label(std::string_view output, std::span<const std::string> labels,
                           const LabelCheckOptions& options) {
  std::string normalized = normalize_label_output(output, options.strict);
  if (auto decision = parse_normalized(normalized, labels, options.id_labels)) {
    return Verdict::pass("label " + decision->label);
  }
  std::vector<std::string> found;
  for (const auto& token : split_whitespace(normalized)) {
    std::string_view bare = strip_punctuation(token);
    if (contains_label(labels, bare)) found.emplace_back(bare);
  }
  if (found.size() >= 2) {
    return Verdict::fail(fmt::format("P1.1 single-label violated: found {} labels ({})", found.size(),
                                     fmt::join(found, ", ")));
  }
  if (found.empty()) {
    return Verdict::fail(fmt::format("P1.2 membership violated: output '{}' contains no label from {{{}}}",
                                     normalized, fmt::join(labels, ", ")));
  }
  return Verdict::fail(fmt::format("P1.3 format discipline violated: extra content beyond label {} in '{}'",
                                   found.front(), normalized));
}

std::string canonical_issue_id(std::string_view id) {
  if (!id.empty() && id.front() == '#') id.remove_prefix(1);
  return std::string(id);
}

std::optional<Decision> parse_decision(std::string_view output, std::span<const std::string> labels,
                                       std::span<const std::string> id_labels) {
  return parse_normalized(normalize_label_output(output), labels, id_labels);
}

std::optional<Decision> scan_decision(std::string_view output, std::span<const std::string> labels) {
  auto tokens = split_whitespace(output);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string_view bare = strip_punctuation(tokens[i]);
    if (!contains_label(labels, bare)) continue;
    Decision decision{std::string(bare), std::nullopt};
    if (bare == kDuplicateLabel && i + 1 < tokens.size()) {
      std::string_view next = strip_punctuation(tokens[i + 1]);
      bool has_digit = std::any_of(next.begin(), next.end(), [](char c) { return c >= '0' && c <= '9'; });
      if (looks_like_id(next) && (has_digit || next.starts_with("#"))) decision.id = std::string(next);
    }
    return decision;
  }
  return std::nullopt;
}

Verdict check_duplicate_alignment(const RunRecord& record, const std::optional<Decision>& decision) {
  auto entry = std::find_if(record.tool_trace.begin(), record.tool_trace.end(),
                            [](const ToolCall& call) { return call.tool == kDuplicationFinderTool; });
  if (entry == record.tool_trace.end()) {
    return Verdict::error("missing-tool-trace: record has no DuplicationFinder call");
  }
  bool tool_found = entry->output != "null";
  bool is_duplicate = decision && decision->label == kDuplicateLabel;
  std::string decided = decision ? decision->label + (decision->id ? " " + *decision->id : "") : "<none>";
  if (tool_found) {
    if (!is_duplicate) {
      return Verdict::fail(
          fmt::format("P2.1 tool consistency violated: tool returned {} but decision is {}", entry->output, decided));
    }
    if (!decision->id) {
      return Verdict::fail(fmt::format("P2.1 tool consistency violated: DUPLICATE without the id {}", entry->output));
    }
    if (canonical_issue_id(*decision->id) != canonical_issue_id(entry->output)) {
      return Verdict::fail(fmt::format("P2.3 ID provenance violated: reported {} but tool returned {}",
                                       *decision->id, entry->output));
    }
    return Verdict::pass("DUPLICATE " + *decision->id + " follows the tool");
  }
  if (is_duplicate) {
    return Verdict::fail("P2.2 non-duplicate discipline violated: tool returned null but decision is " + decided);
  }
  return Verdict::pass("tool returned null; decision " + decided);
}

Verdict exact_match(std::string_view output, std::string_view expected) {
  if (output == expected) return Verdict::pass();
  return Verdict::fail(fmt::format("expected '{}', got '{}'", expected, output));
}

Verdict regex_match(std::string_view output, std::string_view pattern) {
  std::regex compiled;
  try {
    compiled = std::regex(pattern.begin(), pattern.end());
  } catch (const std::regex_error& e) {
    throw Error(ErrorKind::invalid_pattern, fmt::format("'{}': {}", pattern, e.what()));
  }
  if (std::regex_search(output.begin(), output.end(), compiled)) return Verdict::pass();
  return Verdict::fail(fmt::format("no match for /{}/", pattern));
}

Verdict contains(std::string_view output, std::string_view needle) {
  if (output.find(needle) != std::string_view::npos) return Verdict::pass();
  return Verdict::fail(fmt::format("'{}' not found", needle));
}

Verdict json_format_check(std::string_view output, std::span<const std::string> required_keys) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(output);
  } catch (const nlohmann::json::exception& e) {
    return Verdict::fail(std::string("not well-formed JSON: ") + e.what());
  }
  std::vector<std::string> missing;
  for (const auto& key : required_keys) {
    if (!doc.is_object() || !doc.contains(key)) missing.push_back(key);
  }
  if (!missing.empty()) return Verdict::fail(fmt::format("missing key(s): {}", fmt::join(missing, ", ")));
  return Verdict::pass();
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t above = row[j];
      std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
  auto ca = decode_utf8(normalize(a));
  auto cb = decode_utf8(normalize(b));
  std::size_t longest = std::max(ca.size(), cb.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(ca, cb)) / static_cast<double>(longest);
}

double token_jaccard(std::string_view a, std::string_view b) {
  auto ta = split_whitespace(a);
  auto tb = split_whitespace(b);
  std::set<std::string> sa(ta.begin(), ta.end());
  std::set<std::string> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& token : sa) common += sb.count(token);
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

double similarity(std::string_view a, std::string_view b) {
  return std::max(levenshtein_similarity(a, b), token_jaccard(a, b));
}

Verdict similarity_threshold(std::string_view output, std::string_view reference, double threshold) {
  return similarity_threshold(output, reference, threshold,
                              [](std::string_view x, std::string_view y) { return similarity(x, y); });
}

Verdict similarity_threshold(std::string_view output, std::string_view reference, double threshold,
                             const SimilarityScorer& scorer) {
  double score = scorer(output, reference);
  if (score > threshold) return Verdict::pass(fmt::format("similarity {:.4f} > {}", score, threshold), score);
  return Verdict::fail(fmt::format("similarity {:.4f} <= {}", score, threshold), score);
}

std::string render_rubric(std::string_view rubric, std::string_view scenario, std::string_view output) {
  return replace_all(replace_all(rubric, "{scenario}", scenario), "{output}", output);
}

Verdict llm_judge(const JudgeInvoker& judge, std::string_view rubric, const RunRecord& record) {
  std::string prompt = render_rubric(rubric, record.input_text, record.raw_output);
  std::string answer;
  try {
    answer = judge(prompt);
  } catch (const Error& e) {
    return Verdict::error(std::string("judge unavailable: ") + e.what());
  }
  std::string verdict_text = to_lower_ascii(trim(answer));
  if (verdict_text.find("yes") != std::string::npos) return Verdict::pass(answer);
  return Verdict::fail(answer);
}

Verdict llm_judge(const SutContext& ctx, const SutSpec& judge, std::string_view rubric, const RunRecord& record) {
  std::uint64_t seed = splitmix64(record.seed_used ^ fnv1a64("llm-judge"));
  JudgeInvoker invoker = [&](const std::string& prompt) {
    return generate(ctx, judge, prompt, record.input_item_id, seed).text;
  };
  return llm_judge(invoker, rubric, record);
}

int count_actions(std::string_view output) {
  int actions = 0;
  std::size_t pos = 0;
  while (pos <= output.size()) {
    std::size_t end = output.find('\n', pos);
    if (end == std::string_view::npos) end = output.size();
    if (!trim(output.substr(pos, end - pos)).empty()) ++actions;
    pos = end + 1;
  }
  return actions;
}

Verdict check_budget(const RunRecord& record, const Budget& budget) {
  if (budget.max_actions) {
    int actions = count_actions(record.raw_output);
    if (actions > *budget.max_actions) {
      return Verdict::fail(fmt::format("budget exceeded: {} actions > max {}", actions, *budget.max_actions));
    }
  }
  if (budget.max_output_tokens) {
    auto tokens = static_cast<int>(split_whitespace(record.raw_output).size());
    if (tokens > *budget.max_output_tokens) {
      return Verdict::fail(
          fmt::format("budget exceeded: {} output tokens > max {}", tokens, *budget.max_output_tokens));
    }
  }
  return Verdict::pass();
}

Verdict evaluate_atomic(const OracleSpec& spec, const RunRecord& record, const OracleContext& ctx) {
  if (record.error) {
    return Verdict::error(fmt::format("{}: {}", to_string(record.error->kind), record.error->message));
  }
  const std::string& output = record.raw_output;
  Verdict verdict;
  try {
    switch (spec.kind) {
      case OracleKind::single_label:
        verdict = check_single_label(output, spec.labels, {spec.id_labels, spec.strict});
        break;
      case OracleKind::duplicate_alignment:
        verdict = check_duplicate_alignment(record, scan_decision(output, label_set()));
        break;
      case OracleKind::exact_match:
        verdict = exact_match(output, spec.expected_from_class ? ctx.item_class : spec.expected);
        break;
      case OracleKind::regex_match: verdict = regex_match(output, spec.pattern); break;
      case OracleKind::contains: verdict = contains(output, spec.needle); break;
      case OracleKind::json_format: verdict = json_format_check(output, spec.required_keys); break;
      case OracleKind::similarity_threshold:
        if (spec.scorer_endpoint) {
          std::string endpoint = *spec.scorer_endpoint;
          verdict = similarity_threshold(output, spec.reference, spec.threshold,
                                         [&](std::string_view a, std::string_view b) {
                                           return http_similarity_score(endpoint, a, b);
                                         });
        } else {
          verdict = similarity_threshold(output, spec.reference, spec.threshold);
        }
        break;
      case OracleKind::llm_judge:
        if (ctx.sut_context == nullptr || ctx.judge == nullptr) {
          return Verdict::error("llm-judge oracle has no judge SUT bound");
        }
        verdict = llm_judge(*ctx.sut_context, *ctx.judge, spec.rubric, record);
        break;
      case OracleKind::repeatability:
      case OracleKind::paraphrase_agreement:
      case OracleKind::format_agreement:
        return Verdict::error("oracle '" + spec.oracle_id + "' is not atomic");
    }
  } catch (const Error& e) {
    return Verdict::error(e.what());
  }
  if (verdict.passed() && ctx.budget) {
    Verdict budget = check_budget(record, *ctx.budget);
    if (!budget.passed()) return Verdict::fail(budget.detail, verdict.score);
  }
  return verdict;
}

}  // namespace aggrtest
