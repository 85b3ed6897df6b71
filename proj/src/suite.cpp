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

#include "aggrtest/suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <set>

#include <fmt/format.h>

namespace aggrtest {

// ---------------------------------------------------------------------------
// enum <-> string

std::string_view to_string(BindingKind kind) noexcept {
  switch (kind) {
    case BindingKind::http_endpoint: return "http-endpoint";
    case BindingKind::scripted: return "scripted";
    case BindingKind::stochastic: return "stochastic";
  }
  return "scripted";
}

std::optional<BindingKind> parse_binding_kind(std::string_view text) noexcept {
  for (auto k : {BindingKind::http_endpoint, BindingKind::scripted, BindingKind::stochastic}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

bool is_registered_component(std::string_view component) noexcept {
  return component == kComponentClassifyIssueReport || component == kComponentPromptTemplate;
}

std::string_view to_string(OracleKind kind) noexcept {
  switch (kind) {
    case OracleKind::single_label: return "single-label";
    case OracleKind::duplicate_alignment: return "duplicate-alignment";
    case OracleKind::exact_match: return "exact-match";
    case OracleKind::regex_match: return "regex-match";
    case OracleKind::contains: return "contains";
    case OracleKind::json_format: return "json-format";
    case OracleKind::similarity_threshold: return "similarity-threshold";
    case OracleKind::llm_judge: return "llm-judge";
    case OracleKind::repeatability: return "repeatability";
    case OracleKind::paraphrase_agreement: return "paraphrase-agreement";
    case OracleKind::format_agreement: return "format-agreement";
  }
  return "exact-match";
}

std::optional<OracleKind> parse_oracle_kind(std::string_view text) noexcept {
  for (auto k : {OracleKind::single_label, OracleKind::duplicate_alignment, OracleKind::exact_match,
                 OracleKind::regex_match, OracleKind::contains, OracleKind::json_format,
                 OracleKind::similarity_threshold, OracleKind::llm_judge, OracleKind::repeatability,
                 OracleKind::paraphrase_agreement, OracleKind::format_agreement}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

bool is_atomic(OracleKind kind) noexcept {
  return kind != OracleKind::repeatability && kind != OracleKind::paraphrase_agreement &&
         kind != OracleKind::format_agreement;
}

std::string_view to_string(AggregationRule rule) noexcept {
  switch (rule) {
    case AggregationRule::identity: return "identity";
    case AggregationRule::strict_all: return "strict-all";
    case AggregationRule::majority: return "majority";
    case AggregationRule::pass_rate: return "pass-rate";
    case AggregationRule::wilson_lower_bound: return "wilson-lower-bound";
  }
  return "identity";
}

std::optional<AggregationRule> parse_aggregation_rule(std::string_view text) noexcept {
  for (auto r : {AggregationRule::identity, AggregationRule::strict_all, AggregationRule::majority,
                 AggregationRule::pass_rate, AggregationRule::wilson_lower_bound}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

std::string_view to_string(VerdictStatus status) noexcept {
  switch (status) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::error: return "error";
  }
  return "error";
}

std::optional<VerdictStatus> parse_verdict_status(std::string_view text) noexcept {
  for (auto s : {VerdictStatus::pass, VerdictStatus::fail, VerdictStatus::error}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::vector<std::string> label_set() { return {"BUG", "FEATURE", "INVALID", "DUPLICATE"}; }

bool is_member(const std::vector<std::string>& labels, std::string_view label) {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

// ---------------------------------------------------------------------------
// Suite lookups

namespace {

template <typename T, typename Key>
const T* find_by(const std::vector<T>& items, std::string_view id, Key key) {
  for (const auto& item : items) {
    if (item.*key == id) return &item;
  }
  return nullptr;
}

}  // namespace

const SutSpec* Suite::find_sut(std::string_view sut_id) const noexcept {
  return find_by(suts, sut_id, &SutSpec::sut_id);
}
const OracleSpec* Suite::find_oracle(std::string_view oracle_id) const noexcept {
  return find_by(oracles, oracle_id, &OracleSpec::oracle_id);
}
const Property* Suite::find_property(std::string_view property_id) const noexcept {
  return find_by(properties, property_id, &Property::property_id);
}
const TestCase* Suite::find_case(std::string_view case_id) const noexcept {
  return find_by(cases, case_id, &TestCase::case_id);
}
const InputItem* Suite::find_item(std::string_view item_id) const noexcept {
  return find_by(corpus, item_id, &InputItem::item_id);
}

std::string format_validation_error(const ValidationError& error) {
  return fmt::format("{}: {}: {}", error.path.empty() ? "/" : error.path, to_string(error.kind), error.message);
}

// ---------------------------------------------------------------------------
// Document reader

namespace {

std::string child(const std::string& path, std::string_view key) { return fmt::format("{}/{}", path, key); }
std::string child(const std::string& path, std::size_t index) { return fmt::format("{}/{}", path, index); }

// Collects errors instead of throwing so validation reports everything at once.
class Reader {
 public:
  Reader(std::vector<ValidationError>& errors, std::filesystem::path base_dir)
      : errors_(errors), base_dir_(std::move(base_dir)) {}

  void add(ErrorKind kind, std::string path, std::string message) {
    errors_.push_back({kind, std::move(path), std::move(message)});
  }

  const nlohmann::json* field(const nlohmann::json& node, std::string_view key) const {
    if (!node.is_object()) return nullptr;
    auto it = node.find(std::string(key));
    return it == node.end() ? nullptr : &*it;
  }

  std::optional<std::string> string(const nlohmann::json& node, std::string_view key, const std::string& path,
                                    bool required = true) {
    const auto* value = field(node, key);
    if (value == nullptr) {
      if (required) add(ErrorKind::schema, child(path, key), "required string field missing");
      return std::nullopt;
    }
    if (!value->is_string()) {
      add(ErrorKind::schema, child(path, key), "expected a string");
      return std::nullopt;
    }
    return value->get<std::string>();
  }

  std::optional<double> number(const nlohmann::json& node, std::string_view key, const std::string& path,
                               bool required = true) {
    const auto* value = field(node, key);
    if (value == nullptr) {
      if (required) add(ErrorKind::schema, child(path, key), "required number field missing");
      return std::nullopt;
    }
    if (!value->is_number()) {
      add(ErrorKind::schema, child(path, key), "expected a number");
      return std::nullopt;
    }
    return value->get<double>();
  }

  std::optional<std::int64_t> integer(const nlohmann::json& node, std::string_view key, const std::string& path,
                                      bool required = true) {
    const auto* value = field(node, key);
    if (value == nullptr) {
      if (required) add(ErrorKind::schema, child(path, key), "required integer field missing");
      return std::nullopt;
    }
    if (!value->is_number_integer()) {
      add(ErrorKind::schema, child(path, key), "expected an integer");
      return std::nullopt;
    }
    if (value->is_number_unsigned() && value->get<std::uint64_t>() > std::numeric_limits<std::int64_t>::max()) {
      add(ErrorKind::bound_violation, child(path, key), "integer out of range");
      return std::nullopt;
    }
    return value->get<std::int64_t>();
  }

  std::optional<std::uint64_t> unsigned64(const nlohmann::json& node, std::string_view key, const std::string& path) {
    const auto* value = field(node, key);
    if (value == nullptr) return std::nullopt;
    if (value->is_number_unsigned()) return value->get<std::uint64_t>();
    if (value->is_number_integer()) {
      if (value->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(value->get<std::int64_t>());
      add(ErrorKind::bound_violation, child(path, key), "must be a non-negative 64-bit integer");
      return std::nullopt;
    }
    add(ErrorKind::schema, child(path, key), "expected an unsigned integer");
    return std::nullopt;
  }

  std::optional<bool> boolean(const nlohmann::json& node, std::string_view key, const std::string& path) {
    const auto* value = field(node, key);
    if (value == nullptr) return std::nullopt;
    if (!value->is_boolean()) {
      add(ErrorKind::schema, child(path, key), "expected a boolean");
      return std::nullopt;
    }
    return value->get<bool>();
  }

  std::vector<std::string> strings(const nlohmann::json& node, std::string_view key, const std::string& path,
                                   bool required = false) {
    std::vector<std::string> out;
    const auto* value = field(node, key);
    if (value == nullptr) {
      if (required) add(ErrorKind::schema, child(path, key), "required string array missing");
      return out;
    }
    if (!value->is_array()) {
      add(ErrorKind::schema, child(path, key), "expected an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < value->size(); ++i) {
      if (!(*value)[i].is_string()) {
        add(ErrorKind::schema, child(child(path, key), i), "expected a string");
        continue;
      }
      out.push_back((*value)[i].get<std::string>());
    }
    return out;
  }

  const nlohmann::json* array(const nlohmann::json& node, std::string_view key, const std::string& path,
                              bool required = true) {
    const auto* value = field(node, key);
    if (value == nullptr) {
      if (required) add(ErrorKind::schema, child(path, key), "required array missing");
      return nullptr;
    }
    if (!value->is_array()) {
      add(ErrorKind::schema, child(path, key), "expected an array");
      return nullptr;
    }
    return value;
  }

  // Reads an asset that is either inline or a path relative to base_dir.
  // Returns the file contents for path references.
  std::optional<std::string> file(const std::string& relative, const std::string& path) {
    std::filesystem::path resolved = relative;
    if (resolved.is_relative()) resolved = base_dir_ / resolved;
    try {
      return read_file(resolved);
    } catch (const Error&) {
      add(ErrorKind::unresolved_reference, path, fmt::format("asset file '{}' not found", relative));
      return std::nullopt;
    }
  }

  std::optional<nlohmann::json> json_file(const std::string& relative, const std::string& path) {
    auto contents = file(relative, path);
    if (!contents) return std::nullopt;
    try {
      return nlohmann::json::parse(*contents);
    } catch (const nlohmann::json::exception& e) {
      add(ErrorKind::schema, path, fmt::format("asset file '{}' is not JSON: {}", relative, e.what()));
      return std::nullopt;
    }
  }

 private:
  std::vector<ValidationError>& errors_;
  std::filesystem::path base_dir_;
};

// ---------------------------------------------------------------------------
// Assets

void read_prompts(Reader& r, const nlohmann::json& node, const std::string& path, Suite& suite) {
  if (!node.is_object()) {
    r.add(ErrorKind::schema, path, "expected an object of prompt templates");
    return;
  }
  for (const auto& [key, value] : node.items()) {
    std::string p = child(path, key);
    if (value.is_string()) {
      if (auto text = r.file(value.get<std::string>(), p)) suite.prompts[key] = *text;
    } else if (auto text = r.string(value, "text", p)) {
      suite.prompts[key] = *text;
    }
  }
}

std::optional<ScriptedTable> read_scripted_table(Reader& r, const nlohmann::json& node, const std::string& path) {
  if (!node.is_object()) {
    r.add(ErrorKind::schema, path, "scripted table must be an object");
    return std::nullopt;
  }
  ScriptedTable table;
  bool ok = true;
  for (const char* section : {"by_prompt", "by_item"}) {
    const auto* entries = r.field(node, section);
    if (entries == nullptr) continue;
    if (!entries->is_object()) {
      r.add(ErrorKind::schema, child(path, section), "expected an object of string outputs");
      ok = false;
      continue;
    }
    auto& target = std::string_view(section) == "by_prompt" ? table.by_prompt : table.by_item;
    for (const auto& [key, value] : entries->items()) {
      if (!value.is_string()) {
        r.add(ErrorKind::schema, child(child(path, section), key), "expected a string output");
        ok = false;
        continue;
      }
      target[key] = value.get<std::string>();
    }
  }
  if (auto fallback = r.string(node, "fallback", path, false)) table.fallback = *fallback;
  if (!ok) return std::nullopt;
  return table;
}

std::optional<ResponseDistribution> read_distribution(Reader& r, const nlohmann::json& node,
                                                      const std::string& path) {
  const auto* entries = r.field(node, "entries");
  if (entries == nullptr || !entries->is_object()) {
    r.add(ErrorKind::schema, child(path, "entries"), "expected an object of weighted outputs");
    return std::nullopt;
  }
  ResponseDistribution dist;
  bool ok = true;
  for (const auto& [key, list] : entries->items()) {
    std::string p = child(child(path, "entries"), key);
    if (!list.is_array() || list.empty()) {
      r.add(ErrorKind::schema, p, "expected a non-empty array of {output, probability}");
      ok = false;
      continue;
    }
    std::vector<WeightedOutput> outputs;
    double total = 0.0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto output = r.string(list[i], "output", child(p, i));
      auto probability = r.number(list[i], "probability", child(p, i));
      if (!output || !probability) {
        ok = false;
        continue;
      }
      if (!(*probability > 0.0)) {
        r.add(ErrorKind::bound_violation, child(child(p, i), "probability"), "probability must be positive");
        ok = false;
      }
      total += *probability;
      outputs.push_back({*output, *probability});
    }
    if (std::abs(total - 1.0) > 1e-9) {
      r.add(ErrorKind::bound_violation, p, fmt::format("probabilities sum to {} instead of 1", total));
      ok = false;
    }
    dist.entries[key] = std::move(outputs);
  }
  if (!ok) return std::nullopt;
  return dist;
}

template <typename Parse>
void read_asset_map(Reader& r, const nlohmann::json& node, const std::string& path, Parse parse) {
  if (!node.is_object()) {
    r.add(ErrorKind::schema, path, "expected an object keyed by asset name");
    return;
  }
  for (const auto& [key, value] : node.items()) {
    std::string p = child(path, key);
    if (value.is_string()) {
      if (auto doc = r.json_file(value.template get<std::string>(), p)) parse(key, *doc, p);
    } else {
      parse(key, value, p);
    }
  }
}

void read_issue_index(Reader& r, const nlohmann::json& node, const std::string& path, Suite& suite) {
  auto add_issue = [&](const nlohmann::json& row, const std::string& p) {
    auto id = r.string(row, "issue_id", p);
    auto text = r.string(row, "text", p);
    if (id && text) suite.issue_index.push_back({*id, *text});
  };
  if (node.is_string()) {
    auto contents = r.file(node.get<std::string>(), path);
    if (!contents) return;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    std::string_view all = *contents;
    while (pos < all.size()) {
      std::size_t end = all.find('\n', pos);
      if (end == std::string_view::npos) end = all.size();
      std::string_view line = all.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      try {
        add_issue(nlohmann::json::parse(line), fmt::format("{}:line{}", path, line_no));
      } catch (const nlohmann::json::exception& e) {
        r.add(ErrorKind::schema, fmt::format("{}:line{}", path, line_no), e.what());
      }
    }
  } else if (const auto* issues = r.array(node, "issues", path)) {
    for (std::size_t i = 0; i < issues->size(); ++i) add_issue((*issues)[i], child(child(path, "issues"), i));
  }
  std::set<std::string> seen;
  for (const auto& issue : suite.issue_index) {
    if (!seen.insert(issue.issue_id).second) {
      r.add(ErrorKind::duplicate_id, path, fmt::format("issue id '{}' appears more than once", issue.issue_id));
    }
  }
}

void read_corpus_section(Reader& r, const nlohmann::json& node, const std::string& path, Suite& suite) {
  try {
    if (node.is_string()) {
      auto contents = r.file(node.get<std::string>(), path);
      if (!contents) return;
      suite.corpus = parse_corpus(*contents);
    } else if (const auto* rows = r.array(node, "rows", path)) {
      for (std::size_t i = 0; i < rows->size(); ++i) {
        try {
          suite.corpus.push_back(input_item_from_json((*rows)[i]));
        } catch (const Error& e) {
          r.add(ErrorKind::schema, child(child(path, "rows"), i), e.message());
        }
      }
    }
  } catch (const Error& e) {
    r.add(ErrorKind::schema, path, e.message());
    return;
  }
  for (const auto& problem : check_corpus(suite.corpus)) {
    r.add(problem.starts_with("duplicate") ? ErrorKind::duplicate_id : ErrorKind::unresolved_reference, path,
          problem);
  }
  sort_corpus(suite.corpus);
}

// ---------------------------------------------------------------------------
// Sections

std::optional<ModelBinding> read_binding(Reader& r, const nlohmann::json& node, const std::string& path) {
  if (!node.is_object()) {
    r.add(ErrorKind::schema, path, "model binding must be an object");
    return std::nullopt;
  }
  ModelBinding binding;
  bool ok = true;
  auto kind_text = r.string(node, "kind", path);
  auto name = r.string(node, "name", path);
  if (!kind_text || !name) return std::nullopt;
  auto kind = parse_binding_kind(*kind_text);
  if (!kind) {
    r.add(ErrorKind::schema, child(path, "kind"), "unknown binding kind '" + *kind_text + "'");
    return std::nullopt;
  }
  binding.kind = *kind;
  binding.name = *name;
  if (auto endpoint = r.string(node, "endpoint", path, false)) binding.endpoint = *endpoint;
  if ((binding.kind == BindingKind::http_endpoint) != binding.endpoint.has_value()) {
    r.add(ErrorKind::bound_violation, child(path, "endpoint"),
          "endpoint must be present exactly when kind is http-endpoint");
    ok = false;
  }
  if (auto retries = r.integer(node, "retries", path, false)) {
    if (*retries < 0 || *retries > 10) {
      r.add(ErrorKind::bound_violation, child(path, "retries"), "retries must be in [0,10]");
      ok = false;
    }
    binding.retries = static_cast<int>(*retries);
  }
  if (auto timeout = r.integer(node, "timeout_ms", path, false)) {
    if (*timeout <= 0 || *timeout > 3'600'000) {
      r.add(ErrorKind::bound_violation, child(path, "timeout_ms"), "timeout_ms must be in (0, 3600000]");
      ok = false;
    }
    binding.timeout_ms = static_cast<int>(*timeout);
  }
  if (!ok) return std::nullopt;
  return binding;
}

std::optional<ModelConfig> read_config(Reader& r, const nlohmann::json* node, const std::string& path) {
  ModelConfig config;
  if (node == nullptr) return config;
  if (!node->is_object()) {
    r.add(ErrorKind::schema, path, "configuration must be an object");
    return std::nullopt;
  }
  bool ok = true;
  auto bound = [&](bool condition, std::string_view key, std::string_view message) {
    if (!condition) {
      r.add(ErrorKind::bound_violation, child(path, key), std::string(message));
      ok = false;
    }
  };
  if (auto v = r.number(*node, "temperature", path, false)) {
    bound(*v >= 0.0, "temperature", "temperature must be >= 0");
    config.temperature = *v;
  }
  if (auto v = r.number(*node, "top_p", path, false)) {
    bound(*v > 0.0 && *v <= 1.0, "top_p", "top_p must be in (0,1]");
    config.top_p = *v;
  }
  if (auto v = r.integer(*node, "top_k", path, false)) {
    bound(*v > 0 && *v <= std::numeric_limits<int>::max(), "top_k", "top_k must be a positive integer");
    config.top_k = static_cast<int>(*v);
  }
  if (auto v = r.integer(*node, "n", path, false)) {
    bound(*v > 0 && *v <= 128, "n", "n must be a positive integer");
    config.n = static_cast<int>(*v);
  }
  if (auto v = r.integer(*node, "max_tokens", path, false)) {
    bound(*v > 0 && *v <= std::numeric_limits<int>::max(), "max_tokens", "max_tokens must be a positive integer");
    config.max_tokens = static_cast<int>(*v);
  }
  if (auto v = r.unsigned64(*node, "seed", path)) config.seed = *v;
  if (!ok) return std::nullopt;
  return config;
}

}  // namespace

std::optional<SutSpec> parse_sut(const nlohmann::json& node, const std::string& path,
                                 std::vector<ValidationError>& errors) {
  Reader r(errors, {});
  if (!node.is_object()) {
    r.add(ErrorKind::schema, path, "SUT must be an object");
    return std::nullopt;
  }
  std::size_t before = errors.size();
  SutSpec sut;
  auto id = r.string(node, "sut_id", path);
  auto component = r.string(node, "component", path);
  std::optional<ModelBinding> binding;
  if (const auto* model = r.field(node, "model")) {
    binding = read_binding(r, *model, child(path, "model"));
  } else {
    r.add(ErrorKind::schema, child(path, "model"), "required model binding missing");
  }
  auto config = read_config(r, r.field(node, "configuration"), child(path, "configuration"));
  if (auto prompt = r.string(node, "prompt", path, false)) sut.prompt_id = *prompt;
  sut.tools = r.strings(node, "tools", path);
  if (errors.size() != before || !id || !component || !binding || !config) return std::nullopt;
  sut.sut_id = *id;
  sut.component = *component;
  sut.model = *binding;
  sut.configuration = *config;
  return sut;
}

namespace {

std::optional<OracleSpec> read_oracle(Reader& r, const nlohmann::json& node, const std::string& path,
                                      const Suite& suite) {
  auto id = r.string(node, "oracle_id", path);
  auto kind_text = r.string(node, "kind", path);
  if (!id || !kind_text) return std::nullopt;
  auto kind = parse_oracle_kind(*kind_text);
  if (!kind) {
    r.add(ErrorKind::schema, child(path, "kind"), "unknown oracle kind '" + *kind_text + "'");
    return std::nullopt;
  }
  OracleSpec spec;
  spec.oracle_id = *id;
  spec.kind = *kind;
  static const nlohmann::json kEmpty = nlohmann::json::object();
  const auto* params_node = r.field(node, "parameters");
  if (params_node != nullptr && !params_node->is_object()) {
    r.add(ErrorKind::schema, child(path, "parameters"), "parameters must be an object");
    return std::nullopt;
  }
  const nlohmann::json& params = params_node != nullptr ? *params_node : kEmpty;
  std::string pp = child(path, "parameters");
  bool ok = true;
  auto text_or_file = [&](std::string_view key, std::string_view file_key) -> std::optional<std::string> {
    if (auto text = r.string(params, key, pp, false)) return text;
    if (auto file = r.string(params, file_key, pp, false)) return r.file(*file, child(pp, file_key));
    r.add(ErrorKind::schema, child(pp, key), fmt::format("one of '{}' or '{}' is required", key, file_key));
    return std::nullopt;
  };

  switch (spec.kind) {
    case OracleKind::single_label: {
      spec.labels = params.contains("labels") ? r.strings(params, "labels", pp) : suite.labels;
      spec.id_labels = r.strings(params, "id_labels", pp);
      if (auto strict = r.boolean(params, "strict", pp)) spec.strict = *strict;
      if (spec.labels.empty()) {
        r.add(ErrorKind::bound_violation, child(pp, "labels"), "label set must be non-empty");
        ok = false;
      }
      for (const auto& label : spec.id_labels) {
        if (!is_member(spec.labels, label)) {
          r.add(ErrorKind::unresolved_reference, child(pp, "id_labels"),
                "id label '" + label + "' is not in the label set");
          ok = false;
        }
      }
      break;
    }
    case OracleKind::exact_match: {
      auto from = r.string(params, "expected_from", pp, false);
      if (from) {
        if (*from != "class") {
          r.add(ErrorKind::schema, child(pp, "expected_from"), "only 'class' is supported");
          ok = false;
        }
        spec.expected_from_class = true;
      } else if (auto expected = r.string(params, "expected", pp)) {
        spec.expected = *expected;
      } else {
        ok = false;
      }
      break;
    }
    case OracleKind::regex_match: {
      if (auto pattern = r.string(params, "pattern", pp)) {
        spec.pattern = *pattern;
        try {
          std::regex compiled(spec.pattern);
        } catch (const std::regex_error& e) {
          r.add(ErrorKind::invalid_pattern, child(pp, "pattern"), e.what());
          ok = false;
        }
      } else {
        ok = false;
      }
      break;
    }
    case OracleKind::contains: {
      if (auto needle = r.string(params, "needle", pp)) {
        spec.needle = *needle;
      } else {
        ok = false;
      }
      break;
    }
    case OracleKind::json_format:
      spec.required_keys = r.strings(params, "required_keys", pp);
      break;
    case OracleKind::similarity_threshold: {
      auto reference = text_or_file("reference", "reference_file");
      auto threshold = r.number(params, "threshold", pp);
      if (!reference || !threshold) {
        ok = false;
        break;
      }
      if (!(*threshold >= 0.0 && *threshold <= 1.0)) {
        r.add(ErrorKind::bound_violation, child(pp, "threshold"), "threshold must be in [0,1]");
        ok = false;
      }
      spec.reference = *reference;
      spec.threshold = *threshold;
      if (auto scorer = r.string(params, "scorer_endpoint", pp, false)) spec.scorer_endpoint = *scorer;
      break;
    }
    case OracleKind::llm_judge: {
      auto judge = r.string(params, "judge", pp);
      auto rubric = text_or_file("rubric", "rubric_file");
      if (!judge || !rubric) {
        ok = false;
        break;
      }
      if (suite.find_sut(*judge) == nullptr) {
        r.add(ErrorKind::unresolved_reference, child(pp, "judge"), "judge SUT '" + *judge + "' is not defined");
        ok = false;
      }
      if (rubric->find("{output}") == std::string::npos) {
        r.add(ErrorKind::schema, child(pp, "rubric"), "rubric must contain the {output} placeholder");
        ok = false;
      }
      spec.judge_sut = *judge;
      spec.rubric = *rubric;
      break;
    }
    case OracleKind::duplicate_alignment:
    case OracleKind::repeatability:
    case OracleKind::paraphrase_agreement:
    case OracleKind::format_agreement:
      break;
  }
  if (!ok) return std::nullopt;
  return spec;
}

std::optional<InputSelector> read_selector(Reader& r, const nlohmann::json* node, const std::string& path,
                                           const Suite& suite) {
  if (node == nullptr || !node->is_object()) {
    r.add(ErrorKind::schema, path, "input selector must be an object with one of item, class or all");
    return std::nullopt;
  }
  InputSelector selector;
  int modes = 0;
  if (auto item = r.string(*node, "item", path, false)) {
    selector.mode = InputSelector::Mode::item;
    selector.item_id = *item;
    ++modes;
    if (suite.find_item(*item) == nullptr) {
      r.add(ErrorKind::unresolved_reference, child(path, "item"), "corpus item '" + *item + "' does not exist");
      return std::nullopt;
    }
  }
  if (auto cls = r.string(*node, "class", path, false)) {
    selector.mode = InputSelector::Mode::class_filter;
    selector.class_label = *cls;
    ++modes;
  }
  if (auto all = r.boolean(*node, "all", path); all && *all) {
    selector.mode = InputSelector::Mode::all;
    ++modes;
  }
  if (modes != 1) {
    r.add(ErrorKind::schema, path, "input selector needs exactly one of item, class or all");
    return std::nullopt;
  }
  for (const auto& type_text : r.strings(*node, "variant_types", path)) {
    auto type = parse_variant_type(type_text);
    if (!type) {
      r.add(ErrorKind::schema, child(path, "variant_types"), "unknown variant type '" + type_text + "'");
      return std::nullopt;
    }
    selector.variant_types.push_back(*type);
  }
  return selector;
}

std::optional<AggregationSpec> read_aggregation(Reader& r, const nlohmann::json* node, const std::string& path) {
  if (node == nullptr || !node->is_object()) {
    r.add(ErrorKind::schema, path, "aggregation must be an object with a rule");
    return std::nullopt;
  }
  auto rule_text = r.string(*node, "rule", path);
  if (!rule_text) return std::nullopt;
  auto rule = parse_aggregation_rule(*rule_text);
  if (!rule) {
    r.add(ErrorKind::schema, child(path, "rule"), "unknown aggregation rule '" + *rule_text + "'");
    return std::nullopt;
  }
  AggregationSpec spec;
  spec.rule = *rule;
  bool ok = true;
  spec.threshold = r.number(*node, "threshold", path, false);
  spec.confidence = r.number(*node, "confidence", path, false);
  if (auto exclude = r.boolean(*node, "exclude_errors", path)) spec.exclude_errors = *exclude;
  bool needs_threshold = spec.rule == AggregationRule::pass_rate || spec.rule == AggregationRule::wilson_lower_bound;
  bool needs_confidence = spec.rule == AggregationRule::wilson_lower_bound;
  if (needs_threshold != spec.threshold.has_value()) {
    r.add(ErrorKind::bound_violation, child(path, "threshold"),
          needs_threshold ? "rule requires a threshold" : "rule takes no threshold");
    ok = false;
  } else if (spec.threshold && !(*spec.threshold >= 0.0 && *spec.threshold <= 1.0)) {
    r.add(ErrorKind::bound_violation, child(path, "threshold"), "threshold must be in [0,1]");
    ok = false;
  }
  if (needs_confidence != spec.confidence.has_value()) {
    r.add(ErrorKind::bound_violation, child(path, "confidence"),
          needs_confidence ? "rule requires a confidence" : "rule takes no confidence");
    ok = false;
  } else if (spec.confidence && !(*spec.confidence > 0.0 && *spec.confidence < 1.0)) {
    r.add(ErrorKind::bound_violation, child(path, "confidence"), "confidence must be in (0,1)");
    ok = false;
  }
  if (!ok) return std::nullopt;
  return spec;
}

std::size_t count_selected(const Suite& suite, const InputSelector& selector) {
  std::size_t n = 0;
  for (const auto& item : suite.corpus) {
    if (selector.mode == InputSelector::Mode::item && item.item_id != selector.item_id) continue;
    if (selector.mode == InputSelector::Mode::class_filter && item.class_label != selector.class_label) continue;
    if (!selector.variant_types.empty() &&
        std::find(selector.variant_types.begin(), selector.variant_types.end(), item.variant_type) ==
            selector.variant_types.end()) {
      continue;
    }
    ++n;
  }
  return n;
}

std::optional<TestCase> read_case(Reader& r, const nlohmann::json& node, const std::string& path,
                                  const Suite& suite) {
  std::size_t problems = 0;
  auto fail = [&](ErrorKind kind, std::string p, std::string message) {
    r.add(kind, std::move(p), std::move(message));
    ++problems;
  };
  TestCase tc;
  auto id = r.string(node, "case_id", path);
  auto sut_id = r.string(node, "sut_id", path);
  auto oracle_id = r.string(node, "oracle", path);
  if (!id || !sut_id || !oracle_id) return std::nullopt;
  tc.case_id = *id;
  tc.sut_id = *sut_id;
  tc.oracle_id = *oracle_id;
  tc.properties = r.strings(node, "properties", path, true);

  const SutSpec* sut = suite.find_sut(tc.sut_id);
  if (sut == nullptr) fail(ErrorKind::unresolved_reference, child(path, "sut_id"), "SUT '" + tc.sut_id + "' is not defined");

  const OracleSpec* oracle = suite.find_oracle(tc.oracle_id);
  if (oracle == nullptr) {
    fail(ErrorKind::unresolved_reference, child(path, "oracle"), "oracle '" + tc.oracle_id + "' is not defined");
  } else if (!is_atomic(oracle->kind)) {
    fail(ErrorKind::bound_violation, child(path, "oracle"),
         "case oracle must be atomic; '" + tc.oracle_id + "' is " + std::string(to_string(oracle->kind)));
  } else if (oracle->kind == OracleKind::llm_judge && oracle->judge_sut == tc.sut_id) {
    fail(ErrorKind::bound_violation, child(path, "oracle"), "judge SUT must differ from the SUT under test");
  }

  if (auto repeats = r.integer(node, "repeats", path, false)) {
    if (*repeats < 1 || *repeats > 1'000'000) {
      fail(ErrorKind::bound_violation, child(path, "repeats"), "repeats must be in [1, 1000000]");
    }
    tc.repeats = static_cast<int>(std::clamp<std::int64_t>(*repeats, 1, 1'000'000));
  }

  bool needs_repeatability = false;
  if (tc.properties.empty()) fail(ErrorKind::bound_violation, child(path, "properties"), "a case checks at least one property");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < tc.properties.size(); ++i) {
    const auto& pid = tc.properties[i];
    std::string p = child(child(path, "properties"), i);
    if (!seen.insert(pid).second) {
      fail(ErrorKind::duplicate_id, p, "property '" + pid + "' listed twice");
      continue;
    }
    const Property* property = suite.find_property(pid);
    if (property == nullptr) {
      fail(ErrorKind::unresolved_reference, p, "property '" + pid + "' is not defined");
      continue;
    }
    const OracleSpec* checker = suite.find_oracle(property->oracle_ref);
    if (checker == nullptr) continue;  // reported on the property itself
    if (is_atomic(checker->kind) && checker->oracle_id != tc.oracle_id) {
      fail(ErrorKind::bound_violation, p,
           fmt::format("property '{}' is checked by '{}', not by the case oracle '{}'", pid, checker->oracle_id,
                       tc.oracle_id));
    }
    if (checker->kind == OracleKind::repeatability) needs_repeatability = true;
  }

  auto selector = read_selector(r, r.field(node, "input"), child(path, "input"), suite);
  if (!selector) {
    ++problems;
  } else {
    tc.input = *selector;
    if (count_selected(suite, tc.input) == 0) {
      fail(ErrorKind::bound_violation, child(path, "input"), "selector matches no corpus items");
    }
  }

  auto aggregation = read_aggregation(r, r.field(node, "aggregation"), child(path, "aggregation"));
  if (!aggregation) {
    ++problems;
  } else {
    tc.aggregation = *aggregation;
    bool identity = tc.aggregation.rule == AggregationRule::identity;
    if (tc.repeats == 1 && !identity) {
      fail(ErrorKind::bound_violation, child(path, "aggregation"),
           fmt::format("repeats = 1 requires the identity rule, got {}", to_string(tc.aggregation.rule)));
    } else if (tc.repeats > 1 && identity) {
      fail(ErrorKind::bound_violation, child(path, "aggregation"), "identity rule requires repeats = 1");
    }
  }
  if (needs_repeatability && tc.repeats < 2) {
    fail(ErrorKind::bound_violation, child(path, "repeats"), "repeatability properties need at least 2 repeats");
  }

  if (const auto* budget_node = r.field(node, "budget")) {
    Budget budget;
    std::string bp = child(path, "budget");
    if (auto v = r.integer(*budget_node, "max_actions", bp, false)) {
      if (*v < 1) fail(ErrorKind::bound_violation, child(bp, "max_actions"), "max_actions must be positive");
      budget.max_actions = static_cast<int>(std::clamp<std::int64_t>(*v, 1, std::numeric_limits<int>::max()));
    }
    if (auto v = r.integer(*budget_node, "max_output_tokens", bp, false)) {
      if (*v < 1) fail(ErrorKind::bound_violation, child(bp, "max_output_tokens"), "max_output_tokens must be positive");
      budget.max_output_tokens = static_cast<int>(std::clamp<std::int64_t>(*v, 1, std::numeric_limits<int>::max()));
    }
    tc.budget = budget;
  }
  if (problems > 0) return std::nullopt;
  return tc;
}

void check_sut_assets(Reader& r, const SutSpec& sut, const std::string& path, const Suite& suite) {
  if (!is_registered_component(sut.component)) {
    r.add(ErrorKind::unresolved_reference, child(path, "component"),
          "component '" + sut.component + "' is not a registered component kind");
  }
  if (sut.model.kind == BindingKind::scripted && !suite.scripted.contains(sut.model.name)) {
    r.add(ErrorKind::unresolved_reference, child(child(path, "model"), "name"),
          "scripted table '" + sut.model.name + "' is not defined under assets.scripted");
  }
  if (sut.model.kind == BindingKind::stochastic && !suite.distributions.contains(sut.model.name)) {
    r.add(ErrorKind::unresolved_reference, child(child(path, "model"), "name"),
          "distribution '" + sut.model.name + "' is not defined under assets.distributions");
  }
  if (sut.prompt_id.empty()) {
    r.add(ErrorKind::schema, child(path, "prompt"), "a prompt template id is required");
  } else if (auto it = suite.prompts.find(sut.prompt_id); it == suite.prompts.end()) {
    r.add(ErrorKind::unresolved_reference, child(path, "prompt"),
          "prompt template '" + sut.prompt_id + "' is not defined under assets.prompts");
  } else if (it->second.find("{input}") == std::string::npos) {
    r.add(ErrorKind::schema, child(path, "prompt"), "prompt template '" + sut.prompt_id + "' lacks {input}");
  }
  if (sut.component == kComponentClassifyIssueReport) {
    bool has_finder = std::any_of(sut.tools.begin(), sut.tools.end(), [](const std::string& tool) {
      return tool.substr(0, tool.find('@')) == kDuplicationFinderTool;
    });
    if (!has_finder) {
      r.add(ErrorKind::unresolved_reference, child(path, "tools"),
            "classify-issue-report requires the DuplicationFinder tool");
    }
  }
}

}  // namespace

SuiteValidation validate_suite(const nlohmann::json& document, const std::filesystem::path& base_dir) {
  SuiteValidation result;
  auto& errors = result.errors;
  Reader r(errors, base_dir);
  if (!document.is_object()) {
    r.add(ErrorKind::schema, "", "suite document must be a JSON object");
    return result;
  }
  Suite suite;

  if (auto version = r.integer(document, "schema_version", "")) {
    if (*version != kSuiteSchemaVersion) {
      r.add(ErrorKind::schema, "/schema_version", fmt::format("unsupported schema version {}", *version));
    }
  }
  if (auto id = r.string(document, "suite_id", "")) suite.suite_id = *id;
  if (auto seed = r.unsigned64(document, "seed", "")) suite.seed = *seed;
  suite.labels = document.contains("labels") ? r.strings(document, "labels", "") : label_set();
  if (suite.labels.empty()) r.add(ErrorKind::bound_violation, "/labels", "label set must be non-empty");
  {
    std::set<std::string> seen;
    for (const auto& label : suite.labels) {
      if (!seen.insert(label).second) r.add(ErrorKind::duplicate_id, "/labels", "label '" + label + "' repeated");
    }
  }

  if (const auto* corpus = r.field(document, "corpus")) {
    read_corpus_section(r, *corpus, "/corpus", suite);
  } else {
    r.add(ErrorKind::schema, "/corpus", "corpus reference missing");
  }

  if (const auto* assets = r.field(document, "assets")) {
    if (const auto* prompts = r.field(*assets, "prompts")) read_prompts(r, *prompts, "/assets/prompts", suite);
    if (const auto* scripted = r.field(*assets, "scripted")) {
      read_asset_map(r, *scripted, "/assets/scripted", [&](const std::string& key, const nlohmann::json& doc,
                                                          const std::string& p) {
        if (auto table = read_scripted_table(r, doc, p)) suite.scripted[key] = std::move(*table);
      });
    }
    if (const auto* dists = r.field(*assets, "distributions")) {
      read_asset_map(r, *dists, "/assets/distributions", [&](const std::string& key, const nlohmann::json& doc,
                                                            const std::string& p) {
        if (auto dist = read_distribution(r, doc, p)) suite.distributions[key] = std::move(*dist);
      });
    }
    if (const auto* index = r.field(*assets, "issue_index")) {
      read_issue_index(r, *index, "/assets/issue_index", suite);
    }
  }

  if (const auto* suts = r.array(document, "suts", "")) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < suts->size(); ++i) {
      std::string p = child("/suts", i);
      auto sut = parse_sut((*suts)[i], p, errors);
      if (!sut) continue;
      if (!seen.insert(sut->sut_id).second) {
        r.add(ErrorKind::duplicate_id, child(p, "sut_id"), "sut_id '" + sut->sut_id + "' is not unique");
        continue;
      }
      check_sut_assets(r, *sut, p, suite);
      suite.suts.push_back(std::move(*sut));
    }
  }

  if (const auto* goals = r.array(document, "goals", "")) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < goals->size(); ++i) {
      std::string p = child("/goals", i);
      auto id = r.string((*goals)[i], "goal_id", p);
      auto description = r.string((*goals)[i], "description", p, false);
      if (!id) continue;
      if (!seen.insert(*id).second) {
        r.add(ErrorKind::duplicate_id, child(p, "goal_id"), "goal_id '" + *id + "' is not unique");
        continue;
      }
      suite.goals.push_back({*id, description.value_or("")});
    }
  }

  if (const auto* oracles = r.array(document, "oracles", "")) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < oracles->size(); ++i) {
      std::string p = child("/oracles", i);
      auto oracle = read_oracle(r, (*oracles)[i], p, suite);
      if (!oracle) continue;
      if (!seen.insert(oracle->oracle_id).second) {
        r.add(ErrorKind::duplicate_id, child(p, "oracle_id"), "oracle_id '" + oracle->oracle_id + "' is not unique");
        continue;
      }
      suite.oracles.push_back(std::move(*oracle));
    }
  }

  if (const auto* properties = r.array(document, "properties", "")) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < properties->size(); ++i) {
      std::string p = child("/properties", i);
      const auto& node = (*properties)[i];
      auto id = r.string(node, "property_id", p);
      auto goal = r.string(node, "goal_id", p);
      auto description = r.string(node, "description", p, false);
      auto oracle_ref = r.string(node, "oracle_ref", p);
      if (!id || !goal || !oracle_ref) continue;
      if (!seen.insert(*id).second) {
        r.add(ErrorKind::duplicate_id, child(p, "property_id"), "property_id '" + *id + "' is not unique");
        continue;
      }
      bool ok = true;
      if (std::none_of(suite.goals.begin(), suite.goals.end(), [&](const Goal& g) { return g.goal_id == *goal; })) {
        r.add(ErrorKind::unresolved_reference, child(p, "goal_id"), "goal '" + *goal + "' is not defined");
        ok = false;
      }
      if (suite.find_oracle(*oracle_ref) == nullptr) {
        r.add(ErrorKind::unresolved_reference, child(p, "oracle_ref"), "oracle '" + *oracle_ref + "' is not defined");
        ok = false;
      }
      if (ok) suite.properties.push_back({*id, *goal, description.value_or(""), *oracle_ref});
    }
  }
  for (std::size_t i = 0; i < suite.goals.size(); ++i) {
    const auto& goal = suite.goals[i];
    if (std::none_of(suite.properties.begin(), suite.properties.end(),
                     [&](const Property& p) { return p.goal_id == goal.goal_id; })) {
      r.add(ErrorKind::bound_violation, child("/goals", i), "goal '" + goal.goal_id + "' has no properties");
    }
  }

  if (const auto* cases = r.array(document, "cases", "")) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < cases->size(); ++i) {
      std::string p = child("/cases", i);
      auto tc = read_case(r, (*cases)[i], p, suite);
      if (!tc) continue;
      if (!seen.insert(tc->case_id).second) {
        r.add(ErrorKind::duplicate_id, child(p, "case_id"), "case_id '" + tc->case_id + "' is not unique");
        continue;
      }
      suite.cases.push_back(std::move(*tc));
    }
  }

  if (errors.empty()) result.suite = std::move(suite);
  return result;
}

nlohmann::json read_suite_document(const std::filesystem::path& path) {
  std::string contents = read_file(path);
  try {
    return nlohmann::json::parse(contents);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

SuiteValidation load_suite(const std::filesystem::path& path) {
  return validate_suite(read_suite_document(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::json to_json(const SutSpec& sut) {
  nlohmann::json model = {{"kind", to_string(sut.model.kind)}, {"name", sut.model.name}};
  if (sut.model.endpoint) model["endpoint"] = *sut.model.endpoint;
  if (sut.model.retries != 0) model["retries"] = sut.model.retries;
  if (sut.model.timeout_ms != ModelBinding{}.timeout_ms) model["timeout_ms"] = sut.model.timeout_ms;
  nlohmann::json config = {{"temperature", sut.configuration.temperature},
                           {"top_p", sut.configuration.top_p},
                           {"n", sut.configuration.n},
                           {"max_tokens", sut.configuration.max_tokens}};
  if (sut.configuration.top_k) config["top_k"] = *sut.configuration.top_k;
  if (sut.configuration.seed) config["seed"] = *sut.configuration.seed;
  nlohmann::json out = {{"sut_id", sut.sut_id},   {"component", sut.component}, {"model", model},
                        {"configuration", config}, {"tools", sut.tools}};
  if (!sut.prompt_id.empty()) out["prompt"] = sut.prompt_id;
  return out;
}

namespace {

nlohmann::json to_json(const OracleSpec& oracle) {
  nlohmann::json params = nlohmann::json::object();
  switch (oracle.kind) {
    case OracleKind::single_label:
      params["labels"] = oracle.labels;
      params["id_labels"] = oracle.id_labels;
      params["strict"] = oracle.strict;
      break;
    case OracleKind::exact_match:
      if (oracle.expected_from_class) {
        params["expected_from"] = "class";
      } else {
        params["expected"] = oracle.expected;
      }
      break;
    case OracleKind::regex_match: params["pattern"] = oracle.pattern; break;
    case OracleKind::contains: params["needle"] = oracle.needle; break;
    case OracleKind::json_format: params["required_keys"] = oracle.required_keys; break;
    case OracleKind::similarity_threshold:
      params["reference"] = oracle.reference;
      params["threshold"] = oracle.threshold;
      if (oracle.scorer_endpoint) params["scorer_endpoint"] = *oracle.scorer_endpoint;
      break;
    case OracleKind::llm_judge:
      params["judge"] = oracle.judge_sut;
      params["rubric"] = oracle.rubric;
      break;
    case OracleKind::duplicate_alignment:
    case OracleKind::repeatability:
    case OracleKind::paraphrase_agreement:
    case OracleKind::format_agreement:
      break;
  }
  return {{"oracle_id", oracle.oracle_id}, {"kind", to_string(oracle.kind)}, {"parameters", params}};
}

nlohmann::json to_json(const TestCase& tc) {
  nlohmann::json input = nlohmann::json::object();
  switch (tc.input.mode) {
    case InputSelector::Mode::item: input["item"] = tc.input.item_id; break;
    case InputSelector::Mode::class_filter: input["class"] = tc.input.class_label; break;
    case InputSelector::Mode::all: input["all"] = true; break;
  }
  if (!tc.input.variant_types.empty()) {
    nlohmann::json types = nlohmann::json::array();
    for (auto type : tc.input.variant_types) types.push_back(to_string(type));
    input["variant_types"] = types;
  }
  nlohmann::json aggregation = {{"rule", to_string(tc.aggregation.rule)},
                                {"exclude_errors", tc.aggregation.exclude_errors}};
  if (tc.aggregation.threshold) aggregation["threshold"] = *tc.aggregation.threshold;
  if (tc.aggregation.confidence) aggregation["confidence"] = *tc.aggregation.confidence;
  nlohmann::json out = {{"case_id", tc.case_id}, {"sut_id", tc.sut_id},   {"properties", tc.properties},
                        {"input", input},        {"repeats", tc.repeats}, {"oracle", tc.oracle_id},
                        {"aggregation", aggregation}};
  if (tc.budget) {
    nlohmann::json budget = nlohmann::json::object();
    if (tc.budget->max_actions) budget["max_actions"] = *tc.budget->max_actions;
    if (tc.budget->max_output_tokens) budget["max_output_tokens"] = *tc.budget->max_output_tokens;
    out["budget"] = budget;
  }
  return out;
}

nlohmann::json definition_sections(const Suite& suite) {
  nlohmann::json goals = nlohmann::json::array();
  for (const auto& g : suite.goals) goals.push_back({{"goal_id", g.goal_id}, {"description", g.description}});
  nlohmann::json properties = nlohmann::json::array();
  for (const auto& p : suite.properties) {
    properties.push_back({{"property_id", p.property_id},
                          {"goal_id", p.goal_id},
                          {"description", p.description},
                          {"oracle_ref", p.oracle_ref}});
  }
  nlohmann::json oracles = nlohmann::json::array();
  for (const auto& o : suite.oracles) oracles.push_back(to_json(o));
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : suite.cases) cases.push_back(to_json(c));
  return {{"schema_version", suite.schema_version},
          {"suite_id", suite.suite_id},
          {"labels", suite.labels},
          {"goals", goals},
          {"properties", properties},
          {"oracles", oracles},
          {"cases", cases}};
}

}  // namespace

nlohmann::json serialize_suite(const Suite& suite) {
  nlohmann::json doc = definition_sections(suite);
  doc["seed"] = suite.seed;
  nlohmann::json suts = nlohmann::json::array();
  for (const auto& s : suite.suts) suts.push_back(to_json(s));
  doc["suts"] = suts;

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& item : suite.corpus) rows.push_back(to_json(item));
  doc["corpus"] = {{"rows", rows}};

  nlohmann::json prompts = nlohmann::json::object();
  for (const auto& [key, text] : suite.prompts) prompts[key] = {{"text", text}};
  nlohmann::json scripted = nlohmann::json::object();
  for (const auto& [key, table] : suite.scripted) {
    scripted[key] = {{"by_prompt", table.by_prompt}, {"by_item", table.by_item}, {"fallback", table.fallback}};
  }
  nlohmann::json distributions = nlohmann::json::object();
  for (const auto& [key, dist] : suite.distributions) {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [item, outputs] : dist.entries) {
      nlohmann::json list = nlohmann::json::array();
      for (const auto& w : outputs) list.push_back({{"output", w.output}, {"probability", w.probability}});
      entries[item] = list;
    }
    distributions[key] = {{"entries", entries}};
  }
  nlohmann::json issues = nlohmann::json::array();
  for (const auto& issue : suite.issue_index) issues.push_back({{"issue_id", issue.issue_id}, {"text", issue.text}});
  doc["assets"] = {{"prompts", prompts},
                   {"scripted", scripted},
                   {"distributions", distributions},
                   {"issue_index", {{"issues", issues}}}};
  return doc;
}

std::string suite_digest(const Suite& suite) {
  nlohmann::json identity = definition_sections(suite);
  nlohmann::json suts = nlohmann::json::array();
  for (const auto& s : suite.suts) suts.push_back({{"sut_id", s.sut_id}, {"component", s.component}});
  identity["suts"] = suts;
  identity["corpus_digest"] = corpus_digest(suite.corpus);
  return sha256_hex(identity.dump());
}

void bind_suts(nlohmann::json& document, const std::vector<nlohmann::json>& replacements) {
  if (!document.contains("suts") || !document["suts"].is_array()) {
    throw Error(ErrorKind::precondition, "suite document has no suts array");
  }
  for (const auto& replacement : replacements) {
    if (!replacement.is_object() || !replacement.contains("sut_id") || !replacement["sut_id"].is_string()) {
      throw Error(ErrorKind::precondition, "SUT binding must be an object with a sut_id");
    }
    std::string id = replacement["sut_id"].get<std::string>();
    bool found = false;
    for (auto& sut : document["suts"]) {
      if (sut.is_object() && sut.value("sut_id", "") == id) {
        sut = replacement;
        found = true;
      }
    }
    if (!found) throw Error(ErrorKind::precondition, "no SUT '" + id + "' in the suite to bind");
  }
}

}  // namespace aggrtest
