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

#include "aggrtest/report.hpp"

#include <fmt/format.h>

#include "aggrtest/corpus.hpp"
#include "aggrtest/error.hpp"
#include "aggrtest/suite.hpp"

namespace aggrtest {

namespace {

using nlohmann::json;

template <typename T>
T get(const json& node, const char* key) {
  return node.at(key).get<T>();
}

template <typename Enum, typename Parse>
Enum enum_field(const json& node, const char* key, Parse parse) {
  auto text = get<std::string>(node, key);
  auto value = parse(text);
  if (!value) throw Error(ErrorKind::parse, fmt::format("unknown {} '{}'", key, text));
  return *value;
}

json to_json(const RunRecord& record, const Verdict& verdict) {
  json trace = json::array();
  for (const auto& call : record.tool_trace) {
    trace.push_back({{"tool", call.tool}, {"input", call.input}, {"output", call.output}});
  }
  json out = {{"run_index", record.run_index},
              {"input_item_id", record.input_item_id},
              {"input_text", record.input_text},
              {"prompt_sent", record.prompt_sent},
              {"raw_output", record.raw_output},
              {"tool_trace", trace},
              {"seed_used", record.seed_used},
              {"latency_ms", record.latency_ms},
              {"model_name", record.model_name},
              {"model_calls", record.model_calls},
              {"scripted_miss", record.scripted_miss},
              {"verdict", to_json(verdict)}};
  if (record.error) out["error"] = {{"kind", to_string(record.error->kind)}, {"message", record.error->message}};
  return out;
}

RunRecord record_from_json(const json& node, const std::string& case_id) {
  RunRecord record;
  record.case_id = case_id;
  record.run_index = get<int>(node, "run_index");
  record.input_item_id = get<std::string>(node, "input_item_id");
  record.input_text = get<std::string>(node, "input_text");
  record.prompt_sent = get<std::string>(node, "prompt_sent");
  record.raw_output = get<std::string>(node, "raw_output");
  for (const auto& call : node.at("tool_trace")) {
    record.tool_trace.push_back(
        {get<std::string>(call, "tool"), get<std::string>(call, "input"), get<std::string>(call, "output")});
  }
  record.seed_used = get<std::uint64_t>(node, "seed_used");
  record.latency_ms = get<std::int64_t>(node, "latency_ms");
  record.model_name = get<std::string>(node, "model_name");
  record.model_calls = get<int>(node, "model_calls");
  record.scripted_miss = get<bool>(node, "scripted_miss");
  if (node.contains("error")) {
    const auto& error = node.at("error");
    record.error = RunError{enum_field<ErrorKind>(error, "kind", parse_error_kind), get<std::string>(error, "message")};
  }
  return record;
}

json to_json(const CaseResult& result) {
  const auto& agg = result.aggregate;
  json aggregate = {{"rule", to_json(agg.rule)},       {"status", to_string(agg.status)},
                    {"pass_count", agg.pass_count},    {"counted", agg.counted},
                    {"runs", agg.run_verdicts.size()}, {"pass_rate", agg.pass_rate},
                    {"detail", agg.detail}};
  if (agg.interval) aggregate["interval"] = {{"low", agg.interval->low}, {"high", agg.interval->high}};
  json runs = json::array();
  for (std::size_t i = 0; i < result.runs.records.size(); ++i) {
    runs.push_back(to_json(result.runs.records[i], result.runs.verdicts[i]));
  }
  return {{"case_id", result.case_id},     {"definition_id", result.definition_id},
          {"sut_id", result.sut_id},       {"item_id", result.item_id},
          {"oracle", result.oracle_id},    {"properties", result.properties},
          {"case_seed", result.case_seed}, {"aggregate", aggregate},
          {"runs", runs}};
}

CaseResult case_from_json(const json& node) {
  CaseResult result;
  result.case_id = get<std::string>(node, "case_id");
  result.definition_id = get<std::string>(node, "definition_id");
  result.sut_id = get<std::string>(node, "sut_id");
  result.item_id = get<std::string>(node, "item_id");
  result.oracle_id = get<std::string>(node, "oracle");
  result.properties = get<std::vector<std::string>>(node, "properties");
  result.case_seed = get<std::uint64_t>(node, "case_seed");
  result.runs.case_id = result.case_id;
  for (const auto& run : node.at("runs")) {
    result.runs.records.push_back(record_from_json(run, result.case_id));
    result.runs.verdicts.push_back(verdict_from_json(run.at("verdict")));
  }
  const auto& agg = node.at("aggregate");
  AggregateVerdict& out = result.aggregate;
  out.case_id = result.case_id;
  out.run_verdicts = result.runs.verdicts;
  out.rule = aggregation_from_json(agg.at("rule"));
  out.status = enum_field<VerdictStatus>(agg, "status", parse_verdict_status);
  out.pass_count = get<int>(agg, "pass_count");
  out.counted = get<int>(agg, "counted");
  out.pass_rate = get<double>(agg, "pass_rate");
  out.detail = get<std::string>(agg, "detail");
  if (agg.contains("interval")) {
    out.interval = Interval{get<double>(agg.at("interval"), "low"), get<double>(agg.at("interval"), "high")};
  }
  if (get<std::size_t>(agg, "runs") != out.run_verdicts.size()) {
    throw Error(ErrorKind::parse, "case '" + result.case_id + "' run count does not match its runs");
  }
  return result;
}

json to_json(const ConsistencyResult& result) {
  json verdicts = json::object();
  for (const auto& [subject, verdict] : result.verdicts) verdicts[subject] = to_json(verdict);
  return {{"case_id", result.case_id},   {"oracle", result.oracle_id},        {"kind", to_string(result.kind)},
          {"properties", result.properties}, {"verdicts", verdicts},        {"passing", result.passing},
          {"assessed", result.assessed}, {"share", result.share},            {"detail", result.detail}};
}

ConsistencyResult consistency_from_json(const json& node) {
  ConsistencyResult result;
  result.case_id = get<std::string>(node, "case_id");
  result.oracle_id = get<std::string>(node, "oracle");
  result.kind = enum_field<OracleKind>(node, "kind", parse_oracle_kind);
  result.properties = get<std::vector<std::string>>(node, "properties");
  for (const auto& [subject, verdict] : node.at("verdicts").items()) result.verdicts[subject] = verdict_from_json(verdict);
  result.passing = get<int>(node, "passing");
  result.assessed = get<int>(node, "assessed");
  result.share = get<double>(node, "share");
  result.detail = get<std::string>(node, "detail");
  return result;
}

}  // namespace

nlohmann::json to_json(const Verdict& verdict) {
  json out = {{"status", to_string(verdict.status)}, {"detail", verdict.detail}};
  if (verdict.score) out["score"] = *verdict.score;
  return out;
}

Verdict verdict_from_json(const nlohmann::json& node) {
  Verdict verdict;
  verdict.status = enum_field<VerdictStatus>(node, "status", parse_verdict_status);
  verdict.detail = get<std::string>(node, "detail");
  if (node.contains("score")) verdict.score = get<double>(node, "score");
  return verdict;
}

nlohmann::json to_json(const AggregationSpec& spec) {
  json out = {{"rule", to_string(spec.rule)}, {"exclude_errors", spec.exclude_errors}};
  if (spec.threshold) out["threshold"] = *spec.threshold;
  if (spec.confidence) out["confidence"] = *spec.confidence;
  return out;
}

AggregationSpec aggregation_from_json(const nlohmann::json& node) {
  AggregationSpec spec;
  spec.rule = enum_field<AggregationRule>(node, "rule", parse_aggregation_rule);
  if (node.contains("exclude_errors")) spec.exclude_errors = get<bool>(node, "exclude_errors");
  if (node.contains("threshold")) spec.threshold = get<double>(node, "threshold");
  if (node.contains("confidence")) spec.confidence = get<double>(node, "confidence");
  return spec;
}

nlohmann::json to_json(const RunReport& report) {
  json suts = json::array();
  for (const auto& sut : report.suts) suts.push_back(to_json(sut));
  json cases = json::array();
  for (const auto& result : report.cases) cases.push_back(to_json(result));
  json consistency = json::array();
  for (const auto& result : report.consistency) consistency.push_back(to_json(result));
  json metrics = json::array();
  for (const auto& m : report.metrics) {
    metrics.push_back(
        {{"oracle", m.oracle_id}, {"scope", m.scope}, {"passing", m.passing}, {"total", m.total}, {"share", m.share}});
  }
  json out = {{"schema_version", report.schema_version},
              {"suite_id", report.suite_id},
              {"suite_digest", report.suite_digest},
              {"corpus_digest", report.corpus_digest},
              {"seed", report.seed},
              {"suts", suts},
              {"summary",
               {{"passed", report.summary.passed},
                {"failed", report.summary.failed},
                {"errored", report.summary.errored}}},
              {"metrics", metrics},
              {"consistency", consistency},
              {"cases", cases}};
  if (report.sut_filter) out["sut_filter"] = *report.sut_filter;
  return out;
}

RunReport run_report_from_json(const nlohmann::json& node) {
  try {
    RunReport report;
    report.schema_version = get<int>(node, "schema_version");
    if (report.schema_version != kReportSchemaVersion) {
      throw Error(ErrorKind::parse, fmt::format("unsupported report schema_version {}", report.schema_version));
    }
    report.suite_id = get<std::string>(node, "suite_id");
    report.suite_digest = get<std::string>(node, "suite_digest");
    report.corpus_digest = get<std::string>(node, "corpus_digest");
    report.seed = get<std::uint64_t>(node, "seed");
    if (node.contains("sut_filter")) report.sut_filter = get<std::string>(node, "sut_filter");
    const auto& suts = node.at("suts");
    for (std::size_t i = 0; i < suts.size(); ++i) {
      std::vector<ValidationError> errors;
      auto sut = parse_sut(suts[i], "/suts/" + std::to_string(i), errors);
      if (!sut) {
        throw Error(ErrorKind::parse, errors.empty() ? "invalid SUT echo" : format_validation_error(errors.front()));
      }
      report.suts.push_back(std::move(*sut));
    }
    for (const auto& c : node.at("cases")) report.cases.push_back(case_from_json(c));
    for (const auto& c : node.at("consistency")) report.consistency.push_back(consistency_from_json(c));
    for (const auto& m : node.at("metrics")) {
      report.metrics.push_back({get<std::string>(m, "oracle"), get<std::string>(m, "scope"), get<int>(m, "passing"),
                                get<int>(m, "total"), get<double>(m, "share")});
    }
    const auto& summary = node.at("summary");
    report.summary = {get<int>(summary, "passed"), get<int>(summary, "failed"), get<int>(summary, "errored")};
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, std::string("malformed report: ") + e.what());
  }
}

std::string serialize_report(const RunReport& report) { return to_json(report).dump(2) + "\n"; }

RunReport read_report(const std::filesystem::path& path) {
  std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
  return run_report_from_json(doc);
}

std::string render_report_text(const RunReport& report) {
  std::string out = fmt::format("suite {}  seed {}  digest {}\n", report.suite_id, report.seed,
                                report.suite_digest.substr(0, 12));
  std::size_t width = 4;
  for (const auto& c : report.cases) width = std::max(width, c.case_id.size());
  out += fmt::format("{:<{}}  {:<6}  {:>7}  {:>6}  {:<18}  {}\n", "CASE", width, "STATUS", "PASSED", "RATE", "RULE",
                     "DETAIL");
  for (const auto& c : report.cases) {
    const auto& agg = c.aggregate;
    out += fmt::format("{:<{}}  {:<6}  {:>7}  {:>6.3f}  {:<18}  {}\n", c.case_id, width, to_string(agg.status),
                       fmt::format("{}/{}", agg.pass_count, agg.counted), agg.pass_rate, to_string(agg.rule.rule),
                       agg.detail);
  }
  if (!report.metrics.empty()) {
    out += "\nmetrics\n";
    for (const auto& m : report.metrics) {
      out += fmt::format("  {:<6} {:<10} {:.4f} ({}/{})\n", m.oracle_id, m.scope, m.share, m.passing, m.total);
    }
  }
  if (!report.consistency.empty()) {
    out += "\nconsistency\n";
    for (const auto& c : report.consistency) {
      out += fmt::format("  {:<6} {:<22} {}  {:.4f}  {}\n", c.oracle_id, c.case_id, to_string(c.kind), c.share, c.detail);
      for (const auto& [subject, verdict] : c.verdicts) {
        if (verdict.status != VerdictStatus::pass) {
          out += fmt::format("      {} {}: {}\n", to_string(verdict.status), subject, verdict.detail);
        }
      }
    }
  }
  out += fmt::format("\nsummary: {} passed, {} failed, {} errored\n", report.summary.passed, report.summary.failed,
                     report.summary.errored);
  return out;
}

}  // namespace aggrtest
