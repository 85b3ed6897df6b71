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

#include "aggrtest/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "aggrtest/corpus.hpp"
#include "aggrtest/error.hpp"
#include "aggrtest/regression.hpp"
#include "aggrtest/report.hpp"
#include "aggrtest/runner.hpp"
#include "aggrtest/suite.hpp"
#include "aggrtest/variants.hpp"

namespace aggrtest {

namespace {

namespace fs = std::filesystem;

nlohmann::json read_json_file(const fs::path& path) {
  std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, path.string() + ": " + e.what());
  }
}

// A binding file holds one SUT object or an array of them.
std::vector<nlohmann::json> read_bindings(const std::vector<std::string>& paths) {
  std::vector<nlohmann::json> suts;
  for (const auto& path : paths) {
    auto doc = read_json_file(path);
    if (doc.is_array()) {
      for (auto& sut : doc) suts.push_back(std::move(sut));
    } else {
      suts.push_back(std::move(doc));
    }
  }
  return suts;
}

struct SuiteInputs {
  std::string path;
  std::vector<std::string> bind;
  std::optional<int> repeats;
};

// Reads the document, applies --bind and --repeats, validates. Returns
// nullopt after printing diagnostics when the suite is invalid.
std::optional<Suite> prepare_suite(const SuiteInputs& inputs, std::ostream& err) {
  auto doc = read_suite_document(inputs.path);
  if (!inputs.bind.empty()) bind_suts(doc, read_bindings(inputs.bind));
  if (inputs.repeats && doc.contains("cases") && doc["cases"].is_array()) {
    for (auto& c : doc["cases"]) {
      if (c.is_object()) c["repeats"] = *inputs.repeats;
    }
  }
  auto validation = validate_suite(doc, fs::path(inputs.path).parent_path());
  if (!validation.ok()) {
    for (const auto& e : validation.errors) err << format_validation_error(e) << "\n";
    return std::nullopt;
  }
  return std::move(validation.suite);
}

std::vector<std::string> parse_labels(const std::string& text) {
  if (text.empty()) return label_set();
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) labels.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return labels;
}

int cmd_validate(const SuiteInputs& inputs, std::ostream& out, std::ostream& err) {
  auto suite = prepare_suite(inputs, err);
  if (!suite) return kExitInvalid;
  out << fmt::format("valid: suite {}, {} SUT(s), {} goal(s), {} propert{}, {} oracle(s), {} case(s), {} corpus row(s)\n",
                     suite->suite_id, suite->suts.size(), suite->goals.size(), suite->properties.size(),
                     suite->properties.size() == 1 ? "y" : "ies", suite->oracles.size(), suite->cases.size(),
                     suite->corpus.size());
  return kExitPass;
}

struct RunArgs {
  SuiteInputs suite;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sut;
  std::string out_path;
};

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  auto suite = prepare_suite(args.suite, err);
  if (!suite) return kExitInvalid;
  if (args.sut && suite->find_sut(*args.sut) == nullptr) {
    err << "unknown SUT '" << *args.sut << "'\n";
    return kExitInvalid;
  }
  SutContext ctx(*suite);
  RunOptions options{args.seed, args.sut};
  RunReport report = run_suite(*suite, ctx, options);
  std::string json = serialize_report(report);
  if (args.out_path.empty()) {
    out << json;
  } else {
    write_file_atomic(args.out_path, json);
    out << render_report_text(report);
  }
  return run_exit_code(report);
}

int cmd_adequacy(const std::string& corpus_path, const std::string& labels, const std::string& json_out,
                 std::ostream& out) {
  auto corpus = read_corpus(corpus_path);
  auto report = adequacy(corpus, parse_labels(labels));
  out << render_adequacy_text(report);
  if (!json_out.empty()) write_file_atomic(json_out, to_json(report).dump(2) + "\n");
  return report.adequate ? kExitPass : kExitFailure;
}

struct SemanticPair {
  std::string sem1;
  std::string sem2;
  std::string target_note;
};

// JSONL rows {"base_id", "sem1", "sem2", "target_note"}.
std::map<std::string, SemanticPair> read_semantic_asset(const std::string& path) {
  std::map<std::string, SemanticPair> pairs;
  std::string text = read_file(path);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto row = nlohmann::json::parse(line);
      pairs[row.at("base_id").get<std::string>()] = {row.at("sem1").get<std::string>(),
                                                      row.at("sem2").get<std::string>(),
                                                      row.value("target_note", std::string())};
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::parse, fmt::format("{} line {}: {}", path, line_no, e.what()));
    }
  }
  return pairs;
}

int cmd_variants(const std::string& corpus_path, std::uint64_t seed, const std::string& semantic_path,
                 const std::string& labels, std::ostream& out) {
  auto corpus = read_corpus(corpus_path);
  auto report = adequacy(corpus, parse_labels(labels));
  std::map<std::string, SemanticPair> supplied;
  if (!semantic_path.empty()) supplied = read_semantic_asset(semantic_path);

  std::map<std::string, const InputItem*> bases;
  for (const auto& item : corpus) {
    if (item.variant_type == VariantType::base) bases[item.base_id] = &item;
  }
  std::vector<InputItem> added;
  std::vector<std::string> tasks;
  std::set<std::string> semantic_done;
  for (const auto& row : report.missing) {
    auto base = bases.find(row.base_id);
    if (base == bases.end()) {
      tasks.push_back(fmt::format("author {} row for new {} base ({})", to_string(row.variant_type), row.class_label,
                                  row.base_id));
      continue;
    }
    if (is_syntactic(row.variant_type)) {
      bool collided = false;
      added.push_back(make_variant(*base->second, row.variant_type, seed, &collided));
      if (collided) out << "warning: " << added.back().item_id << " equals its base text\n";
      continue;
    }
    auto pair = supplied.find(row.base_id);
    if (pair == supplied.end()) {
      tasks.push_back(fmt::format("write {} for base {} ({}) near a neighboring class", to_string(row.variant_type),
                                  row.base_id, row.class_label));
      continue;
    }
    bool has_any = std::any_of(corpus.begin(), corpus.end(), [&](const InputItem& item) {
      return item.base_id == row.base_id && is_semantic(item.variant_type);
    });
    if (!has_any) {
      if (semantic_done.insert(row.base_id).second) {
        auto rows = register_semantic(corpus, row.base_id, pair->second.sem1, pair->second.sem2, pair->second.target_note);
        added.insert(added.end(), rows.begin(), rows.end());
      }
      continue;
    }
    // The base already has its other SEM row; add the missing one alone.
    const std::string& text = row.variant_type == VariantType::sem1 ? pair->second.sem1 : pair->second.sem2;
    if (text.empty() || text == base->second->text) {
      tasks.push_back(fmt::format("supplied {} for base {} is empty or equals the base", to_string(row.variant_type), row.base_id));
      continue;
    }
    InputItem item;
    item.item_id = variant_item_id(row.base_id, row.variant_type);
    item.base_id = row.base_id;
    item.class_label = base->second->class_label;
    item.variant_type = row.variant_type;
    item.text = text;
    item.provenance = Provenance::supplied_semantic;
    item.target_note = pair->second.target_note;
    added.push_back(std::move(item));
  }

  if (!added.empty()) {
    corpus.insert(corpus.end(), added.begin(), added.end());
    write_file_atomic(corpus_path, serialize_corpus(corpus));
  }
  out << fmt::format("added {} row(s) to {}\n", added.size(), corpus_path);
  for (const auto& task : tasks) out << "human task: " << task << "\n";
  return kExitPass;
}

int cmd_regress(const std::string& path_a, const std::string& path_b, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  auto a = read_report(path_a);
  auto b = read_report(path_b);
  RegressionReport diff;
  try {
    diff = diff_reports(a, b);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::suite_mismatch) throw;
    err << e.what() << "\n";
    return kExitInvalid;
  }
  if (!out_path.empty()) write_file_atomic(out_path, to_json(diff).dump(2) + "\n");
  out << render_regression_text(diff);
  return diff.count(Delta::regression) == 0 ? kExitPass : kExitFailure;
}

int cmd_sweep(const SuiteInputs& inputs, const std::vector<std::string>& variant_paths,
              std::optional<std::uint64_t> seed, const std::string& out_path, std::ostream& out, std::ostream& err) {
  auto suite = prepare_suite(inputs, err);
  if (!suite) return kExitInvalid;
  std::vector<SutSpec> variants;
  auto docs = read_bindings(variant_paths);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::vector<ValidationError> errors;
    auto sut = parse_sut(docs[i], "/variants/" + std::to_string(i), errors);
    for (const auto& e : errors) err << format_validation_error(e) << "\n";
    if (!sut) return kExitInvalid;
    variants.push_back(std::move(*sut));
  }
  RunOptions options;
  options.seed = seed;
  auto result = sweep(*suite, variants, options);
  if (!out_path.empty()) write_file_atomic(out_path, to_json(result).dump(2) + "\n");
  out << render_sweep_text(result);
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Repeated-run test harness for LLM-based software", "aggrtest"};
  app.require_subcommand(1);

  SuiteInputs validate_inputs;
  auto* validate = app.add_subcommand("validate", "Check a suite file; exit 0 valid, 2 invalid, 3 unreadable");
  validate->add_option("suite", validate_inputs.path, "Suite JSON file")->required();
  validate->add_option("--bind", validate_inputs.bind, "SUT binding file replacing the SUT with the same sut_id");

  RunArgs run_args;
  std::uint64_t run_seed = 0;
  std::string run_sut;
  int run_repeats = 0;
  auto* run = app.add_subcommand("run", "Run every case; exit 0 all pass, 1 failures, 2 invalid, 3 infrastructure");
  run->add_option("suite", run_args.suite.path, "Suite JSON file")->required();
  auto* seed_opt = run->add_option("--seed", run_seed, "Suite seed override");
  auto* repeats_opt = run->add_option("--repeats", run_repeats, "Repeats override for every case")->check(CLI::PositiveNumber);
  auto* sut_opt = run->add_option("--sut", run_sut, "Run only the cases of this SUT");
  run->add_option("--bind", run_args.suite.bind, "SUT binding file replacing the SUT with the same sut_id");
  run->add_option("--out", run_args.out_path, "Report file; the JSON goes to stdout when omitted");

  std::string adequacy_corpus;
  std::string adequacy_labels;
  std::string adequacy_json;
  auto* adequacy_cmd = app.add_subcommand("adequacy", "Adequacy report; exit 0 adequate, 1 not, 3 unreadable");
  adequacy_cmd->add_option("corpus", adequacy_corpus, "Corpus JSONL file")->required();
  adequacy_cmd->add_option("--labels", adequacy_labels, "Comma-separated classes (default BUG,FEATURE,INVALID,DUPLICATE)");
  adequacy_cmd->add_option("--json", adequacy_json, "Also write the report as JSON");

  std::string variants_corpus;
  std::uint64_t variants_seed = 0;
  std::string variants_semantic;
  std::string variants_labels;
  auto* variants = app.add_subcommand("variants", "Generate the missing S1-S3 rows in place; exit 0, 3 on I/O");
  variants->add_option("corpus", variants_corpus, "Corpus JSONL file, rewritten in place")->required();
  variants->add_option("--seed", variants_seed, "Operator seed");
  variants->add_option("--semantic", variants_semantic, "Supplied SEM1/SEM2 asset (JSONL)");
  variants->add_option("--labels", variants_labels, "Comma-separated classes");

  std::string regress_a;
  std::string regress_b;
  std::string regress_out;
  auto* regress = app.add_subcommand("regress", "Diff two run reports; exit 0 no regression, 1 regressions, 2 mismatch");
  regress->add_option("report_a", regress_a, "Baseline report")->required();
  regress->add_option("report_b", regress_b, "Candidate report")->required();
  regress->add_option("--out", regress_out, "Also write the regression report as JSON");

  SuiteInputs sweep_inputs;
  std::vector<std::string> sweep_variants;
  std::uint64_t sweep_seed = 0;
  std::string sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the suite once per SUT variant and print the case x variant matrix");
  sweep_cmd->add_option("suite", sweep_inputs.path, "Suite JSON file")->required();
  sweep_cmd->add_option("--variant", sweep_variants, "SUT variant file (repeat)")->required();
  auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "Suite seed override");
  sweep_cmd->add_option("--out", sweep_out, "Also write the matrix as JSON");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (validate->parsed()) return cmd_validate(validate_inputs, out, err);
    if (run->parsed()) {
      if (*seed_opt) run_args.seed = run_seed;
      if (*repeats_opt) run_args.suite.repeats = run_repeats;
      if (*sut_opt) run_args.sut = run_sut;
      return cmd_run(run_args, out, err);
    }
    if (adequacy_cmd->parsed()) return cmd_adequacy(adequacy_corpus, adequacy_labels, adequacy_json, out);
    if (variants->parsed()) return cmd_variants(variants_corpus, variants_seed, variants_semantic, variants_labels, out);
    if (regress->parsed()) return cmd_regress(regress_a, regress_b, regress_out, out, err);
    if (sweep_cmd->parsed()) {
      std::optional<std::uint64_t> seed;
      if (*sweep_seed_opt) seed = sweep_seed;
      return cmd_sweep(sweep_inputs, sweep_variants, seed, sweep_out, out, err);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::precondition:
      case ErrorKind::schema:
      case ErrorKind::unresolved_reference:
      case ErrorKind::bound_violation:
      case ErrorKind::duplicate_id:
      case ErrorKind::suite_mismatch:
        return kExitInvalid;
      default:
        return kExitInfrastructure;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInfrastructure;
  }
  return kExitInvalid;
}

}  // namespace aggrtest
