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

#include "aggrtest/variants.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "aggrtest/error.hpp"
#include "aggrtest/seed.hpp"
#include "aggrtest/text.hpp"

namespace aggrtest {

namespace {

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_safe_punct(char c) { return kS2Punctuation.find(c) != std::string_view::npos; }

char toggle_case(char c) {
  if (c >= 'a' && c <= 'z') return static_cast<char>(c - 'a' + 'A');
  if (c >= 'A' && c <= 'Z') return static_cast<char>(c - 'A' + 'a');
  return c;
}

char other_punct(char c, Rng& rng) {
  char replacement = c;
  while (replacement == c) replacement = kS2Punctuation[rng.below(kS2Punctuation.size())];
  return replacement;
}

std::string strip_for_s2(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!is_safe_punct(c)) out.push_back(c);
  }
  return to_lower_ascii(out);
}

std::string join(const std::vector<std::string>& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += sep;
    out += tokens[i];
  }
  return out;
}

Provenance provenance_for(VariantType type) {
  switch (type) {
    case VariantType::s1: return Provenance::generated_s1;
    case VariantType::s2: return Provenance::generated_s2;
    case VariantType::s3: return Provenance::generated_s3;
    default: return Provenance::supplied_semantic;
  }
}

std::string apply_operator(VariantType type, std::string_view text, std::uint64_t seed) {
  switch (type) {
    case VariantType::s1: return apply_s1(text, seed);
    case VariantType::s2: return apply_s2(text, seed);
    case VariantType::s3: return apply_s3(text, seed);
    default: throw Error(ErrorKind::precondition, "no operator for variant type " + std::string(to_string(type)));
  }
}

constexpr int kReseedAttempts = 16;

}  // namespace

std::string apply_s1(std::string_view text, std::uint64_t seed) {
  auto tokens = split_whitespace(text);
  if (tokens.empty()) return std::string(text);
  static constexpr std::array<std::string_view, 4> kSeparators = {"  ", "\n", " \n", "\t"};
  Rng rng(seed);
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += rng.below(2) == 0 ? std::string_view(" ") : kSeparators[rng.below(kSeparators.size())];
    out += tokens[i];
  }
  if (rng.below(2) == 0) out += "\n";
  return out;
}

std::string apply_s2(std::string_view text, std::uint64_t seed) {
  std::string out(text);
  bool has_letters = std::any_of(out.begin(), out.end(), is_ascii_letter);
  bool has_punct = std::any_of(out.begin(), out.end(), is_safe_punct);
  if (!has_letters && !has_punct) return out;
  Rng rng(seed);

  if (has_letters) {
    switch (rng.below(3)) {
      case 0:
        out = to_lower_ascii(out);
        break;
      case 1: {
        auto first = std::find_if(out.begin(), out.end(), is_ascii_letter);
        *first = toggle_case(*first);
        break;
      }
      default: {
        std::vector<std::size_t> word_starts;
        for (std::size_t i = 0; i < out.size(); ++i) {
          if (is_ascii_letter(out[i]) && (i == 0 || is_space(out[i - 1]))) word_starts.push_back(i);
        }
        if (!word_starts.empty()) {
          std::size_t at = word_starts[rng.below(word_starts.size())];
          out[at] = toggle_case(out[at]);
        }
        break;
      }
    }
  }

  std::vector<std::size_t> punct;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (is_safe_punct(out[i])) punct.push_back(i);
  }
  if (!punct.empty() && rng.below(2) == 0) {
    std::size_t at = punct[rng.below(punct.size())];
    out[at] = other_punct(out[at], rng);
    return out;
  }
  std::size_t last = out.find_last_not_of(" \t\n\r\v\f");
  if (last == std::string::npos) return out;
  if (is_safe_punct(out[last])) {
    out[last] = other_punct(out[last], rng);
  } else if (has_letters) {
    static constexpr std::string_view kTerminal = ".!";
    out.insert(last + 1, 1, kTerminal[rng.below(kTerminal.size())]);
  }
  return out;
}

std::string apply_s3(std::string_view text, std::uint64_t seed) {
  auto tokens = split_whitespace(text);
  if (tokens.empty()) return std::string(text);
  Rng rng(seed);
  bool bullet = rng.below(2) == 0;
  bool blank_lines = rng.below(2) == 0;
  bool reflow = rng.below(2) == 0;
  if (!bullet && !blank_lines && !reflow) bullet = true;
  std::size_t width = 20 + rng.below(41);

  std::string body;
  if (reflow) {
    std::size_t line = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i > 0) {
        if (line + 1 + tokens[i].size() > width) {
          body += '\n';
          line = 0;
        } else {
          body += ' ';
          ++line;
        }
      }
      body += tokens[i];
      line += tokens[i].size();
    }
  } else {
    body = join(tokens, " ");
  }
  std::string out = bullet ? std::string(kS3Prefix) + body : body;
  if (blank_lines) out = "\n" + out + "\n\n";
  return out;
}

bool s1_preserves(std::string_view input, std::string_view output) { return normalize(input) == normalize(output); }

bool s2_preserves(std::string_view input, std::string_view output) {
  return letter_skeleton(input) == letter_skeleton(output) && strip_for_s2(input) == strip_for_s2(output);
}

bool s3_preserves(std::string_view input, std::string_view output) {
  std::string in = normalize(input);
  std::string out = normalize(output);
  return out == in || out == std::string(kS3Prefix) + in;
}

InputItem make_variant(const InputItem& base, VariantType type, std::uint64_t seed, bool* collided) {
  if (base.variant_type != VariantType::base) {
    throw Error(ErrorKind::precondition, "'" + base.item_id + "' is not a BASE item");
  }
  std::uint64_t variant_seed =
      splitmix64(seed ^ fnv1a64(base.base_id) ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(type) + 1)));
  std::string text;
  bool same = true;
  for (int attempt = 0; attempt < kReseedAttempts && same; ++attempt) {
    text = apply_operator(type, base.text, splitmix64(variant_seed + static_cast<std::uint64_t>(attempt)));
    same = text == base.text;
  }
  if (collided != nullptr) *collided = same;
  InputItem item;
  item.item_id = variant_item_id(base.base_id, type);
  item.base_id = base.base_id;
  item.class_label = base.class_label;
  item.variant_type = type;
  item.text = std::move(text);
  item.provenance = provenance_for(type);
  return item;
}

std::vector<InputItem> expand_variants(const std::vector<InputItem>& bases, std::uint64_t seed,
                                       std::vector<std::string>* flagged) {
  std::set<std::string> seen;
  std::vector<InputItem> variants;
  variants.reserve(3 * bases.size());
  for (const auto& base : bases) {
    if (!seen.insert(base.base_id).second) {
      throw Error(ErrorKind::precondition, "base_id '" + base.base_id + "' appears twice");
    }
    for (auto type : kSyntacticVariants) {
      bool collided = false;
      variants.push_back(make_variant(base, type, seed, &collided));
      if (collided && flagged != nullptr) flagged->push_back(variants.back().item_id);
    }
  }
  return variants;
}

std::array<InputItem, 2> register_semantic(const std::vector<InputItem>& corpus, std::string_view base_id,
                                           std::string_view sem1, std::string_view sem2,
                                           std::string_view target_note) {
  auto base = std::find_if(corpus.begin(), corpus.end(), [&](const InputItem& item) {
    return item.variant_type == VariantType::base && item.base_id == base_id;
  });
  if (base == corpus.end()) throw Error(ErrorKind::unknown_base, "no BASE item '" + std::string(base_id) + "'");
  if (trim(sem1).empty() || trim(sem2).empty()) {
    throw Error(ErrorKind::precondition, "semantic variants of '" + std::string(base_id) + "' must be non-empty");
  }
  if (sem1 == base->text || sem2 == base->text) {
    throw Error(ErrorKind::duplicate_variant, "a semantic variant of '" + std::string(base_id) + "' repeats the base text");
  }
  if (sem1 == sem2) {
    throw Error(ErrorKind::duplicate_variant, "SEM1 and SEM2 of '" + std::string(base_id) + "' are identical");
  }
  for (const auto& item : corpus) {
    if (item.base_id == base_id && is_semantic(item.variant_type)) {
      throw Error(ErrorKind::duplicate_variant,
                  fmt::format("'{}' already has a {} row", base_id, to_string(item.variant_type)));
    }
  }
  std::array<InputItem, 2> rows;
  std::array<std::string_view, 2> texts = {sem1, sem2};
  for (std::size_t i = 0; i < 2; ++i) {
    VariantType type = kSemanticVariants[i];
    rows[i].item_id = variant_item_id(base_id, type);
    rows[i].base_id = std::string(base_id);
    rows[i].class_label = base->class_label;
    rows[i].variant_type = type;
    rows[i].text = std::string(texts[i]);
    rows[i].provenance = Provenance::supplied_semantic;
    rows[i].target_note = std::string(target_note);
  }
  return rows;
}

AdequacyReport adequacy(const std::vector<InputItem>& corpus, const std::vector<std::string>& classes) {
  AdequacyReport report;
  std::map<std::string, std::set<VariantType>> rows_by_base;
  for (const auto& item : corpus) rows_by_base[item.base_id].insert(item.variant_type);

  for (const auto& label : classes) {
    ClassAdequacy ca;
    ca.class_label = label;
    for (auto type : {VariantType::base, VariantType::s1, VariantType::s2, VariantType::s3, VariantType::sem1,
                      VariantType::sem2}) {
      ca.coverage[std::string(to_string(type))] = 0;
    }
    std::set<std::string> bases;
    for (const auto& item : corpus) {
      if (item.class_label != label) continue;
      ++ca.coverage[std::string(to_string(item.variant_type))];
      if (item.variant_type == VariantType::base) bases.insert(item.base_id);
    }
    ca.base = static_cast<int>(bases.size());
    ca.syntactic_target = 3 * ca.base;
    ca.semantic_target =
        static_cast<int>(std::ceil(kSemanticShare * static_cast<double>(std::max(ca.base, ca.base_target)) - 1e-9));

    std::vector<MissingRow> missing;
    std::vector<std::string> partial;
    std::vector<std::string> bare;
    for (const auto& base_id : bases) {
      const auto& present = rows_by_base[base_id];
      for (auto type : kSyntacticVariants) {
        if (present.count(type) != 0) {
          ++ca.syntactic;
        } else {
          missing.push_back({base_id, type, label});
        }
      }
      int sem = static_cast<int>(present.count(VariantType::sem1) + present.count(VariantType::sem2));
      if (sem == 2) ++ca.semantic_bases;
      if (sem == 1) partial.push_back(base_id);
      if (sem == 0) bare.push_back(base_id);
    }

    int needed = std::max(0, ca.semantic_target - ca.semantic_bases);
    for (const auto& base_id : partial) {
      if (needed == 0) break;
      const auto& present = rows_by_base[base_id];
      for (auto type : kSemanticVariants) {
        if (present.count(type) == 0) missing.push_back({base_id, type, label});
      }
      --needed;
    }
    for (const auto& base_id : bare) {
      if (needed == 0) break;
      for (auto type : kSemanticVariants) missing.push_back({base_id, type, label});
      --needed;
    }

    // Bases the class still lacks, with every row they will need.
    int shortfall = std::max(0, ca.base_target - ca.base);
    for (int k = 1; k <= shortfall; ++k) {
      std::string placeholder = fmt::format("<new {} base {}>", label, k);
      missing.push_back({placeholder, VariantType::base, label});
      for (auto type : kSyntacticVariants) missing.push_back({placeholder, type, label});
      if (needed > 0) {
        for (auto type : kSemanticVariants) missing.push_back({placeholder, type, label});
        --needed;
      }
    }

    ca.adequate = missing.empty();
    report.missing.insert(report.missing.end(), missing.begin(), missing.end());
    report.classes.push_back(std::move(ca));
  }
  report.adequate = report.missing.empty();
  return report;
}

nlohmann::json to_json(const AdequacyReport& report) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& ca : report.classes) {
    classes.push_back({{"class", ca.class_label},
                       {"base", ca.base},
                       {"base_target", ca.base_target},
                       {"syntactic", ca.syntactic},
                       {"syntactic_target", ca.syntactic_target},
                       {"semantic_bases", ca.semantic_bases},
                       {"semantic_target", ca.semantic_target},
                       {"coverage", ca.coverage},
                       {"adequate", ca.adequate}});
  }
  nlohmann::json missing = nlohmann::json::array();
  for (const auto& row : report.missing) {
    missing.push_back({{"base_id", row.base_id}, {"variant_type", to_string(row.variant_type)}, {"class", row.class_label}});
  }
  return {{"adequate", report.adequate}, {"classes", classes}, {"missing", missing}};
}

std::string render_adequacy_text(const AdequacyReport& report) {
  std::string out = fmt::format("{:<10} {:>9} {:>9} {:>9}  {:<8}  {}\n", "CLASS", "BASE", "S-ROWS", "SEM-BASES",
                                "ADEQUATE", "COVERAGE");
  for (const auto& ca : report.classes) {
    std::string coverage;
    for (auto type : {VariantType::base, VariantType::s1, VariantType::s2, VariantType::s3, VariantType::sem1,
                      VariantType::sem2}) {
      std::string key(to_string(type));
      coverage += fmt::format("{}{}={}", coverage.empty() ? "" : " ", key, ca.coverage.at(key));
    }
    out += fmt::format("{:<10} {:>9} {:>9} {:>9}  {:<8}  {}\n", ca.class_label,
                       fmt::format("{}/{}", ca.base, ca.base_target),
                       fmt::format("{}/{}", ca.syntactic, ca.syntactic_target),
                       fmt::format("{}/{}", ca.semantic_bases, ca.semantic_target), ca.adequate ? "yes" : "no",
                       coverage);
  }
  if (report.missing.empty()) {
    out += "adequate: all targets met\n";
  } else {
    out += fmt::format("missing ({} rows):\n", report.missing.size());
    for (const auto& row : report.missing) {
      out += fmt::format("  {}\t{}\t{}\n", row.base_id, to_string(row.variant_type), row.class_label);
    }
  }
  return out;
}

}  // namespace aggrtest
