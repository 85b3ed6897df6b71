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

// Input variability: seeded syntactic operators, supplied semantic variants,
// and the adequacy stop rule.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aggrtest/corpus.hpp"

namespace aggrtest {

// S1: whitespace runs and line breaks only; normalize(out) == normalize(in).
std::string apply_s1(std::string_view text, std::uint64_t seed);
// S2: letter case and punctuation from {. , ! ;} only; the letter skeleton
// is preserved. Text without letters or such punctuation is returned as is.
std::string apply_s2(std::string_view text, std::uint64_t seed);
// S3: bullet prefix "- ", reflow at a seeded width, surrounding blank lines.
std::string apply_s3(std::string_view text, std::uint64_t seed);

inline constexpr std::string_view kS2Punctuation = ".,!;";
inline constexpr std::string_view kS3Prefix = "- ";

// The postconditions of the three operators, as checks.
bool s1_preserves(std::string_view input, std::string_view output);
bool s2_preserves(std::string_view input, std::string_view output);
bool s3_preserves(std::string_view input, std::string_view output);

// Depends only on (seed, base_id, type), so generating a single missing row
// reproduces the row a full expansion would have produced. Re-seeds while
// the variant equals the base text; `collided` reports giving up.
InputItem make_variant(const InputItem& base, VariantType type, std::uint64_t seed, bool* collided = nullptr);

// One S1, S2 and S3 row per BASE item, in input order. Item ids of
// variants that still equal their base text are appended to `flagged`.
std::vector<InputItem> expand_variants(const std::vector<InputItem>& bases, std::uint64_t seed,
                                       std::vector<std::string>* flagged = nullptr);

// SEM1/SEM2 rows for an existing BASE item. Throws Error(unknown_base),
// Error(duplicate_variant) when a text repeats the base, the pair repeats
// itself or the rows already exist, and Error(precondition) on empty text.
std::array<InputItem, 2> register_semantic(const std::vector<InputItem>& corpus, std::string_view base_id,
                                           std::string_view sem1, std::string_view sem2,
                                           std::string_view target_note);

inline constexpr int kBaseTarget = 50;
inline constexpr double kSemanticShare = 0.2;

struct ClassAdequacy {
  std::string class_label;
  int base = 0;
  int base_target = kBaseTarget;
  int syntactic = 0;
  int syntactic_target = 0;
  // Bases carrying both SEM1 and SEM2.
  int semantic_bases = 0;
  int semantic_target = 0;
  // Rows per variant type (BASE, S1..SEM2).
  std::map<std::string, int> coverage;
  bool adequate = false;

  bool operator==(const ClassAdequacy&) const = default;
};

struct MissingRow {
  // Placeholder "<new CLASS base k>" when a class lacks BASE items.
  std::string base_id;
  VariantType variant_type = VariantType::base;
  std::string class_label;

  bool operator==(const MissingRow&) const = default;
};

struct AdequacyReport {
  std::vector<ClassAdequacy> classes;
  std::vector<MissingRow> missing;
  bool adequate = false;

  bool operator==(const AdequacyReport&) const = default;
};

// Targets per class: kBaseTarget BASE items; S1, S2 and S3 for every BASE;
// both SEM rows on ceil(kSemanticShare * max(BASE count, kBaseTarget))
// bases. Semantic gaps are filled from bases that already carry one SEM row,
// then from bases without any, in base_id order.
AdequacyReport adequacy(const std::vector<InputItem>& corpus, const std::vector<std::string>& classes);

nlohmann::json to_json(const AdequacyReport& report);
std::string render_adequacy_text(const AdequacyReport& report);

}  // namespace aggrtest
