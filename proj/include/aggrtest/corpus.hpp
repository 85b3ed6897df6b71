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

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace aggrtest {

// Declaration order is the stable row order within one base.
enum class VariantType { base, s1, s2, s3, sem1, sem2 };

inline constexpr std::array<VariantType, 3> kSyntacticVariants = {VariantType::s1, VariantType::s2, VariantType::s3};
inline constexpr std::array<VariantType, 2> kSemanticVariants = {VariantType::sem1, VariantType::sem2};

std::string_view to_string(VariantType type) noexcept;
std::optional<VariantType> parse_variant_type(std::string_view text) noexcept;
bool is_syntactic(VariantType type) noexcept;
bool is_semantic(VariantType type) noexcept;

enum class Provenance { authored, generated_s1, generated_s2, generated_s3, supplied_semantic };

std::string_view to_string(Provenance provenance) noexcept;
std::optional<Provenance> parse_provenance(std::string_view text) noexcept;

struct InputItem {
  std::string item_id;
  std::string base_id;
  std::string class_label;
  VariantType variant_type = VariantType::base;
  std::string text;
  Provenance provenance = Provenance::authored;
  std::optional<std::string> target_note;

  bool operator==(const InputItem&) const = default;
};

// "<base_id>:<TYPE>" for variants, base_id for BASE rows.
std::string variant_item_id(std::string_view base_id, VariantType type);

nlohmann::json to_json(const InputItem& item);

// Throws Error(parse) naming the missing or invalid field.
InputItem input_item_from_json(const nlohmann::json& row);

// Sorts rows by (base_id, variant_type).
void sort_corpus(std::vector<InputItem>& corpus);

// Structural checks on a whole corpus: unique item ids, unique
// (base_id, variant_type), BASE rows with item_id = base_id, and every variant
// attached to an existing BASE row. Returns one message per violation.
std::vector<std::string> check_corpus(const std::vector<InputItem>& corpus);

// JSON Lines, one row per line. Throws Error(parse) with the 1-based line
// number on malformed rows and Error(io) when the file cannot be read.
std::vector<InputItem> parse_corpus(std::string_view jsonl);
std::vector<InputItem> read_corpus(const std::filesystem::path& path);

// Serializes in stable (base_id, variant_type) order.
std::string serialize_corpus(std::vector<InputItem> corpus);

// Hex SHA-256 over the serialized corpus.
std::string corpus_digest(const std::vector<InputItem>& corpus);

// Hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Throws Error(io).
std::string read_file(const std::filesystem::path& path);

}  // namespace aggrtest
