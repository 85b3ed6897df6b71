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

#include "aggrtest/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "aggrtest/error.hpp"

namespace aggrtest {

std::string_view to_string(VariantType type) noexcept {
  switch (type) {
    case VariantType::base: return "BASE";
    case VariantType::s1: return "S1";
    case VariantType::s2: return "S2";
    case VariantType::s3: return "S3";
    case VariantType::sem1: return "SEM1";
    case VariantType::sem2: return "SEM2";
  }
  return "BASE";
}

std::optional<VariantType> parse_variant_type(std::string_view text) noexcept {
  for (auto type : {VariantType::base, VariantType::s1, VariantType::s2, VariantType::s3, VariantType::sem1,
                    VariantType::sem2}) {
    if (to_string(type) == text) return type;
  }
  return std::nullopt;
}

bool is_syntactic(VariantType type) noexcept {
  return type == VariantType::s1 || type == VariantType::s2 || type == VariantType::s3;
}

bool is_semantic(VariantType type) noexcept { return type == VariantType::sem1 || type == VariantType::sem2; }

std::string_view to_string(Provenance provenance) noexcept {
  switch (provenance) {
    case Provenance::authored: return "authored";
    case Provenance::generated_s1: return "generated-s1";
    case Provenance::generated_s2: return "generated-s2";
    case Provenance::generated_s3: return "generated-s3";
    case Provenance::supplied_semantic: return "supplied-semantic";
  }
  return "authored";
}

std::optional<Provenance> parse_provenance(std::string_view text) noexcept {
  for (auto p : {Provenance::authored, Provenance::generated_s1, Provenance::generated_s2, Provenance::generated_s3,
                 Provenance::supplied_semantic}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::string variant_item_id(std::string_view base_id, VariantType type) {
  if (type == VariantType::base) return std::string(base_id);
  return fmt::format("{}:{}", base_id, to_string(type));
}

nlohmann::json to_json(const InputItem& item) {
  nlohmann::json row = {
      {"item_id", item.item_id},
      {"base_id", item.base_id},
      {"class", item.class_label},
      {"variant_type", to_string(item.variant_type)},
      {"text", item.text},
      {"provenance", to_string(item.provenance)},
  };
  if (item.target_note) row["target_note"] = *item.target_note;
  return row;
}

namespace {

std::string required_string(const nlohmann::json& row, const char* field) {
  auto it = row.find(field);
  if (it == row.end() || !it->is_string()) {
    throw Error(ErrorKind::parse, fmt::format("field '{}' missing or not a string", field));
  }
  return it->get<std::string>();
}

}  // namespace

InputItem input_item_from_json(const nlohmann::json& row) {
  if (!row.is_object()) throw Error(ErrorKind::parse, "corpus row is not an object");
  InputItem item;
  item.item_id = required_string(row, "item_id");
  item.base_id = required_string(row, "base_id");
  item.class_label = required_string(row, "class");
  auto type = parse_variant_type(required_string(row, "variant_type"));
  if (!type) throw Error(ErrorKind::parse, "unknown variant_type '" + row["variant_type"].get<std::string>() + "'");
  item.variant_type = *type;
  item.text = required_string(row, "text");
  auto provenance = parse_provenance(required_string(row, "provenance"));
  if (!provenance) throw Error(ErrorKind::parse, "unknown provenance '" + row["provenance"].get<std::string>() + "'");
  item.provenance = *provenance;
  if (row.contains("target_note")) {
    if (!row["target_note"].is_string()) throw Error(ErrorKind::parse, "field 'target_note' is not a string");
    item.target_note = row["target_note"].get<std::string>();
  }
  return item;
}

void sort_corpus(std::vector<InputItem>& corpus) {
  std::stable_sort(corpus.begin(), corpus.end(), [](const InputItem& a, const InputItem& b) {
    if (a.base_id != b.base_id) return a.base_id < b.base_id;
    return a.variant_type < b.variant_type;
  });
}

std::vector<std::string> check_corpus(const std::vector<InputItem>& corpus) {
  std::vector<std::string> problems;
  std::set<std::string> item_ids;
  std::set<std::pair<std::string, VariantType>> slots;
  std::map<std::string, std::string> base_class;
  for (const auto& item : corpus) {
    if (item.variant_type == VariantType::base) base_class[item.base_id] = item.class_label;
  }
  for (const auto& item : corpus) {
    if (!item_ids.insert(item.item_id).second) problems.push_back("duplicate item_id '" + item.item_id + "'");
    if (!slots.insert({item.base_id, item.variant_type}).second) {
      problems.push_back(
          fmt::format("duplicate ({}, {}) row", item.base_id, to_string(item.variant_type)));
    }
    if (item.variant_type == VariantType::base) {
      if (item.item_id != item.base_id) {
        problems.push_back("BASE row '" + item.item_id + "' has base_id '" + item.base_id + "'");
      }
      continue;
    }
    auto base = base_class.find(item.base_id);
    if (base == base_class.end()) {
      problems.push_back("variant '" + item.item_id + "' references missing BASE '" + item.base_id + "'");
    } else if (base->second != item.class_label) {
      problems.push_back("variant '" + item.item_id + "' class differs from its BASE");
    }
  }
  return problems;
}

std::vector<InputItem> parse_corpus(std::string_view jsonl) {
  std::vector<InputItem> corpus;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      corpus.push_back(input_item_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::parse, fmt::format("line {}: {}", line_no, e.what()));
    } catch (const Error& e) {
      throw Error(ErrorKind::parse, fmt::format("line {}: {}", line_no, e.message()));
    }
  }
  return corpus;
}

std::vector<InputItem> read_corpus(const std::filesystem::path& path) { return parse_corpus(read_file(path)); }

std::string serialize_corpus(std::vector<InputItem> corpus) {
  sort_corpus(corpus);
  std::string out;
  for (const auto& item : corpus) {
    out += to_json(item).dump();
    out += '\n';
  }
  return out;
}

std::string corpus_digest(const std::vector<InputItem>& corpus) { return sha256_hex(serialize_corpus(corpus)); }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorKind::io, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot rename into '" + path.string() + "': " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace aggrtest
