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

// Run report file format: one JSON document, schema_version 1. Every run
// record carries its seed, so any single run can be replayed in isolation.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "aggrtest/runner.hpp"

namespace aggrtest {

nlohmann::json to_json(const Verdict& verdict);
Verdict verdict_from_json(const nlohmann::json& node);
nlohmann::json to_json(const AggregationSpec& spec);
AggregationSpec aggregation_from_json(const nlohmann::json& node);

nlohmann::json to_json(const RunReport& report);
// Throws Error(parse) on anything but a schema_version 1 report.
RunReport run_report_from_json(const nlohmann::json& node);

// Pretty-printed JSON with a trailing newline; stable for fixed input.
std::string serialize_report(const RunReport& report);
// Throws Error(io) or Error(parse).
RunReport read_report(const std::filesystem::path& path);

// Plain-text table: one row per case, then metrics and consistency results.
std::string render_report_text(const RunReport& report);

}  // namespace aggrtest
