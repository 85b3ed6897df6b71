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

// Suite documents and corpora shared by several test files.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aggrtest/corpus.hpp"
#include "aggrtest/suite.hpp"

namespace aggrtest::testing_support {

// A small valid suite: one scripted prompt-template SUT, one goal, one
// exact-match property/oracle and one case over item "i1".
nlohmann::json tiny_suite();

// Validates `doc` and fails the calling test with every diagnostic when it
// is invalid.
Suite must_validate(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});

// Absolute path of a bundled suite directory.
std::filesystem::path bundled(const std::string& name);

// BASE rows "<CLASS>-<k>" for k = 1..per_class, texts distinct per row.
std::vector<InputItem> base_rows(const std::vector<std::string>& classes, int per_class);

// A fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

}  // namespace aggrtest::testing_support
