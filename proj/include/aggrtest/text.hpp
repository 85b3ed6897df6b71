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

#include <string>
#include <string_view>
#include <vector>

namespace aggrtest {

// ASCII whitespace as seen by every text operation in the harness.
bool is_space(char c) noexcept;

std::string_view trim(std::string_view text) noexcept;

// Collapses every whitespace run to a single space and trims both ends.
// This is the single whitespace-equivalence used by the oracles, the
// syntactic variant operators and the duplication finder.
std::string normalize(std::string_view text);

std::vector<std::string> split_whitespace(std::string_view text);

std::string to_lower_ascii(std::string_view text);

// Lowercased ASCII letters only, everything else dropped.
std::string letter_skeleton(std::string_view text);

// Decodes UTF-8 into code points. Invalid bytes decode to themselves so the
// function is total over arbitrary byte strings.
std::u32string decode_utf8(std::string_view text);

// Replaces every occurrence of `placeholder` with `value`.
std::string replace_all(std::string_view text, std::string_view placeholder, std::string_view value);

}  // namespace aggrtest
