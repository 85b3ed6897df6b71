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

#include "aggrtest/error.hpp"

namespace aggrtest {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::schema: return "schema";
    case ErrorKind::unresolved_reference: return "unresolved-reference";
    case ErrorKind::bound_violation: return "bound-violation";
    case ErrorKind::duplicate_id: return "duplicate-id";
    case ErrorKind::endpoint_unreachable: return "endpoint-unreachable";
    case ErrorKind::non_2xx_status: return "non-2xx-status";
    case ErrorKind::malformed_response: return "malformed-response";
    case ErrorKind::tool_failure: return "tool-failure";
    case ErrorKind::missing_distribution_entry: return "missing-distribution-entry";
    case ErrorKind::missing_tool_trace: return "missing-tool-trace";
    case ErrorKind::invalid_pattern: return "invalid-pattern";
    case ErrorKind::extractor_failure: return "extractor-failure";
    case ErrorKind::empty_after_exclusion: return "empty-after-exclusion";
    case ErrorKind::missing_base: return "missing-base";
    case ErrorKind::unknown_base: return "unknown-base";
    case ErrorKind::duplicate_variant: return "duplicate-variant";
    case ErrorKind::suite_mismatch: return "suite-mismatch";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

std::optional<ErrorKind> parse_error_kind(std::string_view text) noexcept {
  for (int i = 0; i <= static_cast<int>(ErrorKind::parse); ++i) {
    auto kind = static_cast<ErrorKind>(i);
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

}  // namespace aggrtest
