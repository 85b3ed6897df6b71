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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aggrtest {

enum class ErrorKind {
  // suite validation
  schema,
  unresolved_reference,
  bound_violation,
  duplicate_id,
  // SUT execution
  endpoint_unreachable,
  non_2xx_status,
  malformed_response,
  tool_failure,
  missing_distribution_entry,
  // oracles
  missing_tool_trace,
  invalid_pattern,
  extractor_failure,
  empty_after_exclusion,
  missing_base,
  // corpus management
  unknown_base,
  duplicate_variant,
  // reports
  suite_mismatch,
  precondition,
  io,
  parse,
};

std::string_view to_string(ErrorKind kind) noexcept;
std::optional<ErrorKind> parse_error_kind(std::string_view text) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  // The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace aggrtest
