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

#include <cstddef>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "aggrtest/model.hpp"

namespace aggrtest {

inline constexpr const char* kApiKeyEnv = "AGGRTEST_API_KEY";
inline constexpr const char* kMaxInflightEnv = "AGGRTEST_MAX_INFLIGHT";
inline constexpr std::size_t kDefaultMaxInflight = 4;

// Body of a chat-completions POST: model, a single user message,
// temperature, top_p, n, max_tokens, and top_k / seed when configured.
nlohmann::json build_chat_request(const ModelBinding& binding, const ModelConfig& config, std::string_view prompt);

// First choice's message content, verbatim. Throws Error(malformed_response).
std::string parse_chat_response(std::string_view body);

// Sends one request (plus binding.retries explicit retries on transport
// failure or 5xx). Reads the bearer credential from AGGRTEST_API_KEY when set.
std::string http_generate(const ModelBinding& binding, const ModelConfig& config, const std::string& prompt);

// External similarity scorer: POST {"a","b"} -> {"score"}.
double http_similarity_score(const std::string& endpoint, std::string_view a, std::string_view b);

// Bound on concurrent requests across the process. Initialized from
// AGGRTEST_MAX_INFLIGHT (default 4).
void set_max_inflight(std::size_t limit);
std::size_t max_inflight();
std::size_t max_inflight_from_env();

struct ParsedUrl {
  std::string scheme_host_port;  // "http://host:port"
  std::string path;              // "/v1/chat/completions"
};

// Throws Error(precondition) for anything but http:// and https:// URLs.
ParsedUrl parse_url(std::string_view url);

}  // namespace aggrtest
