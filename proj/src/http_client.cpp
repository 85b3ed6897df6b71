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

#include "aggrtest/http_client.hpp"

#include <condition_variable>
#include <cstdlib>
#include <mutex>

#include <fmt/format.h>
#include <httplib.h>

#include "aggrtest/error.hpp"

namespace aggrtest {

namespace {

class InflightLimiter {
 public:
  static InflightLimiter& instance() {
    static InflightLimiter limiter(max_inflight_from_env());
    return limiter;
  }

  void set_limit(std::size_t limit) {
    std::lock_guard lock(mutex_);
    limit_ = limit == 0 ? 1 : limit;
    cv_.notify_all();
  }

  std::size_t limit() {
    std::lock_guard lock(mutex_);
    return limit_;
  }

  void acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return in_flight_ < limit_; });
    ++in_flight_;
  }

  void release() {
    std::lock_guard lock(mutex_);
    --in_flight_;
    cv_.notify_one();
  }

 private:
  explicit InflightLimiter(std::size_t limit) : limit_(limit == 0 ? 1 : limit) {}

  std::mutex mutex_;
  std::condition_variable cv_;
  std::size_t limit_;
  std::size_t in_flight_ = 0;
};

class InflightSlot {
 public:
  InflightSlot() { InflightLimiter::instance().acquire(); }
  ~InflightSlot() { InflightLimiter::instance().release(); }
  InflightSlot(const InflightSlot&) = delete;
  InflightSlot& operator=(const InflightSlot&) = delete;
};

std::string excerpt(std::string_view body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? std::string(body) : std::string(body.substr(0, kMax)) + "...";
}

httplib::Headers auth_headers() {
  httplib::Headers headers;
  if (const char* key = std::getenv(kApiKeyEnv); key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  return headers;
}

// One POST with explicit retries on transport failure or 5xx. Returns the
// 2xx response body.
std::string post_json(const std::string& endpoint, const std::string& body, int retries, int timeout_ms) {
  auto url = parse_url(endpoint);
  httplib::Client client(url.scheme_host_port);
  auto seconds = timeout_ms / 1000;
  auto micros = (timeout_ms % 1000) * 1000;
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  auto headers = auth_headers();

  std::optional<Error> last;
  for (int attempt = 0; attempt <= retries; ++attempt) {
    httplib::Result result;
    {
      InflightSlot slot;
      result = client.Post(url.path, headers, body, "application/json");
    }
    if (!result) {
      last = Error(ErrorKind::endpoint_unreachable,
                   fmt::format("{}: {}", endpoint, httplib::to_string(result.error())));
      continue;
    }
    int status = result->status;
    if (status >= 200 && status < 300) return result->body;
    Error error(ErrorKind::non_2xx_status, fmt::format("status {}: {}", status, excerpt(result->body)));
    if (status < 500) throw error;
    last = error;
  }
  throw *last;
}

}  // namespace

ParsedUrl parse_url(std::string_view url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw Error(ErrorKind::precondition, "URL lacks a scheme: " + std::string(url));
  std::string_view scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorKind::precondition, "unsupported URL scheme: " + std::string(scheme));
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  ParsedUrl parsed;
  if (path_start == std::string_view::npos) {
    parsed.scheme_host_port = std::string(url);
    parsed.path = "/";
  } else {
    parsed.scheme_host_port = std::string(url.substr(0, path_start));
    parsed.path = std::string(url.substr(path_start));
  }
  if (parsed.scheme_host_port.size() == scheme_end + 3) throw Error(ErrorKind::precondition, "URL lacks a host");
  return parsed;
}

nlohmann::json build_chat_request(const ModelBinding& binding, const ModelConfig& config, std::string_view prompt) {
  nlohmann::json body = {
      {"model", binding.name},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", config.temperature},
      {"top_p", config.top_p},
      {"n", config.n},
      {"max_tokens", config.max_tokens},
  };
  if (config.top_k) body["top_k"] = *config.top_k;
  if (config.seed) body["seed"] = *config.seed;
  return body;
}

std::string parse_chat_response(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::malformed_response, "response is not JSON: " + excerpt(body));
  }
  if (!doc.is_object() || !doc.contains("choices") || !doc["choices"].is_array()) {
    throw Error(ErrorKind::malformed_response, "response has no choices array");
  }
  const auto& choices = doc["choices"];
  if (choices.empty()) throw Error(ErrorKind::malformed_response, "response has an empty choices list");
  const auto& first = choices[0];
  if (first.is_object() && first.contains("message") && first["message"].is_object() &&
      first["message"].contains("content") && first["message"]["content"].is_string()) {
    return first["message"]["content"].get<std::string>();
  }
  throw Error(ErrorKind::malformed_response, "first choice has no message content");
}

std::string http_generate(const ModelBinding& binding, const ModelConfig& config, const std::string& prompt) {
  if (binding.kind != BindingKind::http_endpoint || !binding.endpoint) {
    throw Error(ErrorKind::precondition, "binding '" + binding.name + "' is not an http endpoint");
  }
  std::string request = build_chat_request(binding, config, prompt).dump();
  std::string response = post_json(*binding.endpoint, request, binding.retries, binding.timeout_ms);
  return parse_chat_response(response);
}

double http_similarity_score(const std::string& endpoint, std::string_view a, std::string_view b) {
  nlohmann::json request = {{"a", a}, {"b", b}};
  std::string response = post_json(endpoint, request.dump(), 0, 30000);
  try {
    auto doc = nlohmann::json::parse(response);
    double score = doc.at("score").get<double>();
    if (!(score >= 0.0 && score <= 1.0)) throw Error(ErrorKind::malformed_response, "score outside [0,1]");
    return score;
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::malformed_response, "scorer response lacks a numeric score: " + excerpt(response));
  }
}

void set_max_inflight(std::size_t limit) { InflightLimiter::instance().set_limit(limit); }

std::size_t max_inflight() { return InflightLimiter::instance().limit(); }

std::size_t max_inflight_from_env() {
  const char* raw = std::getenv(kMaxInflightEnv);
  if (raw == nullptr || *raw == '\0') return kDefaultMaxInflight;
  if (*raw < '0' || *raw > '9') return kDefaultMaxInflight;
  char* end = nullptr;
  unsigned long value = std::strtoul(raw, &end, 10);
  if (end == raw || *end != '\0' || value == 0) return kDefaultMaxInflight;
  return static_cast<std::size_t>(value);
}

}  // namespace aggrtest
