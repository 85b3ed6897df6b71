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

// SUT execution: one SutSpec + one InputItem -> one RunRecord. Adapters are
// stateless given their inputs; each (case, run) derives its own rng state.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aggrtest/error.hpp"
#include "aggrtest/model.hpp"
#include "aggrtest/seed.hpp"

namespace aggrtest {

struct Suite;

struct ToolCall {
  std::string tool;
  std::string input;
  std::string output;

  bool operator==(const ToolCall&) const = default;
};

struct RunError {
  ErrorKind kind = ErrorKind::endpoint_unreachable;
  std::string message;

  bool operator==(const RunError&) const = default;
};

struct RunRecord {
  std::string case_id;
  int run_index = 0;
  std::string input_item_id;
  std::string input_text;
  std::string prompt_sent;
  std::string raw_output;
  std::vector<ToolCall> tool_trace;
  std::uint64_t seed_used = 0;
  // Wall time of the model interaction; simulated bindings take none and
  // always report 0 so their records stay byte-reproducible.
  std::int64_t latency_ms = 0;
  std::string model_name;
  int model_calls = 0;
  // Scripted lookup fell through to the table's fallback output.
  bool scripted_miss = false;
  // Set when the SUT failed before producing an assessable output.
  std::optional<RunError> error;

  bool operator==(const RunRecord&) const = default;
};

// Chat-completion transport, replaceable in tests. Throws Error with kind
// endpoint_unreachable, non_2xx_status or malformed_response.
using HttpGenerator = std::function<std::string(const ModelBinding&, const ModelConfig&, const std::string& prompt)>;

// Everything an adapter may consult: the suite's assets and the transport.
struct SutContext {
  const Suite* suite = nullptr;
  HttpGenerator http;

  // Uses http_generate as transport.
  explicit SutContext(const Suite& s);
  SutContext(const Suite& s, HttpGenerator transport) : suite(&s), http(std::move(transport)) {}
};

struct ScriptedResult {
  std::string text;
  bool miss = false;
};

// Exact-match lookup on the rendered prompt; unknown prompts return the
// table's fallback with miss set.
ScriptedResult scripted_generate(const ScriptedTable& table, std::string_view prompt);
// As above, then by input item id before falling back.
ScriptedResult scripted_generate(const ScriptedTable& table, std::string_view prompt, std::string_view item_id);

// Inverse-CDF draw over the item's entry (or the wildcard entry). Throws
// Error(missing_distribution_entry).
std::string stochastic_generate(const ResponseDistribution& dist, std::string_view item_id, Rng& rng);

inline constexpr double kDuplicateCutoff = 0.9;
inline constexpr std::string_view kDuplicationFinderVersion = "0.3";

// Best match with similarity >= cutoff (inclusive), first in index order on
// ties; nullopt when nothing reaches the cutoff.
std::optional<std::string> duplication_finder(std::string_view issue_text, std::span<const IndexedIssue> index,
                                              double cutoff = kDuplicateCutoff);

std::string render_prompt(std::string_view prompt_template, std::string_view input_text);

struct Generation {
  std::string text;
  bool scripted_miss = false;
  std::int64_t latency_ms = 0;
};

// One model interaction through `sut`'s binding. Throws Error on failure.
Generation generate(const SutContext& ctx, const SutSpec& sut, const std::string& prompt, std::string_view item_id,
                    std::uint64_t seed);

// Composite SUT: the duplication finder first, the model only on a miss.
RunRecord classify_issue_report(const SutContext& ctx, const SutSpec& sut, const InputItem& issue,
                                std::uint64_t seed);

// Dispatches on sut.component and fills every record field; seed_used =
// derive_run_seed(case_seed, run_index). SUT-side failures are returned in
// RunRecord::error, never thrown.
RunRecord invoke(const SutContext& ctx, const SutSpec& sut, const InputItem& input, std::uint64_t case_seed,
                 int run_index, std::string_view case_id = {});

}  // namespace aggrtest
