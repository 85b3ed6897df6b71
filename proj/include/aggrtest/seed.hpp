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

#include <cstdint>
#include <random>
#include <string_view>

namespace aggrtest {

// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// One splitmix64 finalization step.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// case_seed = mix(suite_seed, fnv1a64(case_id))
std::uint64_t derive_case_seed(std::uint64_t suite_seed, std::string_view case_id) noexcept;

// seed_used for run `run_index` of a case. Any single run can be re-executed
// in isolation from (suite seed, case id, run index) alone.
std::uint64_t derive_run_seed(std::uint64_t case_seed, std::uint64_t run_index) noexcept;

// Seeded generator with a platform-independent uniform draw. The standard
// distributions are implementation-defined, so they are not used here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace aggrtest
