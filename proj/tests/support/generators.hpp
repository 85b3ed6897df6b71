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

// Hand-rolled generators for the property tests. Every generator is driven by
// an explicit seed so a failing case can be replayed from the seed printed by
// the test.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace aggrtest::gen {

class Source {
 public:
  explicit Source(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [lo, hi].
  int between(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin(int percent = 50) { return between(1, 100) <= percent; }

  template <typename T>
  const T& pick(const std::vector<T>& options) {
    return options[static_cast<std::size_t>(between(0, static_cast<int>(options.size()) - 1))];
  }

 private:
  std::mt19937_64 engine_;
};

// Printable ASCII mixed with whitespace of every kind, the S2 punctuation
// set, digits and a few multi-byte UTF-8 code points.
inline std::string text(Source& src, int max_len = 40) {
  static const std::vector<std::string> atoms = {
      "a", "b", "C", "d", "E", "f", "g", "H", "x", "Y", "z", "q", "o", "O",
      " ", " ", " ", "  ", "\t", "\n", "\r\n", ".", ",", "!", ";", "?", ":",
      "-", "#", "0", "7", "42", "(", ")", "\"", "'", "\xC3\xA9", "\xE2\x82\xAC", "\xF0\x9F\x90\x9B",
  };
  std::string out;
  int len = src.between(0, max_len);
  for (int i = 0; i < len; ++i) out += src.pick(atoms);
  return out;
}

// Sentences of lowercase words, the shape of real corpus rows.
inline std::string sentence(Source& src, int max_words = 14) {
  static const std::vector<std::string> words = {
      "the", "app", "crashes", "when", "i", "open", "settings", "please", "add", "dark", "mode",
      "export", "fails", "on", "android", "login", "button", "is", "missing", "after", "update",
  };
  std::string out;
  int n = src.between(1, max_words);
  for (int i = 0; i < n; ++i) {
    if (i > 0) out += src.coin(15) ? ", " : " ";
    std::string word = src.pick(words);
    if (i == 0 || src.coin(10)) word[0] = static_cast<char>(word[0] - 'a' + 'A');
    out += word;
    if (src.coin(8)) out += ". ";
  }
  if (src.coin(70)) out += src.coin(50) ? "." : "!";
  return out;
}

// Every verdict vector of length n as bit patterns 0 .. 2^n - 1.
inline std::vector<bool> bits(std::uint32_t pattern, int n) {
  std::vector<bool> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = (pattern >> i) & 1U;
  return out;
}

}  // namespace aggrtest::gen
