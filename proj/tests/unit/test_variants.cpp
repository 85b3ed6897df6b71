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

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <gtest/gtest.h>

#include "aggrtest/error.hpp"
#include "aggrtest/suite.hpp"
#include "aggrtest/text.hpp"
#include "aggrtest/variants.hpp"
#include "../support/fixtures.hpp"
#include "../support/generators.hpp"

namespace aggrtest {
namespace {

using testing_support::base_rows;

// Letters lowercased with everything else dropped, computed without the
// library helper.
std::string skeleton(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c >= 'A' && c <= 'Z') out.push_back(static_cast<char>(c - 'A' + 'a'));
    if (c >= 'a' && c <= 'z') out.push_back(c);
  }
  return out;
}

TEST(S1, Examples) {
  std::string out = apply_s1("fix login bug", 1);
  EXPECT_EQ(normalize(out), "fix login bug");
  EXPECT_EQ(apply_s1("", 1), "");
  for (std::uint64_t seed = 0; seed < 20; ++seed) EXPECT_EQ(normalize(apply_s1("fix login bug", seed)), "fix login bug");
  EXPECT_EQ(apply_s1("fix login bug", 3), apply_s1("fix login bug", 3));
}

TEST(S2, Examples) {
  auto out = apply_s2("App crashes on start.", 4);
  EXPECT_EQ(skeleton(out), "appcrashesonstart");
  EXPECT_NE(out, "App crashes on start.");
  EXPECT_EQ(skeleton(apply_s2("BUG", 1)), "bug");
  EXPECT_EQ(apply_s2("123", 1), "123");
  EXPECT_EQ(apply_s2("", 1), "");
}

TEST(S2, OnlyCaseAndSafePunctuationChange) {
  gen::Source src(51);
  for (int i = 0; i < 2000; ++i) {
    auto in = gen::sentence(src);
    auto out = apply_s2(in, src.next());
    ASSERT_EQ(skeleton(in), skeleton(out));
    // Dropping letters and the safe punctuation set leaves the same residue.
    auto residue = [](std::string_view s) {
      std::string r;
      for (char c : s) {
        bool letter = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        if (!letter && kS2Punctuation.find(c) == std::string_view::npos) r.push_back(c);
      }
      return r;
    };
    ASSERT_EQ(residue(in), residue(out)) << "'" << in << "' -> '" << out << "'";
  }
}

TEST(S3, Examples) {
  bool saw_prefix = false;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto out = apply_s3("steps: open app", seed);
    EXPECT_TRUE(s3_preserves("steps: open app", out)) << "'" << out << "'";
    if (normalize(out) == "- steps: open app") saw_prefix = true;
  }
  EXPECT_TRUE(saw_prefix);
  EXPECT_EQ(apply_s3("", 1), "");
  std::string multi = "The app crashes when I open settings. It happens every time after the update. Please fix it.";
  auto reflowed = apply_s3(multi, 9);
  auto tokens = split_whitespace(reflowed);
  if (!tokens.empty() && tokens[0] == "-") tokens.erase(tokens.begin());
  EXPECT_EQ(tokens, split_whitespace(multi));
}

TEST(SyntacticOperators, PostconditionsOverRandomInputs) {
  gen::Source src(52);
  int violations = 0;
  for (int i = 0; i < 3000; ++i) {
    auto in = src.coin(50) ? gen::text(src) : gen::sentence(src);
    std::uint64_t seed = src.next();
    auto s1 = apply_s1(in, seed);
    auto s2 = apply_s2(in, seed);
    auto s3 = apply_s3(in, seed);
    violations += normalize(s1) != normalize(in);
    violations += skeleton(s2) != skeleton(in);
    violations += !(normalize(s3) == normalize(in) || normalize(s3) == normalize(std::string(kS3Prefix) + in));
    violations += !s1_preserves(in, s1) || !s2_preserves(in, s2) || !s3_preserves(in, s3);
    if (violations > 0) FAIL() << "input '" << in << "' seed " << seed;
  }
}

TEST(Checks, RejectMeaningChanges) {
  EXPECT_FALSE(s1_preserves("fix login bug", "fix logout bug"));
  EXPECT_FALSE(s2_preserves("App crashes", "App crashed"));
  EXPECT_FALSE(s2_preserves("a b", "a? b"));
  EXPECT_FALSE(s3_preserves("open app", "* open app"));
}

TEST(ExpandVariants, SizesAndDeterminism) {
  auto bases = base_rows({"BUG"}, 50);
  auto variants = expand_variants(bases, 7);
  EXPECT_EQ(variants.size(), 150U);
  EXPECT_EQ(bases.size() + variants.size(), 200U);
  EXPECT_EQ(expand_variants(bases, 7), variants);
  EXPECT_TRUE(expand_variants({}, 7).empty());
  std::set<std::pair<std::string, VariantType>> keys;
  for (const auto& v : variants) {
    keys.insert({v.base_id, v.variant_type});
    EXPECT_EQ(v.item_id, variant_item_id(v.base_id, v.variant_type));
    EXPECT_EQ(v.class_label, "BUG");
  }
  EXPECT_EQ(keys.size(), 150U);
  auto all = bases;
  all.insert(all.end(), variants.begin(), variants.end());
  EXPECT_TRUE(check_corpus(all).empty());
}

TEST(ExpandVariants, VariantsDifferFromBaseOrAreFlagged) {
  std::vector<InputItem> bases = {{"x", "x", "BUG", VariantType::base, "", Provenance::authored, std::nullopt},
                                  {"y", "y", "BUG", VariantType::base, "Crash on start.", Provenance::authored, std::nullopt}};
  std::vector<std::string> flagged;
  auto variants = expand_variants(bases, 3, &flagged);
  ASSERT_EQ(variants.size(), 6U);
  for (const auto& v : variants) {
    const auto& base = v.base_id == "x" ? bases[0] : bases[1];
    bool is_flagged = std::find(flagged.begin(), flagged.end(), v.item_id) != flagged.end();
    EXPECT_TRUE(v.text != base.text || is_flagged) << v.item_id;
  }
  EXPECT_EQ(std::count_if(flagged.begin(), flagged.end(), [](const std::string& id) { return id.rfind("x:", 0) == 0; }), 3);
}

TEST(ExpandVariants, SingleRowMatchesFullExpansion) {
  auto bases = base_rows({"FEATURE"}, 5);
  auto all = expand_variants(bases, 11);
  for (const auto& v : all) {
    auto base = std::find_if(bases.begin(), bases.end(), [&](const InputItem& b) { return b.base_id == v.base_id; });
    EXPECT_EQ(make_variant(*base, v.variant_type, 11), v);
  }
}

TEST(ExpandVariants, RejectsNonBaseOrDuplicateInput) {
  auto bases = base_rows({"BUG"}, 2);
  auto twice = bases;
  twice.push_back(bases[0]);
  EXPECT_THROW(expand_variants(twice, 1), Error);
}

TEST(RegisterSemantic, ValidPairAndErrors) {
  auto corpus = base_rows({"BUG"}, 3);
  auto rows = register_semantic(corpus, "BUG-003", "Could it stay open?", "It would be nice if it stayed open.", "BUG<->FEATURE");
  EXPECT_EQ(rows[0].item_id, "BUG-003:SEM1");
  EXPECT_EQ(rows[1].item_id, "BUG-003:SEM2");
  EXPECT_EQ(rows[0].variant_type, VariantType::sem1);
  EXPECT_EQ(rows[1].provenance, Provenance::supplied_semantic);
  EXPECT_EQ(rows[0].target_note, "BUG<->FEATURE");
  EXPECT_EQ(rows[0].class_label, "BUG");

  auto expect_kind = [&](ErrorKind kind, auto&& call) {
    try {
      call();
      ADD_FAILURE() << "expected " << to_string(kind);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind) << e.what();
    }
  };
  expect_kind(ErrorKind::duplicate_variant,
              [&] { register_semantic(corpus, "BUG-003", corpus[2].text, "other", "n"); });
  expect_kind(ErrorKind::unknown_base, [&] { register_semantic(corpus, "BUG-999", "a", "b", "n"); });
  expect_kind(ErrorKind::precondition, [&] { register_semantic(corpus, "BUG-003", "", "b", "n"); });
  auto with_rows = corpus;
  with_rows.insert(with_rows.end(), rows.begin(), rows.end());
  expect_kind(ErrorKind::duplicate_variant, [&] { register_semantic(with_rows, "BUG-003", "p", "q", "n"); });
}

// A fully adequate corpus: per_class bases per class, all S rows, and SEM
// rows on the first `sem_bases` bases of each class.
std::vector<InputItem> adequate_corpus(const std::vector<std::string>& classes, int per_class, int sem_bases) {
  auto corpus = base_rows(classes, per_class);
  auto variants = expand_variants(corpus, 7);
  std::vector<InputItem> sem;
  for (const auto& label : classes) {
    for (int k = 1; k <= sem_bases; ++k) {
      auto id = fmt::format("{}-{:03d}", label, k);
      auto pair = register_semantic(corpus, id, "near miss one " + id, "near miss two " + id, "note");
      sem.insert(sem.end(), pair.begin(), pair.end());
    }
  }
  corpus.insert(corpus.end(), variants.begin(), variants.end());
  corpus.insert(corpus.end(), sem.begin(), sem.end());
  sort_corpus(corpus);
  return corpus;
}

TEST(Adequacy, FullCorpusIsAdequate) {
  auto corpus = adequate_corpus(label_set(), 50, 10);
  auto report = adequacy(corpus, label_set());
  EXPECT_TRUE(report.adequate);
  EXPECT_TRUE(report.missing.empty());
  ASSERT_EQ(report.classes.size(), 4U);
  for (const auto& c : report.classes) {
    EXPECT_EQ(c.base, 50);
    EXPECT_EQ(c.syntactic, 150);
    EXPECT_EQ(c.syntactic_target, 150);
    EXPECT_EQ(c.semantic_bases, 10);
    EXPECT_EQ(c.semantic_target, 10);
    EXPECT_TRUE(c.adequate);
    EXPECT_EQ(c.coverage.at("S2"), 50);
  }
}

TEST(Adequacy, OneMissingVariantIsTheWholeMissingList) {
  auto corpus = adequate_corpus(label_set(), 50, 10);
  corpus.erase(std::find_if(corpus.begin(), corpus.end(), [](const InputItem& i) { return i.item_id == "BUG-017:S2"; }));
  auto report = adequacy(corpus, label_set());
  EXPECT_FALSE(report.adequate);
  ASSERT_EQ(report.missing.size(), 1U);
  EXPECT_EQ(report.missing[0], (MissingRow{"BUG-017", VariantType::s2, "BUG"}));
}

TEST(Adequacy, TooFewBases) {
  auto corpus = adequate_corpus({"BUG"}, 49, 10);
  auto report = adequacy(corpus, {"BUG"});
  EXPECT_FALSE(report.adequate);
  EXPECT_EQ(report.classes[0].base, 49);
  EXPECT_FALSE(report.missing.empty());
  EXPECT_EQ(report.missing[0].variant_type, VariantType::base);
  EXPECT_NE(report.missing[0].base_id.find("new BUG base"), std::string::npos) << report.missing[0].base_id;
}

TEST(Adequacy, SemanticTargetIsTwentyPercent) {
  auto corpus = adequate_corpus({"INVALID"}, 50, 9);
  auto report = adequacy(corpus, {"INVALID"});
  EXPECT_FALSE(report.adequate);
  EXPECT_EQ(report.classes[0].semantic_target, 10);
  ASSERT_EQ(report.missing.size(), 2U);
  EXPECT_EQ(report.missing[0].variant_type, VariantType::sem1);
  EXPECT_EQ(report.missing[1].variant_type, VariantType::sem2);
  EXPECT_EQ(report.missing[0].base_id, report.missing[1].base_id);
}

TEST(Adequacy, MonotoneAndCertificate) {
  auto full = adequate_corpus({"BUG", "FEATURE"}, 50, 10);
  gen::Source src(53);
  for (int round = 0; round < 30; ++round) {
    // Drop a random subset of non-BASE rows.
    std::vector<InputItem> subset;
    for (const auto& row : full) {
      if (row.variant_type == VariantType::base || src.coin(85)) subset.push_back(row);
    }
    auto report = adequacy(subset, {"BUG", "FEATURE"});
    // Adding any one missing row never grows the missing list.
    for (int probe = 0; probe < 5 && !report.missing.empty(); ++probe) {
      const auto& m = src.pick(report.missing);
      auto grown = subset;
      auto it = std::find_if(full.begin(), full.end(), [&](const InputItem& r) {
        return r.base_id == m.base_id && r.variant_type == m.variant_type;
      });
      if (it == full.end()) {
        // A semantic row for a base the full corpus did not cover.
        const auto* base = &*std::find_if(full.begin(), full.end(), [&](const InputItem& r) { return r.item_id == m.base_id; });
        grown.push_back({variant_item_id(m.base_id, m.variant_type), m.base_id, base->class_label, m.variant_type,
                         "fresh text " + m.base_id, Provenance::supplied_semantic, std::string("n")});
      } else {
        grown.push_back(*it);
      }
      ASSERT_LE(adequacy(grown, {"BUG", "FEATURE"}).missing.size(), report.missing.size());
    }
    // Certificate: supplying exactly the listed rows makes the corpus adequate.
    auto repaired = subset;
    for (const auto& m : report.missing) {
      if (is_syntactic(m.variant_type)) {
        const auto& base = *std::find_if(subset.begin(), subset.end(), [&](const InputItem& r) { return r.item_id == m.base_id; });
        repaired.push_back(make_variant(base, m.variant_type, 7));
      } else {
        const auto& base = *std::find_if(subset.begin(), subset.end(), [&](const InputItem& r) { return r.item_id == m.base_id; });
        repaired.push_back({variant_item_id(m.base_id, m.variant_type), m.base_id, base.class_label, m.variant_type,
                            "supplied " + variant_item_id(m.base_id, m.variant_type), Provenance::supplied_semantic,
                            std::string("n")});
      }
    }
    auto after = adequacy(repaired, {"BUG", "FEATURE"});
    ASSERT_TRUE(after.adequate) << "round " << round << ", " << after.missing.size() << " still missing";
  }
}

TEST(Adequacy, JsonAndTextRendering) {
  auto corpus = adequate_corpus({"BUG"}, 50, 10);
  corpus.pop_back();
  auto report = adequacy(corpus, {"BUG"});
  auto json = to_json(report);
  EXPECT_EQ(json["adequate"], false);
  EXPECT_EQ(json["missing"].size(), report.missing.size());
  auto text = render_adequacy_text(report);
  EXPECT_NE(text.find(report.missing[0].base_id), std::string::npos) << text;
}

}  // namespace
}  // namespace aggrtest
