/*
 * Copyright 2026 The Rolescope Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "rolescope/error.hpp"
#include "rolescope/random.hpp"
#include "rolescope/rule_classifier.hpp"

namespace rolescope::rules {
namespace {

using R = RoleLabel;

const KeywordTaxonomy& taxonomy() {
  static const auto t = KeywordTaxonomy::defaults();
  return t;
}

TEST(MatchStems, Examples) {
  EXPECT_EQ(match_stems("Designed the study", taxonomy()),
            (std::set<StemMatch>{{"design", R::kLeadership}}));
  EXPECT_EQ(match_stems("analyzed and edited", taxonomy()),
            (std::set<StemMatch>{{"analyz", R::kDirectSupport},
                                 {"edit", R::kIndirectSupport}}));
  EXPECT_TRUE(match_stems("ran the centrifuge", taxonomy()).empty());
}

TEST(MatchStems, HyphensSplitWords) {
  EXPECT_EQ(tokenize_words("Co-designed, re-Edited!"),
            (std::vector<std::string>{"co", "designed", "re", "edited"}));
  EXPECT_EQ(match_stems("co-designed", taxonomy()).size(), 1u);
}

TEST(MatchStems, IrregularAliases) {
  EXPECT_EQ(classify_statement("wrote the paper", taxonomy()), R::kLeadership);
  EXPECT_EQ(classify_statement("written by", taxonomy()), R::kLeadership);
}

TEST(ClassifyStatement, Examples) {
  EXPECT_EQ(classify_statement("designed research and provided comments", taxonomy()),
            R::kLeadership);
  EXPECT_EQ(classify_statement("collected samples and analyzed data", taxonomy()),
            R::kDirectSupport);
  EXPECT_EQ(classify_statement("commented on the manuscript", taxonomy()),
            R::kIndirectSupport);
  try {
    classify_statement("performed spectroscopy", taxonomy());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoKeywordMatch);
  }
  EXPECT_FALSE(try_classify_statement("performed spectroscopy", taxonomy()).has_value());
}

std::string random_stem_word(Rng& rng, R role) {
  static const std::array<const char*, 4> suffixes = {"", "ed", "ing", "es"};
  const auto& stems = taxonomy().stems(role);
  return stems[rng.below(stems.size())] + suffixes[rng.below(suffixes.size())];
}

TEST(ClassifyStatement, LeadershipStemAlwaysWins) {
  Rng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> words;
    for (std::uint64_t i = 0, n = rng.below(5); i < n; ++i) {
      words.push_back(random_stem_word(rng, kAllRoles[1 + rng.below(2)]));
      words.push_back("the");
    }
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size() + 1)),
                 random_stem_word(rng, R::kLeadership));
    std::string statement;
    for (const auto& w : words) statement += w + " ";
    EXPECT_EQ(classify_statement(statement, taxonomy()), R::kLeadership) << statement;
  }
}

TEST(ClassifyStatement, OrderIndependenceAndMonotonicity) {
  Rng rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> words = {random_stem_word(rng, kAllRoles[rng.below(3)])};
    for (std::uint64_t i = 0, n = rng.below(5); i < n; ++i) {
      words.push_back(rng.below(2) ? "samples" : random_stem_word(rng, kAllRoles[rng.below(3)]));
    }
    const auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& w : v) s += w + " ";
      return s;
    };
    const auto base = classify_statement(join(words), taxonomy());
    rng.shuffle(std::span<std::string>(words));
    EXPECT_EQ(classify_statement(join(words), taxonomy()), base);
    words.push_back(random_stem_word(rng, R::kLeadership));
    EXPECT_EQ(classify_statement(join(words), taxonomy()), R::kLeadership);
  }
}

TEST(Taxonomy, DefaultsValidate) { EXPECT_NO_THROW(taxonomy().validate()); }

TEST(Taxonomy, OverlapRejected) {
  auto t = KeywordTaxonomy::defaults();
  t.indirect_stems.push_back("design");
  EXPECT_THROW(t.validate(), Error);
  auto u = KeywordTaxonomy::defaults();
  u.aliases["ran"] = "nothing";
  EXPECT_THROW(u.validate(), Error);
}

TEST(Taxonomy, JsonRoundTripAndFile) {
  const auto json = to_json(taxonomy());
  const auto back = taxonomy_from_json(json);
  EXPECT_EQ(back.leadership_stems, taxonomy().leadership_stems);
  EXPECT_EQ(back.aliases, taxonomy().aliases);

  const auto path = std::filesystem::temp_directory_path() / "rolescope_taxonomy.json";
  std::ofstream(path) << R"({"Leadership": ["lead"], "Direct Support": ["ran"],
                            "IndirectSupport": ["read"]})";
  const auto custom = load_taxonomy(path);
  EXPECT_EQ(classify_statement("ran the centrifuge", custom), R::kDirectSupport);
  std::ofstream(path) << R"({"Leadership": ["lead"], "DirectSupport": ["lead"],
                            "IndirectSupport": ["read"]})";
  EXPECT_THROW(load_taxonomy(path), Error);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace rolescope::rules
