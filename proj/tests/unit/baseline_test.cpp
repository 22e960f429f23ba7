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

#include <cmath>

#include "rolescope/baseline.hpp"
#include "rolescope/error.hpp"
#include "rolescope/random.hpp"

namespace rolescope::baseline {
namespace {

TEST(Tokenize, LowercaseAlnumRuns) {
  EXPECT_EQ(tokenize("Designed, the STUDY-2x!"),
            (std::vector<std::string>{"designed", "the", "study", "2x"}));
}

TEST(TfidfFit, SingleDocumentIdfIsOne) {
  const std::vector<std::string> corpus = {"alpha beta beta"};
  const auto v = tfidf_fit(corpus, 2000);
  ASSERT_EQ(v.size(), 2u);
  for (double idf : v.idf) EXPECT_DOUBLE_EQ(idf, 1.0);
}

TEST(TfidfFit, UbiquitousTermIdfIsOne) {
  const std::vector<std::string> corpus = {"common a", "common b", "common c"};
  const auto v = tfidf_fit(corpus, 2000);
  EXPECT_DOUBLE_EQ(v.idf[v.index.at("common")], 1.0);
  EXPECT_DOUBLE_EQ(v.idf[v.index.at("a")], std::log(4.0 / 2.0) + 1.0);
}

TEST(TfidfFit, CapAndDenseIndices) {
  std::string doc;
  for (int i = 0; i < 3000; ++i) doc += "t" + std::to_string(i) + " ";
  const std::vector<std::string> corpus = {doc};
  const auto v = tfidf_fit(corpus, 2000);
  EXPECT_EQ(v.size(), 2000u);
  for (std::size_t i = 0; i < v.terms.size(); ++i) EXPECT_EQ(v.index.at(v.terms[i]), i);
  EXPECT_TRUE(std::is_sorted(v.terms.begin(), v.terms.end()));
}

TEST(TfidfFit, TiesBrokenLexicographically) {
  const std::vector<std::string> corpus = {"zeta alpha mu mu"};
  const auto v = tfidf_fit(corpus, 2);
  EXPECT_EQ(v.terms, (std::vector<std::string>{"alpha", "mu"}));
  EXPECT_EQ(tfidf_fit(corpus, 2).terms, v.terms);
}

TEST(TfidfFit, Errors) {
  EXPECT_THROW(tfidf_fit(std::vector<std::string>{}, 10), Error);
  const std::vector<std::string> corpus = {"x"};
  EXPECT_THROW(tfidf_fit(corpus, 0), Error);
}

TEST(TfidfTransform, Examples) {
  const std::vector<std::string> corpus = {"alpha beta", "alpha gamma", "beta gamma"};
  const auto v = tfidf_fit(corpus, 2000);
  EXPECT_TRUE(tfidf_transform(v, "nothing known").entries.empty());
  const auto single = tfidf_transform(v, "gamma");
  ASSERT_EQ(single.entries.size(), 1u);
  EXPECT_DOUBLE_EQ(single.entries[0].second, 1.0);
  const auto pair = tfidf_transform(v, "alpha beta");
  ASSERT_EQ(pair.entries.size(), 2u);
  for (const auto& [i, w] : pair.entries) EXPECT_NEAR(w, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(TfidfTransform, NormIsZeroOrOne) {
  Rng rng(2);
  std::vector<std::string> corpus;
  for (int d = 0; d < 30; ++d) {
    std::string doc;
    for (std::uint64_t w = 0, n = rng.below(8); w < n; ++w) doc += "w" + std::to_string(rng.below(20)) + " ";
    corpus.push_back(doc);
  }
  corpus.push_back("w1");
  const auto v = tfidf_fit(corpus, 10);
  for (const auto& doc : corpus) {
    const double n = tfidf_transform(v, doc).norm();
    EXPECT_TRUE(n == 0.0 || std::abs(n - 1.0) < 1e-12) << n;
  }
}

TEST(Softmax, ZeroWeightsTieBreakToFirstClass) {
  SoftmaxModel m;
  m.dimension = 4;
  for (auto& w : m.weights) w.assign(4, 0.0);
  SparseVector x;
  x.dimension = 4;
  x.entries = {{1, 1.0}};
  EXPECT_EQ(softmax_predict(m, x), RoleLabel::kLeadership);
  x.dimension = 5;
  EXPECT_THROW(softmax_predict(m, x), Error);
}

TEST(Softmax, MarkerWordsAreLearned) {
  const std::array<std::string, 3> markers = {"alphaword", "betaword", "gammaword"};
  const std::array<std::string, 6> filler = {"the", "data", "and", "study", "of", "work"};
  Rng rng(5);
  std::vector<std::string> statements;
  std::vector<RoleLabel> labels;
  for (int i = 0; i < 150; ++i) {
    const auto k = rng.below(3);
    std::string s = markers[k];
    for (int w = 0; w < 4; ++w) s += " " + filler[rng.below(filler.size())];
    statements.push_back(s);
    labels.push_back(kAllRoles[k]);
  }
  const auto clf = fit_text_classifier(statements, labels, 2000, SoftmaxConfig{});
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(clf.predict("of the " + markers[k] + " study"), kAllRoles[k]);
  }
  const auto back = text_classifier_from_json(to_json(clf));
  EXPECT_EQ(back.predict("gammaword data"), RoleLabel::kIndirectSupport);
  EXPECT_EQ(to_json(back).dump(), to_json(clf).dump());
}

TEST(Softmax, TrainErrors) {
  std::vector<SparseVector> vectors(2);
  const std::vector<RoleLabel> labels = {RoleLabel::kLeadership};
  EXPECT_THROW(softmax_train(vectors, labels, SoftmaxConfig{}), Error);
  EXPECT_THROW(softmax_train(std::vector<SparseVector>{}, std::vector<RoleLabel>{},
                             SoftmaxConfig{}),
               Error);
}

TEST(Softmax, DeterministicPerSeed) {
  const std::vector<std::string> s = {"a b", "c d", "e f", "a c"};
  const std::vector<RoleLabel> l = {RoleLabel::kLeadership, RoleLabel::kDirectSupport,
                                    RoleLabel::kIndirectSupport, RoleLabel::kLeadership};
  SoftmaxConfig c;
  c.seed = 3;
  EXPECT_EQ(to_json(fit_text_classifier(s, l, 100, c)).dump(),
            to_json(fit_text_classifier(s, l, 100, c)).dump());
}

}  // namespace
}  // namespace rolescope::baseline
