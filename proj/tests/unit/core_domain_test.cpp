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
#include <limits>

#include "rolescope/core_domain.hpp"
#include "rolescope/error.hpp"
#include "rolescope/random.hpp"

namespace rolescope {
namespace {

using R = RoleLabel;

TEST(ToBinary, MergesSupportRoles) {
  EXPECT_EQ(to_binary(R::kLeadership), BinaryRole::kLeadership);
  EXPECT_EQ(to_binary(R::kDirectSupport), BinaryRole::kSupport);
  EXPECT_EQ(to_binary(R::kIndirectSupport), BinaryRole::kSupport);
}

TEST(RoleMax, Examples) {
  EXPECT_EQ(role_max(R::kLeadership, R::kIndirectSupport), R::kLeadership);
  EXPECT_EQ(role_max(R::kDirectSupport, R::kDirectSupport), R::kDirectSupport);
  EXPECT_EQ(role_max(R::kIndirectSupport, R::kDirectSupport), R::kDirectSupport);
}

TEST(RoleMax, AlgebraOverAllPairs) {
  for (auto a : kAllRoles) {
    EXPECT_EQ(role_max(a, a), a);
    for (auto b : kAllRoles) {
      EXPECT_EQ(role_max(a, b), role_max(b, a));
      const bool lead = a == R::kLeadership || b == R::kLeadership;
      EXPECT_EQ(to_binary(role_max(a, b)) == BinaryRole::kLeadership, lead);
      for (auto c : kAllRoles) {
        EXPECT_EQ(role_max(role_max(a, b), c), role_max(a, role_max(b, c)));
      }
    }
  }
}

TEST(Roles, ParseAcceptsIdentifiersAndDisplayNames) {
  for (auto r : kAllRoles) {
    EXPECT_EQ(parse_role(to_string(r)), r);
    EXPECT_EQ(parse_role(display_name(r)), r);
  }
  EXPECT_EQ(parse_role("Direct Support"), R::kDirectSupport);
  EXPECT_FALSE(parse_role("Manager").has_value());
  EXPECT_EQ(parse_binary_role(to_string(BinaryRole::kSupport)), BinaryRole::kSupport);
}

TEST(Journal, CaseInsensitiveWithAliases) {
  EXPECT_EQ(parse_journal("PLoS ONE"), Journal::kPlosOne);
  EXPECT_EQ(parse_journal("PLOS One"), Journal::kPlosOne);
  EXPECT_EQ(parse_journal("nature"), Journal::kNature);
  EXPECT_EQ(parse_journal("PNAS"), Journal::kPnas);
  EXPECT_EQ(parse_journal("Science"), Journal::kScience);
  EXPECT_FALSE(parse_journal("Cell").has_value());
}

TEST(ContributionRecord, RecordIdUsesPosition) {
  ContributionRecord r;
  r.paper_id = "W7";
  r.author_position = 3;
  EXPECT_EQ(r.record_id(), "W7#3");
}

TEST(GroupIntoPapers, KeepsAuthorsTogether) {
  std::vector<ContributionRecord> rows(3);
  rows[0].paper_id = "A";
  rows[1].paper_id = "B";
  rows[2].paper_id = "A";
  rows[2].author_position = 2;
  const auto papers = group_into_papers(rows);
  ASSERT_EQ(papers.size(), 2u);
  std::size_t total = 0;
  for (const auto& p : papers) total += p.team_size();
  EXPECT_EQ(total, 3u);
}

TEST(AuthorProfile, HistoryBeforeIsStrict) {
  AuthorProfile p;
  for (int y : {2010, 2012, 2015}) {
    WorkEntry w;
    w.work_id = "W" + std::to_string(y);
    w.year = y;
    p.works.push_back(w);
  }
  EXPECT_EQ(history_before(p, 2015).works.size(), 2u);
  EXPECT_EQ(history_before(p, 2010).works.size(), 0u);
}

TEST(AuthorProfile, ValidateRejectsDuplicates) {
  AuthorProfile p;
  WorkEntry w;
  w.work_id = "W1";
  w.year = 2010;
  p.works = {w, w};
  EXPECT_THROW(validate(p), Error);
}

TEST(FeatureVector, JsonRoundTripIsBitExact) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    FeatureVector v;
    for (auto& x : v.values) x = (rng.uniform() - 0.5) * std::pow(10.0, rng.below(12));
    v.values[0] = std::nextafter(0.1, 1.0);
    const auto back = feature_vector_from_json(nlohmann::json::parse(to_json(v).dump()));
    EXPECT_EQ(back, v);
  }
}

TEST(FeatureVector, ValidateRejectsNonFinite) {
  FeatureVector v;
  v.values[4] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate(v), Error);
}

TEST(DeriveSeed, StreamsDiffer) {
  EXPECT_NE(derive_seed(42, 1), derive_seed(42, 2));
  EXPECT_EQ(derive_seed(42, 1), derive_seed(42, 1));
}

}  // namespace
}  // namespace rolescope
