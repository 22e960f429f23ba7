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

#pragma once

// Shared vocabulary types: role labels, corpus records, author publication
// histories and the ten-field feature vector.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace rolescope {

// Three-level author role taxonomy. Enumerator values are the class index
// used by reports and classifiers (Leadership first); the hierarchy is
// expressed by role_rank(), not by the enumerator value.
enum class RoleLabel : std::uint8_t {
  kLeadership = 0,
  kDirectSupport = 1,
  kIndirectSupport = 2,
};

inline constexpr std::size_t kRoleCount = 3;
inline constexpr std::array<RoleLabel, kRoleCount> kAllRoles = {
    RoleLabel::kLeadership, RoleLabel::kDirectSupport,
    RoleLabel::kIndirectSupport};

enum class BinaryRole : std::uint8_t {
  kLeadership = 0,
  kSupport = 1,
};

inline constexpr std::size_t kBinaryRoleCount = 2;

// Leadership > DirectSupport > IndirectSupport.
constexpr int role_rank(RoleLabel role) {
  switch (role) {
    case RoleLabel::kLeadership:
      return 2;
    case RoleLabel::kDirectSupport:
      return 1;
    case RoleLabel::kIndirectSupport:
      return 0;
  }
  return 0;
}

constexpr bool outranks(RoleLabel a, RoleLabel b) {
  return role_rank(a) > role_rank(b);
}

constexpr RoleLabel role_max(RoleLabel a, RoleLabel b) {
  return outranks(b, a) ? b : a;
}

constexpr BinaryRole to_binary(RoleLabel role) {
  return role == RoleLabel::kLeadership ? BinaryRole::kLeadership
                                        : BinaryRole::kSupport;
}

constexpr std::size_t index_of(RoleLabel role) {
  return static_cast<std::size_t>(role);
}
constexpr std::size_t index_of(BinaryRole role) {
  return static_cast<std::size_t>(role);
}

// Serialized identifiers ("Leadership", "DirectSupport", "IndirectSupport").
std::string_view to_string(RoleLabel role);
// Human-readable names as used in prompts and reports ("Direct Support").
std::string_view display_name(RoleLabel role);
std::string_view to_string(BinaryRole role);

// Accepts serialized identifiers and display names, case-insensitively.
std::optional<RoleLabel> parse_role(std::string_view text);
std::optional<BinaryRole> parse_binary_role(std::string_view text);

enum class Journal : std::uint8_t {
  kPnas = 0,
  kNature = 1,
  kScience = 2,
  kPlosOne = 3,
};

inline constexpr std::array<Journal, 4> kAllJournals = {
    Journal::kPnas, Journal::kNature, Journal::kScience, Journal::kPlosOne};

std::string_view to_string(Journal journal);
// Case-insensitive, with aliases ("PLoS ONE", "PLOS One", "plos_one", ...).
std::optional<Journal> parse_journal(std::string_view text);

inline constexpr int kCorpusFirstYear = 2003;
inline constexpr int kCorpusLastYear = 2020;

struct ContributionRecord {
  std::string paper_id;
  Journal journal = Journal::kPnas;
  int year = 0;
  std::string author_name;
  int author_position = 1;
  bool is_corresponding = false;
  std::string statement;
  std::optional<RoleLabel> gold_role;

  // "<paper_id>#<author_position>", unique within a valid corpus.
  std::string record_id() const;

  friend bool operator==(const ContributionRecord&,
                         const ContributionRecord&) = default;
};

struct PaperRecord {
  std::string paper_id;
  Journal journal = Journal::kPnas;
  int year = 0;
  std::vector<ContributionRecord> authors;
  std::set<std::string> referenced_work_ids;
  std::set<std::string> topic_ids;

  std::size_t team_size() const { return authors.size(); }
};

// Groups records by paper_id (first-seen order), sorting authors by
// position. Journal and year come from the paper's first record.
std::vector<PaperRecord> group_into_papers(
    const std::vector<ContributionRecord>& records);

struct WorkEntry {
  std::string work_id;
  int year = 0;
  int author_position = 1;
  bool is_corresponding = false;
  std::set<std::string> referenced_work_ids;
  std::set<std::string> topic_ids;
  std::int64_t citation_count = 0;
  std::set<std::string> institution_ids;

  friend bool operator==(const WorkEntry&, const WorkEntry&) = default;
};

struct AuthorProfile {
  std::string author_id;
  std::vector<WorkEntry> works;
};

// Throws Error(kInvalidArgument) on duplicate work ids, negative citation
// counts or implausible years.
void validate(const AuthorProfile& profile);

// Works strictly before `year`.
AuthorProfile history_before(const AuthorProfile& profile, int year);

enum class Feature : std::size_t {
  kContributionToReferences = 0,
  kContributionToTopics = 1,
  kProbabilityOfLeading = 2,
  kProbabilityOfLeadingCorrespondence = 3,
  kCareerAge = 4,
  kCitationCount = 5,
  kUniqueTopics = 6,
  kTotalPublications = 7,
  kCitationImpactPerYear = 8,
  kInstitutionalDiversity = 9,
};

inline constexpr std::size_t kFeatureCount = 10;

// The first eight features; the last two extend the original feature set.
inline constexpr std::size_t kBaseFeatureCount = 8;

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "contribution_to_references",
    "contribution_to_topics",
    "probability_of_leading",
    "probability_of_leading_correspondence",
    "career_age",
    "citation_count",
    "unique_topics",
    "total_publications",
    "citation_impact_per_year",
    "institutional_diversity",
};

constexpr bool is_ratio_feature(Feature f) {
  return static_cast<std::size_t>(f) <= 3;
}

struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  double operator[](Feature f) const {
    return values[static_cast<std::size_t>(f)];
  }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Throws Error(kInvalidArgument) if any field is non-finite, negative, or a
// ratio outside [0,1].
void validate(const FeatureVector& features);

nlohmann::json to_json(const FeatureVector& features);
FeatureVector feature_vector_from_json(const nlohmann::json& json);

}  // namespace rolescope
