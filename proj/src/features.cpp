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

#include "rolescope/features.hpp"

#include <algorithm>
#include <set>

#include "rolescope/error.hpp"
#include "spdlog/spdlog.h"

namespace rolescope::features {

namespace {

double overlap_ratio(const std::set<std::string>& focal_ids,
                     const std::set<std::string>& history_ids) {
  if (focal_ids.empty()) return 0.0;
  std::size_t overlap = 0;
  for (const auto& id : focal_ids) {
    if (history_ids.contains(id)) ++overlap;
  }
  return static_cast<double>(overlap) / static_cast<double>(focal_ids.size());
}

template <typename Member>
std::set<std::string> union_of(const AuthorProfile& profile, Member member) {
  std::set<std::string> ids;
  for (const auto& work : profile.works) {
    const auto& field = work.*member;
    ids.insert(field.begin(), field.end());
  }
  return ids;
}

void require_works(const AuthorProfile& profile, const char* what) {
  if (profile.works.empty()) {
    throw Error(ErrorCode::kEmptyProfile,
                std::string(what) + " undefined for author " +
                    profile.author_id + " with no works");
  }
}

}  // namespace

double contribution_to_references(const AuthorProfile& profile,
                                  const PaperRecord& focal) {
  return overlap_ratio(focal.referenced_work_ids,
                       union_of(profile, &WorkEntry::referenced_work_ids));
}

double contribution_to_topics(const AuthorProfile& profile,
                              const PaperRecord& focal) {
  return overlap_ratio(focal.topic_ids,
                       union_of(profile, &WorkEntry::topic_ids));
}

double probability_of_leading(const AuthorProfile& profile) {
  if (profile.works.empty()) return 0.0;
  const auto first = std::count_if(
      profile.works.begin(), profile.works.end(),
      [](const WorkEntry& w) { return w.author_position == 1; });
  return static_cast<double>(first) /
         static_cast<double>(profile.works.size());
}

double probability_of_leading_correspondence(const AuthorProfile& profile) {
  if (profile.works.empty()) return 0.0;
  const auto corresponding =
      std::count_if(profile.works.begin(), profile.works.end(),
                    [](const WorkEntry& w) { return w.is_corresponding; });
  return static_cast<double>(corresponding) /
         static_cast<double>(profile.works.size());
}

int career_age(const AuthorProfile& profile) {
  require_works(profile, "career age");
  const auto [lo, hi] = std::minmax_element(
      profile.works.begin(), profile.works.end(),
      [](const WorkEntry& a, const WorkEntry& b) { return a.year < b.year; });
  return hi->year - lo->year;
}

std::int64_t citation_count(const AuthorProfile& profile) {
  std::int64_t total = 0;
  for (const auto& work : profile.works) total += work.citation_count;
  return total;
}

std::size_t unique_topics(const AuthorProfile& profile) {
  return union_of(profile, &WorkEntry::topic_ids).size();
}

std::size_t total_publications(const AuthorProfile& profile) {
  return profile.works.size();
}

double citation_impact_per_year(const AuthorProfile& profile) {
  require_works(profile, "citation impact per year");
  const int years_active = career_age(profile) + 1;
  return static_cast<double>(citation_count(profile)) /
         static_cast<double>(years_active);
}

std::size_t institutional_diversity(const AuthorProfile& profile) {
  return union_of(profile, &WorkEntry::institution_ids).size();
}

FeatureVector extract_features(const AuthorProfile& profile,
                               const PaperRecord& focal,
                               std::vector<std::string>* warnings) {
  FeatureVector v;
  v[Feature::kContributionToReferences] =
      contribution_to_references(profile, focal);
  v[Feature::kContributionToTopics] = contribution_to_topics(profile, focal);
  v[Feature::kProbabilityOfLeading] = probability_of_leading(profile);
  v[Feature::kProbabilityOfLeadingCorrespondence] =
      probability_of_leading_correspondence(profile);
  v[Feature::kCitationCount] =
      static_cast<double>(citation_count(profile));
  v[Feature::kUniqueTopics] = static_cast<double>(unique_topics(profile));
  v[Feature::kTotalPublications] =
      static_cast<double>(total_publications(profile));
  v[Feature::kInstitutionalDiversity] =
      static_cast<double>(institutional_diversity(profile));
  if (profile.works.empty()) {
    const std::string message =
        "author " + profile.author_id + " has no works before paper " +
        focal.paper_id + "; career_age and citation_impact_per_year set to 0";
    spdlog::debug(message);
    if (warnings != nullptr) warnings->push_back(message);
  } else {
    v[Feature::kCareerAge] = static_cast<double>(career_age(profile));
    v[Feature::kCitationImpactPerYear] = citation_impact_per_year(profile);
  }
  return v;
}

NormalizationRanges fit_normalization(std::span<const FeatureVector> matrix) {
  if (matrix.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot fit ranges on no rows");
  }
  NormalizationRanges ranges;
  ranges.min = matrix.front().values;
  ranges.max = matrix.front().values;
  for (const auto& row : matrix) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      ranges.min[i] = std::min(ranges.min[i], row.values[i]);
      ranges.max[i] = std::max(ranges.max[i], row.values[i]);
    }
  }
  ranges.fitted = true;
  return ranges;
}

FeatureVector apply_normalization(const FeatureVector& vector,
                                  const NormalizationRanges& ranges) {
  if (!ranges.fitted) {
    throw Error(ErrorCode::kUnfittedRanges, "normalization ranges not fitted");
  }
  FeatureVector out;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double span = ranges.max[i] - ranges.min[i];
    if (!(span > 0.0)) {
      out.values[i] = 0.0;
      continue;
    }
    out.values[i] =
        std::clamp((vector.values[i] - ranges.min[i]) / span, 0.0, 1.0);
  }
  return out;
}

nlohmann::json to_json(const NormalizationRanges& ranges) {
  nlohmann::json json;
  json["feature_names"] = kFeatureNames;
  json["min"] = ranges.min;
  json["max"] = ranges.max;
  json["fitted"] = ranges.fitted;
  return json;
}

NormalizationRanges normalization_from_json(const nlohmann::json& json) {
  NormalizationRanges ranges;
  try {
    ranges.min = json.at("min").get<std::array<double, kFeatureCount>>();
    ranges.max = json.at("max").get<std::array<double, kFeatureCount>>();
    ranges.fitted = json.at("fitted").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError,
                std::string("invalid normalization ranges: ") + e.what());
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (ranges.min[i] > ranges.max[i]) {
      throw Error(ErrorCode::kFormatError,
                  "normalization min exceeds max for " +
                      std::string(kFeatureNames[i]));
    }
  }
  return ranges;
}

}  // namespace rolescope::features
