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

// The ten bibliometric features for an (author, focal paper) pair and the
// min-max scaling applied before modeling.
//
// Every feature is computed from the profile exactly as given; callers pass
// the author's history before the focal paper (history_before or the
// before_year filter of the OpenAlex client).

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolescope/core_domain.hpp"

namespace rolescope::features {

// |focal refs ∩ refs cited anywhere in the history| / |focal refs|; 0 when
// the focal paper has no references.
double contribution_to_references(const AuthorProfile& profile,
                                  const PaperRecord& focal);
// Same overlap ratio over topic ids.
double contribution_to_topics(const AuthorProfile& profile,
                              const PaperRecord& focal);
// Share of works with the author in first position; 0 for an empty profile.
double probability_of_leading(const AuthorProfile& profile);
// Share of works where the author is corresponding; 0 for an empty profile.
double probability_of_leading_correspondence(const AuthorProfile& profile);
// Last minus first publication year. Throws Error(kEmptyProfile).
int career_age(const AuthorProfile& profile);
std::int64_t citation_count(const AuthorProfile& profile);
std::size_t unique_topics(const AuthorProfile& profile);
std::size_t total_publications(const AuthorProfile& profile);
// Citations / (career_age + 1). Throws Error(kEmptyProfile).
double citation_impact_per_year(const AuthorProfile& profile);
std::size_t institutional_diversity(const AuthorProfile& profile);

// All ten features in canonical order. Degenerate profiles never throw: a
// feature whose standalone operation would fail is set to 0 and a warning is
// appended to `warnings` (and logged).
FeatureVector extract_features(const AuthorProfile& profile,
                               const PaperRecord& focal,
                               std::vector<std::string>* warnings = nullptr);

struct NormalizationRanges {
  std::array<double, kFeatureCount> min{};
  std::array<double, kFeatureCount> max{};
  bool fitted = false;
};

// Column-wise extrema. Throws Error(kEmptyInput).
NormalizationRanges fit_normalization(std::span<const FeatureVector> matrix);

// (value - min) / (max - min) clamped to [0,1]; constant columns map to 0.
// Throws Error(kUnfittedRanges).
FeatureVector apply_normalization(const FeatureVector& vector,
                                  const NormalizationRanges& ranges);

nlohmann::json to_json(const NormalizationRanges& ranges);
NormalizationRanges normalization_from_json(const nlohmann::json& json);

}  // namespace rolescope::features
