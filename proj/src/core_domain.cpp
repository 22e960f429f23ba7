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

#include "rolescope/core_domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "rolescope/error.hpp"
#include "rolescope/text_util.hpp"

namespace rolescope {

std::string_view to_string(RoleLabel role) {
  switch (role) {
    case RoleLabel::kLeadership:
      return "Leadership";
    case RoleLabel::kDirectSupport:
      return "DirectSupport";
    case RoleLabel::kIndirectSupport:
      return "IndirectSupport";
  }
  return "";
}

std::string_view display_name(RoleLabel role) {
  switch (role) {
    case RoleLabel::kLeadership:
      return "Leadership";
    case RoleLabel::kDirectSupport:
      return "Direct Support";
    case RoleLabel::kIndirectSupport:
      return "Indirect Support";
  }
  return "";
}

std::string_view to_string(BinaryRole role) {
  return role == BinaryRole::kLeadership ? "Leadership" : "Support";
}

namespace {

// Lowercase with spaces, underscores and hyphens removed.
std::string squash(std::string_view text) {
  std::string out;
  for (char c : text::trim(text)) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

std::optional<RoleLabel> parse_role(std::string_view text) {
  const std::string key = squash(text);
  if (key == "leadership") return RoleLabel::kLeadership;
  if (key == "directsupport") return RoleLabel::kDirectSupport;
  if (key == "indirectsupport") return RoleLabel::kIndirectSupport;
  return std::nullopt;
}

std::optional<BinaryRole> parse_binary_role(std::string_view text) {
  const std::string key = squash(text);
  if (key == "leadership") return BinaryRole::kLeadership;
  if (key == "support") return BinaryRole::kSupport;
  return std::nullopt;
}

std::string_view to_string(Journal journal) {
  switch (journal) {
    case Journal::kPnas:
      return "PNAS";
    case Journal::kNature:
      return "Nature";
    case Journal::kScience:
      return "Science";
    case Journal::kPlosOne:
      return "PLoS One";
  }
  return "";
}

std::optional<Journal> parse_journal(std::string_view text) {
  static const std::map<std::string, Journal> kAliases = {
      {"pnas", Journal::kPnas},
      {"procnatlacadsciusa", Journal::kPnas},
      {"proceedingsofthenationalacademyofsciences", Journal::kPnas},
      {"nature", Journal::kNature},
      {"science", Journal::kScience},
      {"plosone", Journal::kPlosOne},
  };
  std::string key;
  for (char c : text::trim(text)) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  const auto it = kAliases.find(key);
  if (it == kAliases.end()) return std::nullopt;
  return it->second;
}

std::string ContributionRecord::record_id() const {
  return paper_id + "#" + std::to_string(author_position);
}

std::vector<PaperRecord> group_into_papers(
    const std::vector<ContributionRecord>& records) {
  std::vector<PaperRecord> papers;
  std::map<std::string, std::size_t> index;
  for (const auto& record : records) {
    auto [it, inserted] = index.try_emplace(record.paper_id, papers.size());
    if (inserted) {
      PaperRecord paper;
      paper.paper_id = record.paper_id;
      paper.journal = record.journal;
      paper.year = record.year;
      papers.push_back(std::move(paper));
    }
    papers[it->second].authors.push_back(record);
  }
  for (auto& paper : papers) {
    std::stable_sort(paper.authors.begin(), paper.authors.end(),
                     [](const auto& a, const auto& b) {
                       return a.author_position < b.author_position;
                     });
  }
  return papers;
}

void validate(const AuthorProfile& profile) {
  std::unordered_set<std::string> seen;
  for (const auto& work : profile.works) {
    if (!seen.insert(work.work_id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate work id in profile " + profile.author_id + ": " +
                      work.work_id);
    }
    if (work.citation_count < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "negative citation count for " + work.work_id);
    }
    if (work.year < 1000 || work.year > 9999) {
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid year " + std::to_string(work.year) + " for " +
                      work.work_id);
    }
    if (work.author_position < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "author position must be >= 1 for " + work.work_id);
    }
  }
}

AuthorProfile history_before(const AuthorProfile& profile, int year) {
  AuthorProfile history;
  history.author_id = profile.author_id;
  for (const auto& work : profile.works) {
    if (work.year < year) history.works.push_back(work);
  }
  return history;
}

void validate(const FeatureVector& features) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double v = features.values[i];
    const std::string name(kFeatureNames[i]);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, name + " is not finite");
    }
    if (v < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, name + " is negative");
    }
    if (is_ratio_feature(static_cast<Feature>(i)) && v > 1.0) {
      throw Error(ErrorCode::kInvalidArgument, name + " exceeds 1");
    }
  }
}

nlohmann::json to_json(const FeatureVector& features) {
  nlohmann::json json = nlohmann::json::object();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    json[std::string(kFeatureNames[i])] = features.values[i];
  }
  return json;
}

FeatureVector feature_vector_from_json(const nlohmann::json& json) {
  FeatureVector features;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const std::string name(kFeatureNames[i]);
    if (!json.contains(name) || !json.at(name).is_number()) {
      throw Error(ErrorCode::kInvalidArgument, "feature missing: " + name);
    }
    features.values[i] = json.at(name).get<double>();
  }
  return features;
}

}  // namespace rolescope
