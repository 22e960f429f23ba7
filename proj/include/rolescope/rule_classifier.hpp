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

// Keyword-hierarchy role assignment: every word of a statement is matched
// against verb stems of the three role categories, and the highest category
// present wins.

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rolescope/core_domain.hpp"

namespace rolescope::rules {

struct KeywordTaxonomy {
  std::vector<std::string> leadership_stems;
  std::vector<std::string> direct_stems;
  std::vector<std::string> indirect_stems;
  // Irregular whole-word forms rewritten to a stem before matching
  // (e.g. "wrote" -> "writ").
  std::map<std::string, std::string> aliases;

  static KeywordTaxonomy defaults();

  const std::vector<std::string>& stems(RoleLabel role) const;
  std::vector<std::string>& stems(RoleLabel role);

  // Throws Error(kInvalidTaxonomy) if stem sets overlap, a stem is empty or
  // not lowercase alphanumeric, or an alias targets an unknown stem.
  void validate() const;
};

// {"Leadership": [...], "DirectSupport": [...], "IndirectSupport": [...],
//  "aliases": {"wrote": "writ"}}; role keys accept display names too.
KeywordTaxonomy taxonomy_from_json(const nlohmann::json& json);
nlohmann::json to_json(const KeywordTaxonomy& taxonomy);
KeywordTaxonomy load_taxonomy(const std::filesystem::path& path);

struct StemMatch {
  std::string stem;
  RoleLabel role;

  auto operator<=>(const StemMatch&) const = default;
};

// Lowercased words with hyphens and punctuation acting as separators.
std::vector<std::string> tokenize_words(std::string_view statement);

// All (stem, role) pairs such that some word starts with the stem.
std::set<StemMatch> match_stems(std::string_view statement,
                                const KeywordTaxonomy& taxonomy);

// Highest-ranked role among the matches. Throws Error(kNoKeywordMatch) when
// nothing matches so the caller can route the record elsewhere.
RoleLabel classify_statement(std::string_view statement,
                             const KeywordTaxonomy& taxonomy);

std::optional<RoleLabel> try_classify_statement(
    std::string_view statement, const KeywordTaxonomy& taxonomy);

}  // namespace rolescope::rules
