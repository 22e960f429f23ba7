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

#include "rolescope/rule_classifier.hpp"

#include <cctype>

#include "rolescope/error.hpp"
#include "rolescope/table_io.hpp"

namespace rolescope::rules {

KeywordTaxonomy KeywordTaxonomy::defaults() {
  KeywordTaxonomy taxonomy;
  taxonomy.leadership_stems = {"design",    "conceptualiz", "direct",
                               "supervis",  "coordinat",    "interpret",
                               "conduct",   "writ"};
  taxonomy.direct_stems = {"help", "assist", "prepar", "collect", "analyz"};
  taxonomy.indirect_stems = {"participat", "provid", "contribut",
                             "comment",    "edit",   "discuss"};
  taxonomy.aliases = {{"wrote", "writ"}, {"written", "writ"}};
  return taxonomy;
}

const std::vector<std::string>& KeywordTaxonomy::stems(RoleLabel role) const {
  switch (role) {
    case RoleLabel::kLeadership:
      return leadership_stems;
    case RoleLabel::kDirectSupport:
      return direct_stems;
    case RoleLabel::kIndirectSupport:
      return indirect_stems;
  }
  return leadership_stems;
}

std::vector<std::string>& KeywordTaxonomy::stems(RoleLabel role) {
  return const_cast<std::vector<std::string>&>(
      static_cast<const KeywordTaxonomy&>(*this).stems(role));
}

void KeywordTaxonomy::validate() const {
  std::map<std::string, RoleLabel> owner;
  for (const auto role : kAllRoles) {
    for (const auto& stem : stems(role)) {
      if (stem.empty()) {
        throw Error(ErrorCode::kInvalidTaxonomy, "empty stem");
      }
      for (char c : stem) {
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)))) {
          throw Error(ErrorCode::kInvalidTaxonomy,
                      "stem '" + stem + "' must be lowercase alphanumeric");
        }
      }
      const auto [it, inserted] = owner.emplace(stem, role);
      if (!inserted && it->second != role) {
        throw Error(ErrorCode::kInvalidTaxonomy,
                    "stem '" + stem + "' listed under both " +
                        std::string(to_string(it->second)) + " and " +
                        std::string(to_string(role)));
      }
    }
  }
  for (const auto& [word, stem] : aliases) {
    if (!owner.contains(stem)) {
      throw Error(ErrorCode::kInvalidTaxonomy,
                  "alias '" + word + "' targets unknown stem '" + stem + "'");
    }
  }
}

KeywordTaxonomy taxonomy_from_json(const nlohmann::json& json) {
  if (!json.is_object()) {
    throw Error(ErrorCode::kInvalidTaxonomy, "taxonomy must be an object");
  }
  KeywordTaxonomy taxonomy;
  bool seen[kRoleCount] = {false, false, false};
  for (const auto& [key, value] : json.items()) {
    if (key == "aliases") {
      if (!value.is_object()) {
        throw Error(ErrorCode::kInvalidTaxonomy, "aliases must be an object");
      }
      for (const auto& [word, stem] : value.items()) {
        if (!stem.is_string()) {
          throw Error(ErrorCode::kInvalidTaxonomy, "alias must be a string");
        }
        taxonomy.aliases[word] = stem.get<std::string>();
      }
      continue;
    }
    if (key == "schema_version") continue;
    const auto role = parse_role(key);
    if (!role) {
      throw Error(ErrorCode::kInvalidTaxonomy, "unknown role '" + key + "'");
    }
    if (!value.is_array()) {
      throw Error(ErrorCode::kInvalidTaxonomy, key + " must be a list");
    }
    auto& stems = taxonomy.stems(*role);
    for (const auto& stem : value) {
      if (!stem.is_string()) {
        throw Error(ErrorCode::kInvalidTaxonomy, "stems must be strings");
      }
      stems.push_back(stem.get<std::string>());
    }
    seen[index_of(*role)] = true;
  }
  for (const auto role : kAllRoles) {
    if (!seen[index_of(role)]) {
      throw Error(ErrorCode::kInvalidTaxonomy,
                  "missing stem list for " + std::string(to_string(role)));
    }
  }
  taxonomy.validate();
  return taxonomy;
}

nlohmann::json to_json(const KeywordTaxonomy& taxonomy) {
  nlohmann::json json;
  for (const auto role : kAllRoles) {
    json[std::string(to_string(role))] = taxonomy.stems(role);
  }
  json["aliases"] = taxonomy.aliases;
  return json;
}

KeywordTaxonomy load_taxonomy(const std::filesystem::path& path) {
  return taxonomy_from_json(read_json_file(path));
}

std::vector<std::string> tokenize_words(std::string_view statement) {
  std::vector<std::string> words;
  std::string current;
  for (char c : statement) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      current += static_cast<char>(std::tolower(u));
    } else if (c == '\'') {
      // "author's" -> "authors"
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::set<StemMatch> match_stems(std::string_view statement,
                                const KeywordTaxonomy& taxonomy) {
  std::set<StemMatch> matches;
  for (auto word : tokenize_words(statement)) {
    if (const auto alias = taxonomy.aliases.find(word);
        alias != taxonomy.aliases.end()) {
      word = alias->second;
    }
    for (const auto role : kAllRoles) {
      for (const auto& stem : taxonomy.stems(role)) {
        if (word.starts_with(stem)) matches.insert({stem, role});
      }
    }
  }
  return matches;
}

std::optional<RoleLabel> try_classify_statement(
    std::string_view statement, const KeywordTaxonomy& taxonomy) {
  std::optional<RoleLabel> best;
  for (const auto& match : match_stems(statement, taxonomy)) {
    best = best ? role_max(*best, match.role) : match.role;
  }
  return best;
}

RoleLabel classify_statement(std::string_view statement,
                             const KeywordTaxonomy& taxonomy) {
  if (auto role = try_classify_statement(statement, taxonomy)) return *role;
  throw Error(ErrorCode::kNoKeywordMatch,
              "no taxonomy keyword in statement: " + std::string(statement));
}

}  // namespace rolescope::rules
