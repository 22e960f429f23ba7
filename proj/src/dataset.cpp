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

#include "rolescope/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "rolescope/error.hpp"
#include "rolescope/random.hpp"
#include "rolescope/table_io.hpp"
#include "rolescope/text_util.hpp"

namespace rolescope::dataset {

namespace {

void check_ratio(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "split ratio must lie in (0,1), got " +
                    text::format_double(ratio));
  }
}

std::size_t test_quota(double ratio, std::size_t count) {
  return static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(count)));
}

}  // namespace

std::vector<bool> stratified_test_mask(std::span<const std::size_t> classes,
                                       double ratio, std::uint64_t seed) {
  check_ratio(ratio);
  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    members[classes[i]].push_back(i);
  }
  std::vector<bool> mask(classes.size(), false);
  for (auto& [cls, indices] : members) {
    Rng rng(derive_seed(seed, cls));
    rng.shuffle(std::span<std::size_t>(indices));
    const std::size_t quota = test_quota(ratio, indices.size());
    for (std::size_t k = 0; k < quota; ++k) mask[indices[k]] = true;
  }
  return mask;
}

SplitResult stratified_split(std::span<const LabeledExample> examples,
                             double ratio, std::uint64_t seed,
                             SplitOptions options) {
  check_ratio(ratio);
  std::array<std::size_t, kBinaryRoleCount> counts{};
  for (const auto& e : examples) ++counts[index_of(e.label)];
  for (std::size_t c = 0; c < kBinaryRoleCount; ++c) {
    if (counts[c] < 2) {
      throw Error(ErrorCode::kClassTooSmall,
                  "class " +
                      std::string(to_string(static_cast<BinaryRole>(c))) +
                      " has " + std::to_string(counts[c]) +
                      " examples; at least 2 required");
    }
  }

  std::vector<bool> in_test;
  if (!options.group_by_author) {
    std::vector<std::size_t> classes;
    classes.reserve(examples.size());
    for (const auto& e : examples) classes.push_back(index_of(e.label));
    in_test = stratified_test_mask(classes, ratio, seed);
  } else {
    // Walk authors in seeded order; an author's rows go to test while that
    // keeps every class within its quota.
    std::map<std::string, std::vector<std::size_t>> by_author;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      by_author[examples[i].author_id].push_back(i);
    }
    std::vector<const std::vector<std::size_t>*> authors;
    for (const auto& [id, rows] : by_author) authors.push_back(&rows);
    Rng rng(seed);
    rng.shuffle(std::span(authors));
    std::array<std::size_t, kBinaryRoleCount> quota{};
    for (std::size_t c = 0; c < kBinaryRoleCount; ++c) {
      quota[c] = test_quota(ratio, counts[c]);
    }
    std::array<std::size_t, kBinaryRoleCount> taken{};
    in_test.assign(examples.size(), false);
    for (const auto* rows : authors) {
      std::array<std::size_t, kBinaryRoleCount> add{};
      for (auto i : *rows) ++add[index_of(examples[i].label)];
      bool fits = true;
      for (std::size_t c = 0; c < kBinaryRoleCount; ++c) {
        if (taken[c] + add[c] > quota[c]) fits = false;
      }
      if (!fits) continue;
      for (std::size_t c = 0; c < kBinaryRoleCount; ++c) taken[c] += add[c];
      for (auto i : *rows) in_test[i] = true;
    }
  }

  SplitResult result;
  result.seed = seed;
  result.ratio = ratio;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    (in_test[i] ? result.test : result.train).push_back(examples[i]);
  }
  return result;
}

void write_examples(const std::filesystem::path& path,
                    std::span<const LabeledExample> examples) {
  Table table;
  table.header = {"author_id", "paper_id"};
  for (const auto name : kFeatureNames) table.header.emplace_back(name);
  table.header.emplace_back("label");
  for (const auto& e : examples) {
    std::vector<std::string> row = {e.author_id, e.paper_id};
    for (double v : e.features.values) row.push_back(text::format_double(v));
    row.emplace_back(to_string(e.label));
    table.rows.push_back(std::move(row));
  }
  write_table(path, table);
}

std::vector<LabeledExample> read_examples(const std::filesystem::path& path) {
  const Table table = read_table(path);
  const auto require = [&](std::string_view name) {
    const auto column = table.column(name);
    if (column == std::string::npos) throw MissingColumn(std::string(name));
    return column;
  };
  const auto author = require("author_id");
  const auto paper = require("paper_id");
  const auto label = require("label");
  std::array<std::size_t, kFeatureCount> columns{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    columns[i] = require(kFeatureNames[i]);
  }
  std::vector<LabeledExample> examples;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    LabeledExample e;
    e.author_id = row[author];
    e.paper_id = row[paper];
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const auto value = text::parse_double(row[columns[i]]);
      if (!value || !std::isfinite(*value)) {
        throw FormatError(table.row_lines[r],
                          "invalid value for " + std::string(kFeatureNames[i]));
      }
      e.features.values[i] = *value;
    }
    const auto role = parse_binary_role(row[label]);
    if (!role) throw FormatError(table.row_lines[r], "invalid label");
    e.label = *role;
    examples.push_back(std::move(e));
  }
  return examples;
}

nlohmann::json split_manifest(const SplitResult& split,
                              const SplitOptions& options) {
  const auto count = [](const std::vector<LabeledExample>& rows,
                        BinaryRole role) {
    return std::count_if(rows.begin(), rows.end(),
                         [&](const auto& e) { return e.label == role; });
  };
  nlohmann::json json;
  json["schema_version"] = 1;
  json["seed"] = split.seed;
  json["ratio"] = split.ratio;
  json["group_by_author"] = options.group_by_author;
  json["train"] = {
      {"total", split.train.size()},
      {"Leadership", count(split.train, BinaryRole::kLeadership)},
      {"Support", count(split.train, BinaryRole::kSupport)}};
  json["test"] = {{"total", split.test.size()},
                  {"Leadership", count(split.test, BinaryRole::kLeadership)},
                  {"Support", count(split.test, BinaryRole::kSupport)}};
  return json;
}

}  // namespace rolescope::dataset
