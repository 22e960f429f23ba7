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

#include <filesystem>
#include <map>
#include <set>

#include "rolescope/dataset.hpp"
#include "rolescope/error.hpp"
#include "rolescope/random.hpp"

namespace rolescope::dataset {
namespace {

std::vector<LabeledExample> examples(std::size_t leaders, std::size_t support) {
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < leaders + support; ++i) {
    LabeledExample e;
    e.author_id = "A" + std::to_string(i);
    e.paper_id = "W" + std::to_string(i);
    e.features.values[0] = static_cast<double>(i);
    e.label = i < leaders ? BinaryRole::kLeadership : BinaryRole::kSupport;
    out.push_back(e);
  }
  return out;
}

std::size_t count(const std::vector<LabeledExample>& v, BinaryRole r) {
  std::size_t n = 0;
  for (const auto& e : v) n += e.label == r;
  return n;
}

TEST(StratifiedSplit, Examples) {
  const auto all = examples(100, 300);
  const auto split = stratified_split(all, 0.2, 7);
  EXPECT_EQ(count(split.test, BinaryRole::kLeadership), 20u);
  EXPECT_EQ(count(split.test, BinaryRole::kSupport), 60u);
  EXPECT_EQ(split.train.size(), 320u);

  const auto small = stratified_split(examples(10, 10), 0.2, 1);
  EXPECT_EQ(count(small.test, BinaryRole::kLeadership), 2u);
}

TEST(StratifiedSplit, Errors) {
  try {
    stratified_split(examples(1, 10), 0.2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kClassTooSmall);
  }
  EXPECT_THROW(stratified_split(examples(5, 5), 0.0, 1), Error);
  EXPECT_THROW(stratified_split(examples(5, 5), 1.0, 1), Error);
}

TEST(StratifiedSplit, PartitionProperties) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto all = examples(2 + rng.below(80), 2 + rng.below(200));
    const double ratio = 0.05 + 0.9 * rng.uniform();
    const auto seed = rng.next();
    const auto split = stratified_split(all, ratio, seed);
    ASSERT_EQ(split.train.size() + split.test.size(), all.size());
    std::set<std::string> seen;
    for (const auto& e : split.train) seen.insert(e.paper_id);
    for (const auto& e : split.test) EXPECT_TRUE(seen.insert(e.paper_id).second);
    EXPECT_EQ(seen.size(), all.size());
    if (!split.test.empty()) {
      for (auto r : {BinaryRole::kLeadership, BinaryRole::kSupport}) {
        const double in_test = double(count(split.test, r)) / double(split.test.size());
        const double overall = double(count(all, r)) / double(all.size());
        EXPECT_LE(std::abs(in_test - overall), 1.0 / double(split.test.size()) + 1e-12);
      }
    }
    EXPECT_EQ(stratified_split(all, ratio, seed).test, split.test);
  }
}

TEST(StratifiedSplit, PreservesInputOrder) {
  const auto split = stratified_split(examples(30, 30), 0.3, 9);
  for (std::size_t i = 1; i < split.train.size(); ++i) {
    EXPECT_LT(split.train[i - 1].features.values[0], split.train[i].features.values[0]);
  }
}

TEST(StratifiedSplit, GroupByAuthorKeepsAuthorsTogether) {
  auto all = examples(40, 120);
  for (std::size_t i = 0; i < all.size(); ++i) all[i].author_id = "A" + std::to_string(i % 37);
  const auto split = stratified_split(all, 0.2, 3, {.group_by_author = true});
  std::set<std::string> train_authors;
  for (const auto& e : split.train) train_authors.insert(e.author_id);
  for (const auto& e : split.test) EXPECT_FALSE(train_authors.contains(e.author_id));
  EXPECT_EQ(split.train.size() + split.test.size(), all.size());
  EXPECT_FALSE(split.test.empty());
}

TEST(StratifiedTestMask, IgnoresEmptyClasses) {
  const std::vector<std::size_t> classes = {0, 0, 0, 0, 0, 2, 2, 2, 2, 2};
  const auto mask = stratified_test_mask(classes, 0.4, 1);
  EXPECT_EQ(std::count(mask.begin(), mask.end(), true), 4);
}

TEST(Examples, CsvRoundTrip) {
  auto all = examples(3, 3);
  all[2].features.values[9] = 0.1 + 0.2;
  const auto path = std::filesystem::temp_directory_path() / "rolescope_examples.csv";
  write_examples(path, all);
  EXPECT_EQ(read_examples(path), all);
  std::filesystem::remove(path);
}

TEST(SplitManifest, RecordsCounts) {
  const auto split = stratified_split(examples(10, 30), 0.2, 4);
  const auto manifest = split_manifest(split, {});
  EXPECT_EQ(manifest["seed"], 4);
  EXPECT_TRUE(manifest.contains("schema_version"));
}

}  // namespace
}  // namespace rolescope::dataset
