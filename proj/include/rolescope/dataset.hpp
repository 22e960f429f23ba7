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

// Labeled feature rows and the stratified train/test partition.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolescope/core_domain.hpp"

namespace rolescope::dataset {

struct LabeledExample {
  std::string author_id;
  std::string paper_id;
  FeatureVector features;
  BinaryRole label = BinaryRole::kSupport;

  friend bool operator==(const LabeledExample&,
                         const LabeledExample&) = default;
};

struct SplitResult {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> test;
  std::uint64_t seed = 0;
  double ratio = 0.0;
};

struct SplitOptions {
  // Keep every example of an author on one side. Class proportions are then
  // matched greedily rather than exactly.
  bool group_by_author = false;
};

// Per class c, round(ratio * |c|) examples go to test, chosen by a seeded
// shuffle. Both partitions keep input order. Throws Error(kClassTooSmall)
// when a class has fewer than two examples, Error(kInvalidArgument) for a
// ratio outside (0,1).
SplitResult stratified_split(std::span<const LabeledExample> examples,
                             double ratio, std::uint64_t seed,
                             SplitOptions options = {});

// Generic core of the split: returns a test-membership mask for items with
// the given class indices. Classes with no items are ignored.
std::vector<bool> stratified_test_mask(std::span<const std::size_t> classes,
                                       double ratio, std::uint64_t seed);

// author_id, paper_id, ten feature columns in canonical order, label.
void write_examples(const std::filesystem::path& path,
                    std::span<const LabeledExample> examples);
std::vector<LabeledExample> read_examples(const std::filesystem::path& path);

nlohmann::json split_manifest(const SplitResult& split,
                              const SplitOptions& options);

}  // namespace rolescope::dataset
