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

// Bag-of-words reference classifier: TF-IDF vectors and multinomial
// logistic regression over the three roles.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rolescope/core_domain.hpp"

namespace rolescope::baseline {

// Lowercase ASCII alphanumeric runs; everything else separates tokens.
std::vector<std::string> tokenize(std::string_view text);

struct TfidfVocabulary {
  std::vector<std::string> terms;  // alphabetical; position is the index
  std::vector<double> idf;
  std::map<std::string, std::size_t, std::less<>> index;
  std::size_t max_features = 2000;

  std::size_t size() const { return terms.size(); }
};

// Keeps the max_features most frequent terms (total count over the corpus,
// ties broken lexicographically); idf = ln((1 + N) / (1 + df)) + 1.
// Throws Error(kEmptyCorpus).
TfidfVocabulary tfidf_fit(std::span<const std::string> corpus,
                          std::size_t max_features = 2000);

struct SparseVector {
  std::size_t dimension = 0;
  std::vector<std::pair<std::size_t, double>> entries;  // sorted by index

  double norm() const;
};

// Raw counts times idf, L2-normalized; all-zero when no term is known.
SparseVector tfidf_transform(const TfidfVocabulary& vocabulary,
                             std::string_view text);

struct SoftmaxModel {
  std::size_t dimension = 0;
  std::array<std::vector<double>, kRoleCount> weights;
  std::array<double, kRoleCount> bias{};

  std::array<double, kRoleCount> scores(const SparseVector& x) const;
};

struct SoftmaxConfig {
  std::size_t epochs = 40;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

// Per-example stochastic gradient descent on cross-entropy from zero
// weights, visiting examples in a seeded shuffled order each epoch. Throws
// Error(kEmptyInput), Error(kLengthMismatch) or Error(kDimensionMismatch).
SoftmaxModel softmax_train(std::span<const SparseVector> vectors,
                           std::span<const RoleLabel> labels,
                           const SoftmaxConfig& config);

// Argmax of the class scores; ties go to the lowest class index. Throws
// Error(kDimensionMismatch).
RoleLabel softmax_predict(const SoftmaxModel& model, const SparseVector& x);

struct TextClassifier {
  TfidfVocabulary vocabulary;
  SoftmaxModel model;

  RoleLabel predict(std::string_view text) const {
    return softmax_predict(model, tfidf_transform(vocabulary, text));
  }
};

TextClassifier fit_text_classifier(std::span<const std::string> statements,
                                   std::span<const RoleLabel> labels,
                                   std::size_t max_features,
                                   const SoftmaxConfig& config);

nlohmann::json to_json(const TfidfVocabulary& vocabulary);
TfidfVocabulary vocabulary_from_json(const nlohmann::json& json);
nlohmann::json to_json(const SoftmaxModel& model);
SoftmaxModel softmax_from_json(const nlohmann::json& json);
nlohmann::json to_json(const TextClassifier& classifier);
TextClassifier text_classifier_from_json(const nlohmann::json& json);

}  // namespace rolescope::baseline
