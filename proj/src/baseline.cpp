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

#include "rolescope/baseline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "rolescope/error.hpp"
#include "rolescope/random.hpp"

namespace rolescope::baseline {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (c < 0x80 && std::isalnum(c)) {
      current += static_cast<char>(std::tolower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

TfidfVocabulary tfidf_fit(std::span<const std::string> corpus,
                          std::size_t max_features) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot fit TF-IDF on no documents");
  }
  if (max_features == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_features must be >= 1");
  }
  std::map<std::string, std::pair<std::size_t, std::size_t>> stats;  // count, df
  for (const auto& doc : corpus) {
    auto tokens = tokenize(doc);
    for (const auto& t : tokens) ++stats[t].first;
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (const auto& t : tokens) ++stats[t].second;
  }
  std::vector<const std::pair<const std::string,
                              std::pair<std::size_t, std::size_t>>*>
      ranked;
  ranked.reserve(stats.size());
  for (const auto& entry : stats) ranked.push_back(&entry);
  // stats is already in lexicographic order, so a stable sort on count
  // breaks ties lexicographically.
  std::stable_sort(ranked.begin(), ranked.end(), [](auto* a, auto* b) {
    return a->second.first > b->second.first;
  });
  if (ranked.size() > max_features) ranked.resize(max_features);
  std::sort(ranked.begin(), ranked.end(),
            [](auto* a, auto* b) { return a->first < b->first; });

  TfidfVocabulary vocab;
  vocab.max_features = max_features;
  const double n = static_cast<double>(corpus.size());
  for (const auto* entry : ranked) {
    vocab.index.emplace(entry->first, vocab.terms.size());
    vocab.terms.push_back(entry->first);
    const double df = static_cast<double>(entry->second.second);
    vocab.idf.push_back(std::log((1.0 + n) / (1.0 + df)) + 1.0);
  }
  return vocab;
}

double SparseVector::norm() const {
  double sum = 0.0;
  for (const auto& [i, v] : entries) sum += v * v;
  return std::sqrt(sum);
}

SparseVector tfidf_transform(const TfidfVocabulary& vocabulary,
                             std::string_view text) {
  std::map<std::size_t, double> counts;
  for (const auto& t : tokenize(text)) {
    const auto it = vocabulary.index.find(t);
    if (it != vocabulary.index.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  v.dimension = vocabulary.size();
  for (const auto& [i, c] : counts) v.entries.emplace_back(i, c * vocabulary.idf[i]);
  const double norm = v.norm();
  if (norm > 0.0) {
    for (auto& [i, w] : v.entries) w /= norm;
  }
  return v;
}

std::array<double, kRoleCount> SoftmaxModel::scores(const SparseVector& x) const {
  if (x.dimension != dimension) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model expects dimension " + std::to_string(dimension) +
                    ", got " + std::to_string(x.dimension));
  }
  std::array<double, kRoleCount> s = bias;
  for (std::size_t k = 0; k < kRoleCount; ++k) {
    for (const auto& [i, v] : x.entries) s[k] += weights[k][i] * v;
  }
  return s;
}

SoftmaxModel softmax_train(std::span<const SparseVector> vectors,
                           std::span<const RoleLabel> labels,
                           const SoftmaxConfig& config) {
  if (vectors.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "vectors and labels differ in length");
  }
  if (vectors.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no training examples");
  }
  SoftmaxModel model;
  model.dimension = vectors.front().dimension;
  for (auto& w : model.weights) w.assign(model.dimension, 0.0);
  for (const auto& v : vectors) {
    if (v.dimension != model.dimension) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "training vectors differ in dimension");
    }
  }
  std::vector<std::size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  const double decay = 1.0 - config.learning_rate * config.l2;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (auto idx : order) {
      const auto& x = vectors[idx];
      auto s = model.scores(x);
      const double top = *std::max_element(s.begin(), s.end());
      double z = 0.0;
      for (auto& v : s) {
        v = std::exp(v - top);
        z += v;
      }
      for (std::size_t k = 0; k < kRoleCount; ++k) {
        const double target = index_of(labels[idx]) == k ? 1.0 : 0.0;
        const double g = s[k] / z - target;
        auto& w = model.weights[k];
        if (config.l2 > 0.0) {
          for (const auto& [i, v] : x.entries) w[i] *= decay;
        }
        for (const auto& [i, v] : x.entries) w[i] -= config.learning_rate * g * v;
        model.bias[k] -= config.learning_rate * g;
      }
    }
  }
  return model;
}

RoleLabel softmax_predict(const SoftmaxModel& model, const SparseVector& x) {
  const auto s = model.scores(x);
  std::size_t best = 0;
  for (std::size_t k = 1; k < kRoleCount; ++k) {
    if (s[k] > s[best]) best = k;
  }
  return static_cast<RoleLabel>(best);
}

TextClassifier fit_text_classifier(std::span<const std::string> statements,
                                   std::span<const RoleLabel> labels,
                                   std::size_t max_features,
                                   const SoftmaxConfig& config) {
  TextClassifier c;
  c.vocabulary = tfidf_fit(statements, max_features);
  std::vector<SparseVector> vectors;
  vectors.reserve(statements.size());
  for (const auto& s : statements) vectors.push_back(tfidf_transform(c.vocabulary, s));
  c.model = softmax_train(vectors, labels, config);
  return c;
}

nlohmann::json to_json(const TfidfVocabulary& vocabulary) {
  return {{"schema_version", 1},
          {"max_features", vocabulary.max_features},
          {"terms", vocabulary.terms},
          {"idf", vocabulary.idf}};
}

TfidfVocabulary vocabulary_from_json(const nlohmann::json& json) {
  TfidfVocabulary v;
  v.max_features = json.at("max_features").get<std::size_t>();
  v.terms = json.at("terms").get<std::vector<std::string>>();
  v.idf = json.at("idf").get<std::vector<double>>();
  if (v.terms.size() != v.idf.size() || v.terms.size() > v.max_features) {
    throw Error(ErrorCode::kFormatError, "inconsistent vocabulary");
  }
  for (std::size_t i = 0; i < v.terms.size(); ++i) v.index.emplace(v.terms[i], i);
  return v;
}

nlohmann::json to_json(const SoftmaxModel& model) {
  nlohmann::json weights = nlohmann::json::object();
  nlohmann::json bias = nlohmann::json::object();
  for (const auto role : kAllRoles) {
    weights[std::string(to_string(role))] = model.weights[index_of(role)];
    bias[std::string(to_string(role))] = model.bias[index_of(role)];
  }
  return {{"schema_version", 1},
          {"dimension", model.dimension},
          {"weights", weights},
          {"bias", bias}};
}

SoftmaxModel softmax_from_json(const nlohmann::json& json) {
  SoftmaxModel m;
  m.dimension = json.at("dimension").get<std::size_t>();
  for (const auto role : kAllRoles) {
    const std::string key(to_string(role));
    m.weights[index_of(role)] = json.at("weights").at(key).get<std::vector<double>>();
    m.bias[index_of(role)] = json.at("bias").at(key).get<double>();
    if (m.weights[index_of(role)].size() != m.dimension) {
      throw Error(ErrorCode::kFormatError, "weight row has wrong length");
    }
  }
  return m;
}

nlohmann::json to_json(const TextClassifier& classifier) {
  return {{"schema_version", 1},
          {"vocabulary", to_json(classifier.vocabulary)},
          {"model", to_json(classifier.model)}};
}

TextClassifier text_classifier_from_json(const nlohmann::json& json) {
  TextClassifier c;
  c.vocabulary = vocabulary_from_json(json.at("vocabulary"));
  c.model = softmax_from_json(json.at("model"));
  if (c.model.dimension != c.vocabulary.size()) {
    throw Error(ErrorCode::kFormatError, "model and vocabulary disagree");
  }
  return c;
}

}  // namespace rolescope::baseline
