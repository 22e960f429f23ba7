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

// Dense binary classifier over the normalized feature vector:
//
//   y = sigmoid(W3 * relu(W2 * relu(W1 * x + b1) + b2) + b3)
//
// with y the probability of Leadership. Training is minibatch gradient
// descent on binary cross-entropy; everything is deterministic per seed.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolescope/core_domain.hpp"
#include "rolescope/dataset.hpp"
#include "rolescope/features.hpp"

namespace rolescope::mlp {

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;  // outputs x inputs, row-major
  std::vector<double> bias;     // outputs

  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out)
      : inputs(in), outputs(out), weights(in * out, 0.0), bias(out, 0.0) {}

  double& weight(std::size_t out, std::size_t in) {
    return weights[out * inputs + in];
  }
  double weight(std::size_t out, std::size_t in) const {
    return weights[out * inputs + in];
  }

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct NetworkParams {
  DenseLayer hidden1;
  DenseLayer hidden2;
  DenseLayer output;  // one unit

  std::size_t input_size() const { return hidden1.inputs; }

  // Throws Error(kInvalidArgument) on inconsistent shapes or non-finite
  // entries.
  void validate() const;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

enum class Optimizer { kSgd, kAdam };

std::string_view to_string(Optimizer optimizer);
std::optional<Optimizer> parse_optimizer(std::string_view text);

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  double learning_rate = 3e-3;
  std::size_t hidden1 = 64;
  std::size_t hidden2 = 32;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::kAdam;
  // Loss weights for {Leadership, Support}; unweighted when empty.
  std::optional<std::array<double, kBinaryRoleCount>> class_weights;
  // Only the first `active_features` inputs are used; the rest are zeroed
  // after normalization (8 reproduces the original eight-feature model).
  std::size_t active_features = kFeatureCount;

  // Throws Error(kInvalidArgument).
  void validate() const;
};

// Scaled-normal weights (std sqrt(2 / fan_in)), zero biases.
NetworkParams init(const TrainConfig& config,
                   std::size_t input_size = kFeatureCount);

// Probability in (0,1). Throws Error(kNonFiniteInput) or
// Error(kDimensionMismatch).
double forward(const NetworkParams& params, std::span<const double> x);
double forward(const NetworkParams& params, const FeatureVector& x);

// Exact d(output)/dx by backpropagation.
std::vector<double> input_gradient(const NetworkParams& params,
                                   std::span<const double> x);

struct TrainedModel {
  NetworkParams params;
  features::NormalizationRanges ranges;
  TrainConfig config;
  std::vector<double> loss_history;  // mean training loss per epoch

  // Normalized and masked network input for a raw feature vector.
  FeatureVector prepare(const FeatureVector& raw) const;
  // Network output for an already-normalized vector (mask applied here).
  double output_normalized(const FeatureVector& normalized) const;
  FeatureVector gradient_normalized(const FeatureVector& normalized) const;
  // Probability of Leadership for a raw feature vector.
  double probability(const FeatureVector& raw) const;
};

// Fits normalization on `examples`, then trains. Throws
// Error(kDegenerateTrainingSet) unless both classes are present.
TrainedModel train(std::span<const dataset::LabeledExample> examples,
                   const TrainConfig& config);

// Leadership when probability >= threshold.
BinaryRole predict(const TrainedModel& model, const FeatureVector& raw,
                   double threshold = 0.5);

nlohmann::json to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& json);
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace rolescope::mlp
