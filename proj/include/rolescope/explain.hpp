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

// Shapley attributions for the network's Leadership probability.
//
// A coalition S is evaluated on the hybrid point that takes the coordinates
// in S from x and the rest from a baseline. exact_shapley enumerates every
// coalition; gradient_shap is the expected-gradients sampling estimator,
// which averages (x - b) * grad f(b + alpha (x - b)) over random baselines b
// and alpha ~ U(0,1).

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rolescope/core_domain.hpp"
#include "rolescope/mlp.hpp"

namespace rolescope::explain {

inline constexpr std::size_t kMaxExactFeatures = 16;

struct Attribution {
  std::array<double, kFeatureCount> phi{};
  double base_value = 0.0;
  double prediction = 0.0;
};

using ScalarFn = std::function<double(std::span<const double>)>;

// Dimension-generic enumeration returning phi. Throws
// Error(kTooManyFeatures) above kMaxExactFeatures, Error(kDimensionMismatch)
// if x and baseline differ in size.
std::vector<double> exact_shapley_values(const ScalarFn& model_fn,
                                         std::span<const double> x,
                                         std::span<const double> baseline);

using ModelFn = std::function<double(const FeatureVector&)>;

Attribution exact_shapley(const ModelFn& model_fn, const FeatureVector& x,
                          const FeatureVector& baseline);

// A model that exposes its value and input gradient.
class DifferentiableModel {
 public:
  virtual ~DifferentiableModel() = default;
  virtual double value(const FeatureVector& x) const = 0;
  virtual FeatureVector gradient(const FeatureVector& x) const = 0;
};

// Explains a trained network in its normalized input space.
class NetworkModel final : public DifferentiableModel {
 public:
  explicit NetworkModel(const mlp::TrainedModel& model) : model_(model) {}
  double value(const FeatureVector& x) const override {
    return model_.output_normalized(x);
  }
  FeatureVector gradient(const FeatureVector& x) const override {
    return model_.gradient_normalized(x);
  }

 private:
  const mlp::TrainedModel& model_;
};

// Baselines are drawn from a reshuffled cycle over `baselines`, so each is
// used equally often whenever n_samples is a multiple of their count.
// base_value is the mean model output over the baselines. Throws
// Error(kEmptyBaselines) or Error(kInvalidArgument) for n_samples == 0.
Attribution gradient_shap(const DifferentiableModel& model,
                          const FeatureVector& x,
                          std::span<const FeatureVector> baselines,
                          std::size_t n_samples, std::uint64_t seed);

Attribution gradient_shap(const mlp::TrainedModel& model,
                          const FeatureVector& x_normalized,
                          std::span<const FeatureVector> baselines,
                          std::size_t n_samples, std::uint64_t seed);

// The all-zero normalized vector followed by up to `count` training rows
// (normalized) drawn without replacement with the given seed.
std::vector<FeatureVector> default_baselines(
    const mlp::TrainedModel& model,
    std::span<const FeatureVector> training_raw, std::size_t count,
    std::uint64_t seed);

struct SummaryRow {
  std::size_t feature = 0;
  std::string name;
  double mean_abs = 0.0;
  double mean = 0.0;
  // |sum of sign(phi)| / n: 1 when every attribution pushes the same way.
  double sign_consistency = 0.0;
};

// Sorted by mean |phi| descending; ties keep feature index order. Throws
// Error(kEmptyInput).
std::vector<SummaryRow> shap_summary(std::span<const Attribution> attributions);

std::string summary_csv(std::span<const SummaryRow> rows);
std::string summary_svg(std::span<const SummaryRow> rows);

}  // namespace rolescope::explain
