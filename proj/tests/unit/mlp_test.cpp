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

#include <cmath>
#include <filesystem>
#include <limits>

#include "rolescope/error.hpp"
#include "rolescope/metrics.hpp"
#include "rolescope/mlp.hpp"
#include "rolescope/random.hpp"

namespace rolescope::mlp {
namespace {

NetworkParams chain(double w1, double b1, double w2, double b2, double w3, double b3) {
  NetworkParams p;
  p.hidden1 = DenseLayer(kFeatureCount, 1);
  p.hidden2 = DenseLayer(1, 1);
  p.output = DenseLayer(1, 1);
  p.hidden1.weight(0, 0) = w1;
  p.hidden1.bias[0] = b1;
  p.hidden2.weight(0, 0) = w2;
  p.hidden2.bias[0] = b2;
  p.output.weight(0, 0) = w3;
  p.output.bias[0] = b3;
  return p;
}

std::vector<double> point(double x0) {
  std::vector<double> x(kFeatureCount, 0.3);
  x[0] = x0;
  return x;
}

TEST(Init, DeterministicScaledNormal) {
  TrainConfig c;
  c.seed = 11;
  const auto a = init(c);
  EXPECT_EQ(a, init(c));
  c.seed = 12;
  EXPECT_NE(a.hidden1.weights, init(c).hidden1.weights);
  for (double b : a.hidden1.bias) EXPECT_EQ(b, 0.0);
  EXPECT_EQ(a.hidden1.outputs, 64u);
  EXPECT_EQ(a.hidden2.outputs, 32u);
  EXPECT_EQ(a.output.outputs, 1u);
  EXPECT_NO_THROW(a.validate());
}

TEST(Forward, ZeroNetworkIsHalf) {
  TrainConfig c;
  auto p = init(c);
  for (auto* layer : {&p.hidden1, &p.hidden2, &p.output}) {
    std::fill(layer->weights.begin(), layer->weights.end(), 0.0);
  }
  EXPECT_EQ(forward(p, point(0.7)), 0.5);
}

TEST(Forward, HandComputedChain) {
  // z1 = 2*0.5+0.1 = 1.1, z2 = 0.5*1.1-0.05 = 0.5, z3 = 3*0.5-1 = 0.5.
  const auto p = chain(2.0, 0.1, 0.5, -0.05, 3.0, -1.0);
  EXPECT_NEAR(forward(p, point(0.5)), 1.0 / (1.0 + std::exp(-0.5)), 1e-15);
}

TEST(Forward, Errors) {
  const auto p = chain(1, 0, 1, 0, 1, 0);
  auto x = point(0.1);
  x[3] = std::numeric_limits<double>::quiet_NaN();
  try {
    forward(p, x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteInput);
  }
  EXPECT_THROW(forward(p, std::vector<double>(3, 0.0)), Error);
  EXPECT_THROW(input_gradient(p, x), Error);
}

TEST(Forward, StrictlyInsideUnitInterval) {
  Rng rng(5);
  TrainConfig c;
  for (int i = 0; i < 200; ++i) {
    c.seed = rng.next();
    const auto p = init(c);
    std::vector<double> x(kFeatureCount);
    for (auto& v : x) v = rng.normal();
    const double y = forward(p, x);
    EXPECT_GT(y, 0.0);
    EXPECT_LT(y, 1.0);
  }
}

TEST(InputGradient, HandDerivedChain) {
  const auto p = chain(2.0, 0.1, 0.5, -0.05, 3.0, -1.0);
  const auto g = input_gradient(p, point(0.5));
  const double s = 1.0 / (1.0 + std::exp(-0.5));
  EXPECT_NEAR(g[0], s * (1 - s) * 3.0 * 0.5 * 2.0, 1e-15);
  for (std::size_t i = 1; i < kFeatureCount; ++i) EXPECT_EQ(g[i], 0.0);
}

TEST(InputGradient, DeadReluIsZero) {
  const auto p = chain(1.0, -10.0, 1.0, 0.0, 1.0, 0.0);
  for (double v : input_gradient(p, point(0.5))) EXPECT_EQ(v, 0.0);
}

TEST(InputGradient, MatchesFiniteDifferences) {
  Rng rng(77);
  for (int draw = 0; draw < 50; ++draw) {
    TrainConfig c;
    c.hidden1 = 3 + rng.below(10);
    c.hidden2 = 3 + rng.below(10);
    c.seed = rng.next();
    const auto p = init(c);
    std::vector<double> x(kFeatureCount);
    for (auto& v : x) v = rng.uniform();
    const auto g = input_gradient(p, x);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      auto up = x, down = x;
      up[i] += 1e-5;
      down[i] -= 1e-5;
      const double fd = (forward(p, up) - forward(p, down)) / 2e-5;
      EXPECT_NEAR(g[i], fd, 1e-4 * std::max({std::abs(g[i]), std::abs(fd), 1e-6}));
    }
  }
}

std::vector<dataset::LabeledExample> separable(std::uint64_t seed, std::size_t n = 200) {
  Rng rng(seed);
  std::vector<dataset::LabeledExample> rows(n);
  for (auto& e : rows) {
    for (std::size_t k = 0; k < kFeatureCount; ++k) e.features.values[k] = rng.uniform() * (k + 1);
    e.label = e.features[Feature::kProbabilityOfLeading] > 1.5 ? BinaryRole::kLeadership
                                                                : BinaryRole::kSupport;
  }
  return rows;
}

TEST(Train, SeparableSetReachesHighF1) {
  const auto rows = separable(3);
  TrainConfig c;
  c.seed = 8;
  const auto model = train(rows, c);
  std::vector<BinaryRole> gold, pred;
  for (const auto& e : rows) {
    gold.push_back(e.label);
    pred.push_back(predict(model, e.features));
  }
  EXPECT_GE(metrics::classification_report(gold, pred).per_class[0].f1, 0.95);
  ASSERT_EQ(model.loss_history.size(), c.epochs);
  std::size_t non_increasing = 0;
  for (std::size_t i = 1; i < model.loss_history.size(); ++i) {
    non_increasing += model.loss_history[i] <= model.loss_history[i - 1];
  }
  EXPECT_GE(double(non_increasing), 0.8 * double(model.loss_history.size() - 1));
}

TEST(Train, BitIdenticalForSameSeed) {
  const auto rows = separable(4);
  TrainConfig c;
  c.seed = 2;
  const auto a = train(rows, c);
  const auto b = train(rows, c);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.loss_history, b.loss_history);
  c.optimizer = Optimizer::kSgd;
  EXPECT_EQ(train(rows, c).params, train(rows, c).params);
}

TEST(Train, Errors) {
  TrainConfig c;
  c.epochs = 0;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_THROW(train(separable(1), c), Error);
  auto rows = separable(1);
  for (auto& e : rows) e.label = BinaryRole::kSupport;
  try {
    train(rows, TrainConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateTrainingSet);
  }
  TrainConfig bad;
  bad.active_features = 11;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Train, MaskedFeaturesHaveNoEffect) {
  auto rows = separable(6);
  TrainConfig c;
  c.active_features = 8;
  const auto model = train(rows, c);
  auto x = rows[0].features;
  const double before = model.probability(x);
  x.values[8] = 1e6;
  x.values[9] = -3.0;
  EXPECT_EQ(model.probability(x), before);
}

TrainedModel constant_model(double output_bias) {
  TrainedModel m;
  m.params = chain(0, 0, 0, 0, 0, output_bias);
  m.ranges.fitted = true;
  m.ranges.max.fill(1.0);
  return m;
}

TEST(Predict, ThresholdConvention) {
  EXPECT_EQ(predict(constant_model(0.0), FeatureVector{}), BinaryRole::kLeadership);
  const auto low = constant_model(std::log(0.49 / 0.51));
  EXPECT_NEAR(low.probability(FeatureVector{}), 0.49, 1e-12);
  EXPECT_EQ(predict(low, FeatureVector{}), BinaryRole::kSupport);
  EXPECT_EQ(predict(low, FeatureVector{}, 0.4), BinaryRole::kLeadership);
}

TEST(Serialization, RoundTrip) {
  TrainConfig c;
  c.hidden1 = 5;
  c.hidden2 = 4;
  c.epochs = 3;
  const auto model = train(separable(9, 40), c);
  const auto path = std::filesystem::temp_directory_path() / "rolescope_model.json";
  save_model(path, model);
  const auto back = load_model(path);
  EXPECT_EQ(back.params, model.params);
  EXPECT_EQ(back.loss_history, model.loss_history);
  EXPECT_EQ(back.ranges.min, model.ranges.min);
  EXPECT_EQ(back.config.hidden1, 5u);
  EXPECT_EQ(to_json(back).dump(), to_json(model).dump());
  std::filesystem::remove(path);
  auto json = to_json(model);
  json["layers"][0]["weights"].erase(0);
  EXPECT_THROW(model_from_json(json), std::exception);
}

TEST(Optimizer, Names) {
  EXPECT_EQ(parse_optimizer(to_string(Optimizer::kSgd)), Optimizer::kSgd);
  EXPECT_EQ(parse_optimizer("adam"), Optimizer::kAdam);
  EXPECT_FALSE(parse_optimizer("rmsprop").has_value());
}

}  // namespace
}  // namespace rolescope::mlp
