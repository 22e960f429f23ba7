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

#include "rolescope/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rolescope/error.hpp"
#include "rolescope/random.hpp"
#include "rolescope/table_io.hpp"

namespace rolescope::mlp {

namespace {

constexpr int kModelSchemaVersion = 1;

// Kept strictly inside (0,1) so the loss stays finite.
double sigmoid(double z) {
  const double y = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                            : std::exp(z) / (1.0 + std::exp(z));
  return std::clamp(y, std::numeric_limits<double>::min(),
                    std::nextafter(1.0, 0.0));
}

void check_input(const NetworkParams& params, std::span<const double> x) {
  if (x.size() != params.input_size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "network expects " + std::to_string(params.input_size()) +
                    " inputs, got " + std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFiniteInput, "non-finite network input");
    }
  }
}

void affine(const DenseLayer& layer, std::span<const double> in,
            std::span<double> out) {
  for (std::size_t o = 0; o < layer.outputs; ++o) {
    double sum = layer.bias[o];
    const double* row = layer.weights.data() + o * layer.inputs;
    for (std::size_t i = 0; i < layer.inputs; ++i) sum += row[i] * in[i];
    out[o] = sum;
  }
}

struct Activations {
  std::vector<double> z1, a1, z2, a2;
  double z3 = 0.0;
  double y = 0.0;
};

void run_forward(const NetworkParams& p, std::span<const double> x,
                 Activations& act) {
  act.z1.resize(p.hidden1.outputs);
  act.a1.resize(p.hidden1.outputs);
  act.z2.resize(p.hidden2.outputs);
  act.a2.resize(p.hidden2.outputs);
  affine(p.hidden1, x, act.z1);
  for (std::size_t i = 0; i < act.z1.size(); ++i) {
    act.a1[i] = std::max(0.0, act.z1[i]);
  }
  affine(p.hidden2, act.a1, act.z2);
  for (std::size_t i = 0; i < act.z2.size(); ++i) {
    act.a2[i] = std::max(0.0, act.z2[i]);
  }
  double z3 = 0.0;
  affine(p.output, act.a2, std::span<double>(&z3, 1));
  act.z3 = z3;
  act.y = sigmoid(z3);
}

// Backpropagates d(out)/dz3 = dz3 into parameter gradients (accumulated) and
// optionally the input gradient.
void run_backward(const NetworkParams& p, std::span<const double> x,
                  const Activations& act, double dz3, NetworkParams* grads,
                  std::vector<double>* input_grad) {
  std::vector<double> da2(p.hidden2.outputs, 0.0);
  for (std::size_t j = 0; j < p.hidden2.outputs; ++j) {
    da2[j] = p.output.weight(0, j) * dz3;
  }
  if (grads != nullptr) {
    for (std::size_t j = 0; j < p.hidden2.outputs; ++j) {
      grads->output.weight(0, j) += dz3 * act.a2[j];
    }
    grads->output.bias[0] += dz3;
  }
  std::vector<double> dz2(p.hidden2.outputs);
  for (std::size_t j = 0; j < dz2.size(); ++j) {
    dz2[j] = act.z2[j] > 0.0 ? da2[j] : 0.0;
  }
  std::vector<double> da1(p.hidden1.outputs, 0.0);
  for (std::size_t j = 0; j < p.hidden2.outputs; ++j) {
    if (dz2[j] == 0.0) continue;
    for (std::size_t i = 0; i < p.hidden1.outputs; ++i) {
      da1[i] += p.hidden2.weight(j, i) * dz2[j];
      if (grads != nullptr) grads->hidden2.weight(j, i) += dz2[j] * act.a1[i];
    }
    if (grads != nullptr) grads->hidden2.bias[j] += dz2[j];
  }
  std::vector<double> dz1(p.hidden1.outputs);
  for (std::size_t i = 0; i < dz1.size(); ++i) {
    dz1[i] = act.z1[i] > 0.0 ? da1[i] : 0.0;
  }
  if (input_grad != nullptr) input_grad->assign(p.input_size(), 0.0);
  for (std::size_t j = 0; j < p.hidden1.outputs; ++j) {
    if (dz1[j] == 0.0) continue;
    for (std::size_t i = 0; i < p.input_size(); ++i) {
      if (input_grad != nullptr) {
        (*input_grad)[i] += p.hidden1.weight(j, i) * dz1[j];
      }
      if (grads != nullptr) grads->hidden1.weight(j, i) += dz1[j] * x[i];
    }
    if (grads != nullptr) grads->hidden1.bias[j] += dz1[j];
  }
}

NetworkParams zeros_like(const NetworkParams& p) {
  NetworkParams z;
  z.hidden1 = DenseLayer(p.hidden1.inputs, p.hidden1.outputs);
  z.hidden2 = DenseLayer(p.hidden2.inputs, p.hidden2.outputs);
  z.output = DenseLayer(p.output.inputs, p.output.outputs);
  return z;
}

template <typename Fn>
void for_each_tensor(NetworkParams& a, NetworkParams& b, NetworkParams& c,
                     NetworkParams& d, Fn fn) {
  fn(a.hidden1.weights, b.hidden1.weights, c.hidden1.weights,
     d.hidden1.weights);
  fn(a.hidden1.bias, b.hidden1.bias, c.hidden1.bias, d.hidden1.bias);
  fn(a.hidden2.weights, b.hidden2.weights, c.hidden2.weights,
     d.hidden2.weights);
  fn(a.hidden2.bias, b.hidden2.bias, c.hidden2.bias, d.hidden2.bias);
  fn(a.output.weights, b.output.weights, c.output.weights, d.output.weights);
  fn(a.output.bias, b.output.bias, c.output.bias, d.output.bias);
}

nlohmann::json layer_to_json(const DenseLayer& layer) {
  return {{"inputs", layer.inputs},
          {"outputs", layer.outputs},
          {"weights", layer.weights},
          {"bias", layer.bias}};
}

DenseLayer layer_from_json(const nlohmann::json& json) {
  DenseLayer layer;
  layer.inputs = json.at("inputs").get<std::size_t>();
  layer.outputs = json.at("outputs").get<std::size_t>();
  layer.weights = json.at("weights").get<std::vector<double>>();
  layer.bias = json.at("bias").get<std::vector<double>>();
  return layer;
}

}  // namespace

std::string_view to_string(Optimizer optimizer) {
  return optimizer == Optimizer::kSgd ? "sgd" : "adam";
}

std::optional<Optimizer> parse_optimizer(std::string_view text) {
  if (text == "sgd") return Optimizer::kSgd;
  if (text == "adam") return Optimizer::kAdam;
  return std::nullopt;
}

void NetworkParams::validate() const {
  const auto check_layer = [](const DenseLayer& layer, const char* name) {
    if (layer.inputs == 0 || layer.outputs == 0 ||
        layer.weights.size() != layer.inputs * layer.outputs ||
        layer.bias.size() != layer.outputs) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("inconsistent shape in layer ") + name);
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(layer.weights.begin(), layer.weights.end(), finite) ||
        !std::all_of(layer.bias.begin(), layer.bias.end(), finite)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("non-finite parameter in layer ") + name);
    }
  };
  check_layer(hidden1, "hidden1");
  check_layer(hidden2, "hidden2");
  check_layer(output, "output");
  if (hidden2.inputs != hidden1.outputs || output.inputs != hidden2.outputs ||
      output.outputs != 1) {
    throw Error(ErrorCode::kInvalidArgument, "layer shapes do not chain");
  }
}

void TrainConfig::validate() const {
  if (epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  }
  if (batch_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "batch_size must be >= 1");
  }
  if (hidden1 < 1 || hidden2 < 1) {
    throw Error(ErrorCode::kInvalidArgument, "hidden sizes must be >= 1");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be positive");
  }
  if (active_features < 1 || active_features > kFeatureCount) {
    throw Error(ErrorCode::kInvalidArgument,
                "active_features must lie in [1, 10]");
  }
  if (class_weights) {
    for (double w : *class_weights) {
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "class weights must be positive");
      }
    }
  }
}

NetworkParams init(const TrainConfig& config, std::size_t input_size) {
  NetworkParams params;
  params.hidden1 = DenseLayer(input_size, config.hidden1);
  params.hidden2 = DenseLayer(config.hidden1, config.hidden2);
  params.output = DenseLayer(config.hidden2, 1);
  Rng rng(config.seed);
  for (DenseLayer* layer : {&params.hidden1, &params.hidden2, &params.output}) {
    const double scale = std::sqrt(2.0 / static_cast<double>(layer->inputs));
    for (double& w : layer->weights) w = scale * rng.normal();
  }
  return params;
}

double forward(const NetworkParams& params, std::span<const double> x) {
  check_input(params, x);
  Activations act;
  run_forward(params, x, act);
  return act.y;
}

double forward(const NetworkParams& params, const FeatureVector& x) {
  return forward(params, std::span<const double>(x.values));
}

std::vector<double> input_gradient(const NetworkParams& params,
                                   std::span<const double> x) {
  check_input(params, x);
  Activations act;
  run_forward(params, x, act);
  std::vector<double> grad;
  run_backward(params, x, act, act.y * (1.0 - act.y), nullptr, &grad);
  return grad;
}

FeatureVector TrainedModel::prepare(const FeatureVector& raw) const {
  FeatureVector x = features::apply_normalization(raw, ranges);
  for (std::size_t i = config.active_features; i < kFeatureCount; ++i) {
    x.values[i] = 0.0;
  }
  return x;
}

double TrainedModel::output_normalized(const FeatureVector& normalized) const {
  FeatureVector x = normalized;
  for (std::size_t i = config.active_features; i < kFeatureCount; ++i) {
    x.values[i] = 0.0;
  }
  return forward(params, x);
}

FeatureVector TrainedModel::gradient_normalized(
    const FeatureVector& normalized) const {
  FeatureVector x = normalized;
  for (std::size_t i = config.active_features; i < kFeatureCount; ++i) {
    x.values[i] = 0.0;
  }
  const auto grad = input_gradient(params, x.values);
  FeatureVector out;
  for (std::size_t i = 0; i < config.active_features; ++i) {
    out.values[i] = grad[i];
  }
  return out;
}

double TrainedModel::probability(const FeatureVector& raw) const {
  return forward(params, prepare(raw));
}

TrainedModel train(std::span<const dataset::LabeledExample> examples,
                   const TrainConfig& config) {
  config.validate();
  std::array<std::size_t, kBinaryRoleCount> counts{};
  for (const auto& e : examples) ++counts[index_of(e.label)];
  if (counts[0] == 0 || counts[1] == 0) {
    throw Error(ErrorCode::kDegenerateTrainingSet,
                "training needs both Leadership and Support examples");
  }

  TrainedModel model;
  model.config = config;
  std::vector<FeatureVector> raw;
  raw.reserve(examples.size());
  for (const auto& e : examples) raw.push_back(e.features);
  model.ranges = features::fit_normalization(raw);
  model.params = init(config);

  std::vector<FeatureVector> inputs;
  std::vector<double> targets;
  std::vector<double> weights;
  for (const auto& e : examples) {
    inputs.push_back(model.prepare(e.features));
    targets.push_back(e.label == BinaryRole::kLeadership ? 1.0 : 0.0);
    weights.push_back(config.class_weights
                          ? (*config.class_weights)[index_of(e.label)]
                          : 1.0);
  }

  NetworkParams& p = model.params;
  NetworkParams grads = zeros_like(p);
  NetworkParams first_moment = zeros_like(p);
  NetworkParams second_moment = zeros_like(p);
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEpsilon = 1e-7;
  std::size_t step = 0;

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng(derive_seed(config.seed, 1));
  Activations act;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      grads = zeros_like(p);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        const auto x = std::span<const double>(inputs[i].values);
        run_forward(p, x, act);
        const double y = targets[i];
        loss_sum -= weights[i] * (y * std::log(act.y) +
                                  (1.0 - y) * std::log(1.0 - act.y));
        run_backward(p, x, act, weights[i] * (act.y - y), &grads, nullptr);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      ++step;
      const double lr = config.learning_rate;
      const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for_each_tensor(p, grads, first_moment, second_moment,
                      [&](std::vector<double>& w, std::vector<double>& g,
                          std::vector<double>& m, std::vector<double>& v) {
                        for (std::size_t j = 0; j < w.size(); ++j) {
                          const double gj = g[j] * scale;
                          if (config.optimizer == Optimizer::kSgd) {
                            w[j] -= lr * gj;
                            continue;
                          }
                          m[j] = kBeta1 * m[j] + (1.0 - kBeta1) * gj;
                          v[j] = kBeta2 * v[j] + (1.0 - kBeta2) * gj * gj;
                          const double m_hat = m[j] / bias1;
                          const double v_hat = v[j] / bias2;
                          w[j] -= lr * m_hat / (std::sqrt(v_hat) + kEpsilon);
                        }
                      });
    }
    model.loss_history.push_back(loss_sum /
                                 static_cast<double>(examples.size()));
  }
  return model;
}

BinaryRole predict(const TrainedModel& model, const FeatureVector& raw,
                   double threshold) {
  return model.probability(raw) >= threshold ? BinaryRole::kLeadership
                                             : BinaryRole::kSupport;
}

nlohmann::json to_json(const TrainedModel& model) {
  nlohmann::json json;
  json["schema_version"] = kModelSchemaVersion;
  json["kind"] = "rolescope.dense_network";
  json["feature_names"] = kFeatureNames;
  json["activations"] = {"relu", "relu", "sigmoid"};
  json["layers"] = {layer_to_json(model.params.hidden1),
                    layer_to_json(model.params.hidden2),
                    layer_to_json(model.params.output)};
  json["normalization"] = features::to_json(model.ranges);
  const auto& c = model.config;
  json["config"] = {{"epochs", c.epochs},
                    {"batch_size", c.batch_size},
                    {"learning_rate", c.learning_rate},
                    {"hidden_sizes", {c.hidden1, c.hidden2}},
                    {"seed", c.seed},
                    {"optimizer", std::string(to_string(c.optimizer))},
                    {"loss", "binary_cross_entropy"},
                    {"active_features", c.active_features}};
  if (c.class_weights) {
    json["config"]["class_weights"] = *c.class_weights;
  } else {
    json["config"]["class_weights"] = nullptr;
  }
  json["loss_history"] = model.loss_history;
  return json;
}

TrainedModel model_from_json(const nlohmann::json& json) {
  TrainedModel model;
  try {
    if (json.at("schema_version").get<int>() != kModelSchemaVersion) {
      throw Error(ErrorCode::kFormatError, "unsupported model schema version");
    }
    const auto& layers = json.at("layers");
    if (layers.size() != 3) {
      throw Error(ErrorCode::kFormatError, "expected three layers");
    }
    model.params.hidden1 = layer_from_json(layers[0]);
    model.params.hidden2 = layer_from_json(layers[1]);
    model.params.output = layer_from_json(layers[2]);
    model.ranges = features::normalization_from_json(json.at("normalization"));
    const auto& c = json.at("config");
    model.config.epochs = c.at("epochs").get<std::size_t>();
    model.config.batch_size = c.at("batch_size").get<std::size_t>();
    model.config.learning_rate = c.at("learning_rate").get<double>();
    model.config.hidden1 = c.at("hidden_sizes").at(0).get<std::size_t>();
    model.config.hidden2 = c.at("hidden_sizes").at(1).get<std::size_t>();
    model.config.seed = c.at("seed").get<std::uint64_t>();
    const auto optimizer =
        parse_optimizer(c.at("optimizer").get<std::string>());
    if (!optimizer) throw Error(ErrorCode::kFormatError, "unknown optimizer");
    model.config.optimizer = *optimizer;
    model.config.active_features = c.at("active_features").get<std::size_t>();
    if (!c.at("class_weights").is_null()) {
      model.config.class_weights =
          c.at("class_weights").get<std::array<double, kBinaryRoleCount>>();
    }
    model.loss_history = json.at("loss_history").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError,
                std::string("invalid model file: ") + e.what());
  }
  model.params.validate();
  model.config.validate();
  if (model.params.input_size() != kFeatureCount) {
    throw Error(ErrorCode::kFormatError, "model input size must be 10");
  }
  return model;
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  write_json_file(path, to_json(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
  return model_from_json(read_json_file(path));
}

}  // namespace rolescope::mlp
