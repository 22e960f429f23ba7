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

#include "rolescope/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "fmt/format.h"
#include "rolescope/error.hpp"
#include "rolescope/random.hpp"
#include "rolescope/table_io.hpp"
#include "rolescope/text_util.hpp"

namespace rolescope::explain {

std::vector<double> exact_shapley_values(const ScalarFn& model_fn,
                                         std::span<const double> x,
                                         std::span<const double> baseline) {
  const std::size_t m = x.size();
  if (m > kMaxExactFeatures) {
    throw Error(ErrorCode::kTooManyFeatures,
                "exact enumeration supports at most 16 features, got " +
                    std::to_string(m));
  }
  if (baseline.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "x and baseline differ in dimension");
  }
  const std::size_t subsets = std::size_t{1} << m;
  std::vector<double> value(subsets);
  std::vector<double> point(m);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    for (std::size_t i = 0; i < m; ++i) {
      point[i] = (mask >> i) & 1U ? x[i] : baseline[i];
    }
    value[mask] = model_fn(point);
  }
  // weight[s] = s! (m - s - 1)! / m!
  std::vector<double> factorial(m + 1, 1.0);
  for (std::size_t k = 1; k <= m; ++k) {
    factorial[k] = factorial[k - 1] * static_cast<double>(k);
  }
  std::vector<double> weight(m == 0 ? 0 : m);
  for (std::size_t s = 0; s < m; ++s) {
    weight[s] = factorial[s] * factorial[m - s - 1] / factorial[m];
  }
  std::vector<double> phi(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double sum = 0.0;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      sum += weight[size] * (value[mask | bit] - value[mask]);
    }
    phi[i] = sum;
  }
  return phi;
}

Attribution exact_shapley(const ModelFn& model_fn, const FeatureVector& x,
                          const FeatureVector& baseline) {
  const ScalarFn fn = [&](std::span<const double> point) {
    FeatureVector v;
    std::copy(point.begin(), point.end(), v.values.begin());
    return model_fn(v);
  };
  const auto phi = exact_shapley_values(fn, x.values, baseline.values);
  Attribution a;
  std::copy(phi.begin(), phi.end(), a.phi.begin());
  a.base_value = model_fn(baseline);
  a.prediction = model_fn(x);
  return a;
}

Attribution gradient_shap(const DifferentiableModel& model,
                          const FeatureVector& x,
                          std::span<const FeatureVector> baselines,
                          std::size_t n_samples, std::uint64_t seed) {
  if (baselines.empty()) {
    throw Error(ErrorCode::kEmptyBaselines, "gradient_shap needs a baseline");
  }
  if (n_samples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_samples must be >= 1");
  }
  Rng rng(seed);
  std::vector<std::size_t> cycle(baselines.size());
  std::iota(cycle.begin(), cycle.end(), 0);
  std::size_t position = cycle.size();

  std::array<double, kFeatureCount> sum{};
  FeatureVector point;
  for (std::size_t s = 0; s < n_samples; ++s) {
    if (position == cycle.size()) {
      rng.shuffle(std::span<std::size_t>(cycle));
      position = 0;
    }
    const FeatureVector& b = baselines[cycle[position++]];
    const double alpha = rng.uniform_open();
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      point.values[i] = b.values[i] + alpha * (x.values[i] - b.values[i]);
    }
    const FeatureVector grad = model.gradient(point);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      sum[i] += (x.values[i] - b.values[i]) * grad.values[i];
    }
  }
  Attribution a;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    a.phi[i] = sum[i] / static_cast<double>(n_samples);
  }
  double base = 0.0;
  for (const auto& b : baselines) base += model.value(b);
  a.base_value = base / static_cast<double>(baselines.size());
  a.prediction = model.value(x);
  return a;
}

Attribution gradient_shap(const mlp::TrainedModel& model,
                          const FeatureVector& x_normalized,
                          std::span<const FeatureVector> baselines,
                          std::size_t n_samples, std::uint64_t seed) {
  return gradient_shap(NetworkModel(model), x_normalized, baselines, n_samples,
                       seed);
}

std::vector<FeatureVector> default_baselines(
    const mlp::TrainedModel& model,
    std::span<const FeatureVector> training_raw, std::size_t count,
    std::uint64_t seed) {
  std::vector<FeatureVector> baselines;
  baselines.emplace_back();
  std::vector<std::size_t> indices(training_raw.size());
  std::iota(indices.begin(), indices.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(indices));
  const std::size_t take = std::min(count, indices.size());
  for (std::size_t k = 0; k < take; ++k) {
    baselines.push_back(model.prepare(training_raw[indices[k]]));
  }
  return baselines;
}

std::vector<SummaryRow> shap_summary(
    std::span<const Attribution> attributions) {
  if (attributions.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no attributions to summarize");
  }
  const double n = static_cast<double>(attributions.size());
  std::vector<SummaryRow> rows;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    SummaryRow row;
    row.feature = i;
    row.name = std::string(kFeatureNames[i]);
    double abs_sum = 0.0;
    double sum = 0.0;
    double sign_sum = 0.0;
    for (const auto& a : attributions) {
      abs_sum += std::abs(a.phi[i]);
      sum += a.phi[i];
      sign_sum += (a.phi[i] > 0.0) - (a.phi[i] < 0.0);
    }
    row.mean_abs = abs_sum / n;
    row.mean = sum / n;
    row.sign_consistency = std::abs(sign_sum) / n;
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SummaryRow& a, const SummaryRow& b) {
                     return a.mean_abs > b.mean_abs;
                   });
  return rows;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  Table table;
  table.header = {"rank", "feature", "mean_abs_phi", "mean_phi",
                  "sign_consistency"};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    table.rows.push_back({std::to_string(r + 1), rows[r].name,
                          text::format_double(rows[r].mean_abs),
                          text::format_double(rows[r].mean),
                          text::format_double(rows[r].sign_consistency)});
  }
  return format_table(table);
}

std::string summary_svg(std::span<const SummaryRow> rows) {
  constexpr int kBarHeight = 22;
  constexpr int kLabelWidth = 290;
  constexpr int kBarWidth = 360;
  const int height = static_cast<int>(rows.size()) * kBarHeight + 50;
  double top = 0.0;
  for (const auto& r : rows) top = std::max(top, r.mean_abs);
  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      kLabelWidth + kBarWidth + 90, height);
  svg += fmt::format(
      "<text x=\"{}\" y=\"18\" font-size=\"14\">mean |SHAP value|</text>\n",
      kLabelWidth);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int y = 30 + static_cast<int>(i) * kBarHeight;
    const double width = top > 0.0 ? rows[i].mean_abs / top * kBarWidth : 0.0;
    const char* colour = rows[i].mean >= 0.0 ? "#d6604d" : "#4393c3";
    svg += fmt::format(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
        kLabelWidth - 8, y + 15, rows[i].name);
    svg += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{:.2f}\" height=\"{}\" "
        "fill=\"{}\"/>\n",
        kLabelWidth, y + 3, width, kBarHeight - 6, colour);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{}\">{:.4f}</text>\n",
                       kLabelWidth + width + 6, y + 15, rows[i].mean_abs);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace rolescope::explain
