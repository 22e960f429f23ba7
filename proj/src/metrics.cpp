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

#include "rolescope/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "fmt/format.h"
#include "rolescope/error.hpp"

namespace rolescope::metrics {

double ClassificationReport::accuracy() const {
  if (total() == 0) return 0.0;
  std::size_t trace = 0;
  for (std::size_t i = 0; i < confusion.size(); ++i) trace += confusion[i][i];
  return static_cast<double>(trace) / static_cast<double>(total());
}

nlohmann::json ClassificationReport::to_json() const {
  nlohmann::json json;
  json["schema_version"] = 1;
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t i = 0; i < class_names.size(); ++i) {
    classes.push_back({{"class", class_names[i]},
                       {"precision", per_class[i].precision},
                       {"recall", per_class[i].recall},
                       {"f1", per_class[i].f1},
                       {"support", per_class[i].support}});
  }
  json["classes"] = classes;
  json["macro"] = {{"precision", macro.precision},
                   {"recall", macro.recall},
                   {"f1", macro.f1}};
  json["accuracy"] = accuracy();
  json["total"] = total();
  json["confusion"] = confusion;
  json["zero_support_classes"] = zero_support_classes;
  return json;
}

std::string ClassificationReport::to_text() const {
  std::size_t width = 10;
  for (const auto& name : class_names) width = std::max(width, name.size());
  std::string out = fmt::format("{:<{}}  {:>9}  {:>9}  {:>9}  {:>7}\n", "class",
                                width, "precision", "recall", "f1", "support");
  for (std::size_t i = 0; i < class_names.size(); ++i) {
    const auto& s = per_class[i];
    out += fmt::format("{:<{}}  {:>9.3f}  {:>9.3f}  {:>9.3f}  {:>7}\n",
                       class_names[i], width, s.precision, s.recall, s.f1,
                       s.support);
  }
  out += fmt::format("{:<{}}  {:>9.3f}  {:>9.3f}  {:>9.3f}  {:>7}\n",
                     "Macro Avg.", width, macro.precision, macro.recall,
                     macro.f1, macro.support);
  out += fmt::format("accuracy {:.3f}\n", accuracy());
  for (const auto& name : zero_support_classes) {
    out += fmt::format("warning: no gold examples for class {}\n", name);
  }
  return out;
}

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  if (sum <= 0.0) return 0.0;
  return 2.0 * precision * recall / sum;
}

double macro_f1(std::span<const double> per_class_f1) {
  if (per_class_f1.empty()) {
    throw Error(ErrorCode::kEmptyInput, "macro_f1 of no classes");
  }
  return std::accumulate(per_class_f1.begin(), per_class_f1.end(), 0.0) /
         static_cast<double>(per_class_f1.size());
}

ClassificationReport classification_report(
    std::span<const std::size_t> gold, std::span<const std::size_t> predicted,
    std::vector<std::string> class_names) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} gold labels vs {} predictions", gold.size(),
                            predicted.size()));
  }
  if (gold.empty()) {
    throw Error(ErrorCode::kEmptyInput, "classification report of no labels");
  }
  const std::size_t k = class_names.size();
  ClassificationReport report;
  report.class_names = std::move(class_names);
  report.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= k || predicted[i] >= k) {
      throw Error(ErrorCode::kInvalidArgument, "class index out of range");
    }
    ++report.confusion[gold[i]][predicted[i]];
  }
  std::vector<double> precisions;
  std::vector<double> recalls;
  std::vector<double> f1s;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t tp = report.confusion[c][c];
    std::size_t row = 0;
    std::size_t column = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += report.confusion[c][j];
      column += report.confusion[j][c];
    }
    ClassScores scores;
    scores.support = row;
    scores.precision =
        column == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(column);
    scores.recall =
        row == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(row);
    scores.f1 = f1_score(scores.precision, scores.recall);
    if (row == 0) report.zero_support_classes.push_back(report.class_names[c]);
    report.per_class.push_back(scores);
    precisions.push_back(scores.precision);
    recalls.push_back(scores.recall);
    f1s.push_back(scores.f1);
  }
  report.macro.precision = macro_f1(precisions);
  report.macro.recall = macro_f1(recalls);
  report.macro.f1 = macro_f1(f1s);
  report.macro.support = gold.size();
  return report;
}

ClassificationReport classification_report(
    std::span<const RoleLabel> gold, std::span<const RoleLabel> predicted) {
  std::vector<std::size_t> g;
  std::vector<std::size_t> p;
  for (auto r : gold) g.push_back(index_of(r));
  for (auto r : predicted) p.push_back(index_of(r));
  std::vector<std::string> names;
  for (auto r : kAllRoles) names.emplace_back(display_name(r));
  return classification_report(g, p, std::move(names));
}

ClassificationReport classification_report(
    std::span<const BinaryRole> gold, std::span<const BinaryRole> predicted) {
  std::vector<std::size_t> g;
  std::vector<std::size_t> p;
  for (auto r : gold) g.push_back(index_of(r));
  for (auto r : predicted) p.push_back(index_of(r));
  return classification_report(
      g, p, {std::string(to_string(BinaryRole::kLeadership)),
             std::string(to_string(BinaryRole::kSupport))});
}

RoleCounts label_distribution(std::span<const RoleLabel> labels) {
  RoleCounts counts{};
  for (auto r : labels) ++counts[index_of(r)];
  return counts;
}

double l_ratio(std::span<const RoleLabel> team_labels) {
  if (team_labels.empty()) {
    throw Error(ErrorCode::kEmptyTeam, "L-ratio of an empty team");
  }
  const auto leaders = std::count(team_labels.begin(), team_labels.end(),
                                  RoleLabel::kLeadership);
  return static_cast<double>(leaders) /
         static_cast<double>(team_labels.size());
}

}  // namespace rolescope::metrics
