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

// Per-class precision/recall/F1 with macro averages, label distributions,
// and the Leadership ratio of a team.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolescope/core_domain.hpp"

namespace rolescope::metrics {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ClassificationReport {
  std::vector<std::string> class_names;
  std::vector<ClassScores> per_class;
  ClassScores macro;  // support = total examples
  // confusion[true][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  // Classes with no gold examples; they contribute 0 to the macro averages.
  std::vector<std::string> zero_support_classes;

  std::size_t total() const { return macro.support; }
  // trace(confusion) / total
  double accuracy() const;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

// 2PR/(P+R), or 0 when P+R is 0.
double f1_score(double precision, double recall);

// Unweighted mean of the per-class F1 values. Throws Error(kEmptyInput).
double macro_f1(std::span<const double> per_class_f1);

// Class indices in [0, class_names.size()). Throws Error(kLengthMismatch),
// Error(kEmptyInput), or Error(kInvalidArgument) for an index out of range.
ClassificationReport classification_report(
    std::span<const std::size_t> gold, std::span<const std::size_t> predicted,
    std::vector<std::string> class_names);

ClassificationReport classification_report(std::span<const RoleLabel> gold,
                                           std::span<const RoleLabel> predicted);
ClassificationReport classification_report(
    std::span<const BinaryRole> gold, std::span<const BinaryRole> predicted);

using RoleCounts = std::array<std::size_t, kRoleCount>;  // indexed by index_of

RoleCounts label_distribution(std::span<const RoleLabel> labels);

// Fraction of the team labeled Leadership. Throws Error(kEmptyTeam).
double l_ratio(std::span<const RoleLabel> team_labels);

}  // namespace rolescope::metrics
