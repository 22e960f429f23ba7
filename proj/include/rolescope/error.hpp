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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rolescope {

enum class ErrorCode {
  kInvalidArgument,
  kFileUnreadable,
  kFormatError,
  kMissingColumn,
  kInsufficientPapers,
  kNonPositiveInput,
  kInvalidTaxonomy,
  kNoKeywordMatch,
  kEmptyStatement,
  kUnparseableResponse,
  kTransportFailure,
  kNotFound,
  kRateLimited,
  kOfflineCacheMiss,
  kMalformedResponse,
  kNoMatch,
  kAmbiguousMatch,
  kEmptyProfile,
  kUnfittedRanges,
  kClassTooSmall,
  kNonFiniteInput,
  kDegenerateTrainingSet,
  kEmptyCorpus,
  kDimensionMismatch,
  kTooManyFeatures,
  kEmptyBaselines,
  kEmptyInput,
  kLengthMismatch,
  kEmptyTeam,
  kConfigError,
  kUpstreamArtifactMissing,
};

// Stable identifier used in reject files, label files and CLI messages.
std::string_view to_string(ErrorCode code);
std::optional<ErrorCode> parse_error_code(std::string_view text);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kFormatError,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MissingColumn : public Error {
 public:
  explicit MissingColumn(std::string name)
      : Error(ErrorCode::kMissingColumn, "missing column: " + name),
        name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class InsufficientPapers : public Error {
 public:
  InsufficientPapers(std::string journal, std::size_t available,
                     std::size_t requested)
      : Error(ErrorCode::kInsufficientPapers,
              journal + ": " + std::to_string(available) +
                  " eligible papers, " + std::to_string(requested) +
                  " requested"),
        journal_(std::move(journal)),
        available_(available),
        requested_(requested) {}

  const std::string& journal() const noexcept { return journal_; }
  std::size_t available() const noexcept { return available_; }
  std::size_t requested() const noexcept { return requested_; }

 private:
  std::string journal_;
  std::size_t available_;
  std::size_t requested_;
};

class AmbiguousMatch : public Error {
 public:
  AmbiguousMatch(const std::string& name, std::vector<std::string> candidates);

  const std::vector<std::string>& candidates() const noexcept {
    return candidates_;
  }

 private:
  std::vector<std::string> candidates_;
};

class MalformedResponse : public Error {
 public:
  MalformedResponse(std::string field, const std::string& context)
      : Error(ErrorCode::kMalformedResponse,
              context + ": missing or invalid field '" + field + "'"),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class UpstreamArtifactMissing : public Error {
 public:
  UpstreamArtifactMissing(std::string stage, const std::string& path)
      : Error(ErrorCode::kUpstreamArtifactMissing,
              "missing " + path + " (run `" + stage + "` first)"),
        stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace rolescope
