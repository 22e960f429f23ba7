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

#include "rolescope/error.hpp"

namespace rolescope {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kFileUnreadable: return "FileUnreadable";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kInsufficientPapers: return "InsufficientPapers";
    case ErrorCode::kNonPositiveInput: return "NonPositiveInput";
    case ErrorCode::kInvalidTaxonomy: return "InvalidTaxonomy";
    case ErrorCode::kNoKeywordMatch: return "NoKeywordMatch";
    case ErrorCode::kEmptyStatement: return "EmptyStatement";
    case ErrorCode::kUnparseableResponse: return "UnparseableResponse";
    case ErrorCode::kTransportFailure: return "TransportFailure";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kOfflineCacheMiss: return "OfflineCacheMiss";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kNoMatch: return "NoMatch";
    case ErrorCode::kAmbiguousMatch: return "AmbiguousMatch";
    case ErrorCode::kEmptyProfile: return "EmptyProfile";
    case ErrorCode::kUnfittedRanges: return "UnfittedRanges";
    case ErrorCode::kClassTooSmall: return "ClassTooSmall";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kDegenerateTrainingSet: return "DegenerateTrainingSet";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooManyFeatures: return "TooManyFeatures";
    case ErrorCode::kEmptyBaselines: return "EmptyBaselines";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyTeam: return "EmptyTeam";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kUpstreamArtifactMissing: return "UpstreamArtifactMissing";
  }
  return "Unknown";
}

namespace {

std::string ambiguous_message(const std::string& name,
                              const std::vector<std::string>& candidates) {
  std::string message = "ambiguous match for '" + name + "':";
  for (const auto& c : candidates) message += " " + c;
  return message;
}

}  // namespace

std::optional<ErrorCode> parse_error_code(std::string_view text) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::kUpstreamArtifactMissing);
       ++c) {
    const auto code = static_cast<ErrorCode>(c);
    if (to_string(code) == text) return code;
  }
  return std::nullopt;
}

AmbiguousMatch::AmbiguousMatch(const std::string& name,
                               std::vector<std::string> candidates)
    : Error(ErrorCode::kAmbiguousMatch, ambiguous_message(name, candidates)),
      candidates_(std::move(candidates)) {}

}  // namespace rolescope
