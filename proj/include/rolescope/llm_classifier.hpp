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

// Few-shot role classification through a chat-completion backend.

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rolescope/core_domain.hpp"
#include "rolescope/error.hpp"
#include "rolescope/rule_classifier.hpp"

namespace rolescope::llm {

struct FewShotExample {
  std::string statement;
  RoleLabel role = RoleLabel::kLeadership;
};

struct PromptTemplate {
  std::string role_definitions;
  std::vector<FewShotExample> few_shot_examples;
  std::string instruction;
  // Upper bound on the rendered prompt length in bytes.
  std::size_t max_chars = 8000;

  // Six examples, two per role.
  static PromptTemplate defaults();

  // Throws Error(kInvalidArgument) unless every role has an example.
  void validate() const;
};

inline constexpr std::string_view kTruncationMarker = " [truncated]";

// Definitions, the examples in order, the instruction, then the target
// statement. A statement that would push the prompt past max_chars is cut
// and suffixed with kTruncationMarker. Throws Error(kEmptyStatement).
std::string build_prompt(const ContributionRecord& record,
                         const PromptTemplate& prompt_template);

// Role names are matched case-insensitively on word boundaries; the last
// one mentioned wins. Throws Error(kUnparseableResponse) if none is found.
RoleLabel parse_response(std::string_view response);

struct BackendConfig {
  std::string endpoint_url;
  std::string model_name;
  double temperature = 0.01;
  std::size_t max_retries = 2;
  std::chrono::milliseconds timeout{30000};
  std::string api_key_env = "ROLESCOPE_LLM_API_KEY";
  std::size_t max_in_flight = 4;
  std::chrono::milliseconds initial_backoff{500};

  // Throws Error(kInvalidArgument).
  void validate() const;
};

// Implementations must be callable from several threads at once. complete()
// throws Error(kTransportFailure) for failures worth retrying.
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual std::string complete(const std::string& prompt,
                               const BackendConfig& config) = 0;
};

// Answers with the rule classifier's label for the prompt's target
// statement, or a refusal when no keyword matches.
class MockChatBackend final : public ChatBackend {
 public:
  explicit MockChatBackend(
      rules::KeywordTaxonomy taxonomy = rules::KeywordTaxonomy::defaults());
  std::string complete(const std::string& prompt,
                       const BackendConfig& config) override;

 private:
  rules::KeywordTaxonomy taxonomy_;
};

// The target statement of a prompt produced by build_prompt.
std::optional<std::string> extract_target_statement(std::string_view prompt);

// POSTs {model, messages, temperature} to config.endpoint_url and returns
// choices[0].message.content. The bearer token is read from the
// environment variable named by config.api_key_env.
class HttpChatBackend final : public ChatBackend {
 public:
  std::string complete(const std::string& prompt,
                       const BackendConfig& config) override;
};

struct Outcome {
  std::string record_id;
  std::optional<RoleLabel> label;
  std::optional<ErrorCode> error;
  std::string error_message;
  std::string raw_response_hash;
  std::size_t attempts = 0;

  bool ok() const { return label.has_value(); }
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

// One outcome per record, in input order. Transport failures are retried
// up to max_retries times with doubling backoff; other failures are
// recorded immediately.
std::vector<Outcome> classify_batch(std::span<const ContributionRecord> records,
                                    ChatBackend& backend,
                                    const PromptTemplate& prompt_template,
                                    const BackendConfig& config,
                                    const Sleeper& sleeper = {});

nlohmann::json to_json(const Outcome& outcome);
Outcome outcome_from_json(const nlohmann::json& json);
void write_outcomes(const std::filesystem::path& path,
                    std::span<const Outcome> outcomes);
std::vector<Outcome> read_outcomes(const std::filesystem::path& path);

}  // namespace rolescope::llm
