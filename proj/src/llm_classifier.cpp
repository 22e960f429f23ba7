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

#include "rolescope/llm_classifier.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "spdlog/spdlog.h"
#include "rolescope/table_io.hpp"
#include "rolescope/text_util.hpp"

namespace rolescope::llm {

namespace {

constexpr std::string_view kStatementOpen = "\nStatement: \"";
constexpr std::string_view kStatementClose = "\"\nRole:";

std::string render_example(const FewShotExample& example) {
  std::string out(kStatementOpen.substr(1));
  out += example.statement;
  out += kStatementClose;
  out += ' ';
  out += display_name(example.role);
  out += '\n';
  return out;
}

// Lowercase words separated by single spaces, padded with a space on both
// sides so that " name " finds whole-word occurrences.
std::string normalize_words(std::string_view text) {
  std::string out = " ";
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
    } else if (out.back() != ' ') {
      out += ' ';
    }
  }
  if (out.back() != ' ') out += ' ';
  return out;
}

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "endpoint url has no scheme: " + url);
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

PromptTemplate PromptTemplate::defaults() {
  PromptTemplate t;
  t.role_definitions =
      "You label an author's self-reported contribution to a research paper "
      "with one of three roles.\n"
      "Leadership: conceiving, designing, directing, supervising, "
      "coordinating or conducting the research, interpreting results, or "
      "writing the manuscript.\n"
      "Direct Support: hands-on work such as collecting samples or data, "
      "preparing materials, analyzing data, or helping and assisting with "
      "experiments.\n"
      "Indirect Support: providing resources, participating in or "
      "contributing to discussions, commenting on or editing the "
      "manuscript.\n"
      "When a statement mentions tasks from several roles, give the highest "
      "one: Leadership over Direct Support over Indirect Support.";
  t.few_shot_examples = {
      {"Designed the study and wrote the manuscript.", RoleLabel::kLeadership},
      {"Collected the field samples and analyzed the sequencing data.",
       RoleLabel::kDirectSupport},
      {"Provided reagents and commented on the manuscript.",
       RoleLabel::kIndirectSupport},
      {"Conceptualized the project and supervised the laboratory work.",
       RoleLabel::kLeadership},
      {"Prepared the cell cultures and assisted with the imaging.",
       RoleLabel::kDirectSupport},
      {"Participated in discussions and edited the final draft.",
       RoleLabel::kIndirectSupport},
  };
  t.instruction =
      "Answer with exactly one role name: Leadership, Direct Support or "
      "Indirect Support.";
  return t;
}

void PromptTemplate::validate() const {
  std::array<bool, kRoleCount> seen{};
  for (const auto& e : few_shot_examples) seen[index_of(e.role)] = true;
  for (const auto role : kAllRoles) {
    if (!seen[index_of(role)]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "prompt template has no example for " +
                      std::string(display_name(role)));
    }
  }
  if (max_chars == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_chars must be positive");
  }
}

std::string build_prompt(const ContributionRecord& record,
                         const PromptTemplate& prompt_template) {
  if (text::trim(record.statement).empty()) {
    throw Error(ErrorCode::kEmptyStatement,
                "empty statement for " + record.record_id());
  }
  prompt_template.validate();
  std::string prompt = prompt_template.role_definitions;
  prompt += "\n\nExamples:\n";
  for (const auto& example : prompt_template.few_shot_examples) {
    prompt += '\n';
    prompt += render_example(example);
  }
  prompt += '\n';
  prompt += prompt_template.instruction;
  prompt += '\n';
  prompt += kStatementOpen;

  const std::size_t fixed = prompt.size() + kStatementClose.size();
  const std::size_t budget =
      prompt_template.max_chars > fixed ? prompt_template.max_chars - fixed : 0;
  if (record.statement.size() <= budget) {
    prompt += record.statement;
  } else {
    if (budget <= kTruncationMarker.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "max_chars leaves no room for the statement");
    }
    std::size_t cut = budget - kTruncationMarker.size();
    while (cut > 0 &&
           (static_cast<unsigned char>(record.statement[cut]) & 0xC0) == 0x80) {
      --cut;
    }
    spdlog::warn("statement for {} truncated from {} to {} bytes",
                 record.record_id(), record.statement.size(), cut);
    prompt.append(record.statement, 0, cut);
    prompt += kTruncationMarker;
  }
  prompt += kStatementClose;
  return prompt;
}

RoleLabel parse_response(std::string_view response) {
  static constexpr std::array<std::pair<std::string_view, RoleLabel>, 5>
      kNames = {{{" leadership ", RoleLabel::kLeadership},
                 {" direct support ", RoleLabel::kDirectSupport},
                 {" directsupport ", RoleLabel::kDirectSupport},
                 {" indirect support ", RoleLabel::kIndirectSupport},
                 {" indirectsupport ", RoleLabel::kIndirectSupport}}};
  const std::string words = normalize_words(response);
  std::optional<RoleLabel> last;
  std::size_t last_pos = 0;
  for (const auto& [name, role] : kNames) {
    for (auto pos = words.find(name); pos != std::string::npos;
         pos = words.find(name, pos + 1)) {
      if (!last || pos >= last_pos) {
        last = role;
        last_pos = pos;
      }
    }
  }
  if (!last) {
    std::string shown(response.substr(0, 200));
    throw Error(ErrorCode::kUnparseableResponse,
                "no role name in response: " + shown);
  }
  return *last;
}

void BackendConfig::validate() const {
  if (!(temperature >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be >= 0");
  }
  if (timeout.count() <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "timeout must be positive");
  }
  if (max_in_flight == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_in_flight must be >= 1");
  }
  if (initial_backoff.count() < 0) {
    throw Error(ErrorCode::kInvalidArgument, "backoff must be >= 0");
  }
}

std::optional<std::string> extract_target_statement(std::string_view prompt) {
  if (prompt.size() < kStatementClose.size() ||
      prompt.substr(prompt.size() - kStatementClose.size()) != kStatementClose) {
    return std::nullopt;
  }
  const auto open = prompt.rfind(kStatementOpen);
  if (open == std::string_view::npos) return std::nullopt;
  const auto begin = open + kStatementOpen.size();
  const auto end = prompt.size() - kStatementClose.size();
  if (end < begin) return std::nullopt;
  return std::string(prompt.substr(begin, end - begin));
}

MockChatBackend::MockChatBackend(rules::KeywordTaxonomy taxonomy)
    : taxonomy_(std::move(taxonomy)) {
  taxonomy_.validate();
}

std::string MockChatBackend::complete(const std::string& prompt,
                                      const BackendConfig&) {
  const auto statement = extract_target_statement(prompt);
  if (!statement) return "I could not find a statement to classify.";
  const auto role = rules::try_classify_statement(*statement, taxonomy_);
  if (!role) return "I cannot determine a role for this statement.";
  return "Role: " + std::string(display_name(*role));
}

std::string HttpChatBackend::complete(const std::string& prompt,
                                      const BackendConfig& config) {
  const Endpoint endpoint = split_url(config.endpoint_url);
  httplib::Client client(endpoint.origin);
  client.set_connection_timeout(config.timeout);
  client.set_read_timeout(config.timeout);
  client.set_write_timeout(config.timeout);

  httplib::Headers headers;
  if (const char* key = std::getenv(config.api_key_env.c_str());
      key != nullptr && *key != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const nlohmann::json body = {
      {"model", config.model_name},
      {"temperature", config.temperature},
      {"messages",
       nlohmann::json::array(
           {{{"role", "system"},
             {"content", "You classify author contribution statements."}},
            {{"role", "user"}, {"content", prompt}}})}};

  const auto result =
      client.Post(endpoint.path, headers, body.dump(), "application/json");
  if (!result) {
    throw Error(ErrorCode::kTransportFailure,
                "request failed: " + httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw Error(ErrorCode::kTransportFailure,
                "endpoint returned HTTP " + std::to_string(result->status));
  }
  const auto json = nlohmann::json::parse(result->body, nullptr, false);
  if (json.is_discarded() || !json.contains("choices") ||
      !json["choices"].is_array() || json["choices"].empty()) {
    throw Error(ErrorCode::kUnparseableResponse,
                "response has no choices array");
  }
  const auto& message = json["choices"][0].value("message", nlohmann::json());
  if (!message.is_object() || !message.contains("content") ||
      !message["content"].is_string()) {
    throw Error(ErrorCode::kUnparseableResponse,
                "response has no message content");
  }
  return message["content"].get<std::string>();
}

namespace {

Outcome classify_one(const ContributionRecord& record, ChatBackend& backend,
                     const PromptTemplate& prompt_template,
                     const BackendConfig& config, const Sleeper& sleeper) {
  Outcome outcome;
  outcome.record_id = record.record_id();
  std::string prompt;
  try {
    prompt = build_prompt(record, prompt_template);
  } catch (const Error& e) {
    outcome.error = e.code();
    outcome.error_message = e.what();
    return outcome;
  }
  auto backoff = config.initial_backoff;
  for (std::size_t attempt = 0;; ++attempt) {
    outcome.attempts = attempt + 1;
    std::string response;
    try {
      response = backend.complete(prompt, config);
    } catch (const Error& e) {
      outcome.error = e.code();
      outcome.error_message = e.what();
    } catch (const std::exception& e) {
      outcome.error = ErrorCode::kTransportFailure;
      outcome.error_message = e.what();
    }
    if (outcome.error == ErrorCode::kTransportFailure) {
      if (attempt >= config.max_retries) return outcome;
      spdlog::debug("{}: attempt {} failed ({}), retrying", outcome.record_id,
                    attempt + 1, outcome.error_message);
      if (sleeper) sleeper(backoff);
      backoff *= 2;
      outcome.error.reset();
      outcome.error_message.clear();
      continue;
    }
    if (outcome.error) return outcome;
    outcome.raw_response_hash = text::fnv1a_hex(response);
    try {
      outcome.label = parse_response(response);
    } catch (const Error& e) {
      outcome.error = e.code();
      outcome.error_message = e.what();
    }
    return outcome;
  }
}

}  // namespace

std::vector<Outcome> classify_batch(std::span<const ContributionRecord> records,
                                    ChatBackend& backend,
                                    const PromptTemplate& prompt_template,
                                    const BackendConfig& config,
                                    const Sleeper& sleeper) {
  config.validate();
  prompt_template.validate();
  const Sleeper sleep =
      sleeper ? sleeper
              : Sleeper([](std::chrono::milliseconds d) {
                  std::this_thread::sleep_for(d);
                });
  std::vector<Outcome> outcomes(records.size());
  const std::size_t workers = std::min(config.max_in_flight, records.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      outcomes[i] =
          classify_one(records[i], backend, prompt_template, config, sleep);
    }
    return outcomes;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (auto i = next.fetch_add(1); i < records.size();
             i = next.fetch_add(1)) {
          outcomes[i] =
              classify_one(records[i], backend, prompt_template, config, sleep);
        }
      });
    }
  }
  return outcomes;
}

nlohmann::json to_json(const Outcome& outcome) {
  nlohmann::json json;
  json["schema_version"] = 1;
  json["record_id"] = outcome.record_id;
  if (outcome.label) {
    json["label"] = to_string(*outcome.label);
  } else {
    json["error"] =
        std::string(to_string(outcome.error.value_or(ErrorCode::kInvalidArgument)));
  }
  if (!outcome.raw_response_hash.empty()) {
    json["raw_response_hash"] = outcome.raw_response_hash;
  }
  return json;
}

Outcome outcome_from_json(const nlohmann::json& json) {
  Outcome outcome;
  outcome.record_id = json.at("record_id").get<std::string>();
  if (json.contains("label") && json["label"].is_string()) {
    const auto role = parse_role(json["label"].get<std::string>());
    if (!role) {
      throw Error(ErrorCode::kFormatError,
                  "unknown label for " + outcome.record_id);
    }
    outcome.label = role;
  } else if (json.contains("error") && json["error"].is_string()) {
    outcome.error = parse_error_code(json["error"].get<std::string>())
                        .value_or(ErrorCode::kInvalidArgument);
  } else {
    throw Error(ErrorCode::kFormatError,
                "outcome for " + outcome.record_id + " has neither label nor error");
  }
  outcome.raw_response_hash = json.value("raw_response_hash", "");
  return outcome;
}

void write_outcomes(const std::filesystem::path& path,
                    std::span<const Outcome> outcomes) {
  std::vector<nlohmann::json> rows;
  rows.reserve(outcomes.size());
  for (const auto& o : outcomes) rows.push_back(to_json(o));
  write_json_lines(path, rows);
}

std::vector<Outcome> read_outcomes(const std::filesystem::path& path) {
  std::vector<Outcome> outcomes;
  for (const auto& row : read_json_lines(path)) {
    outcomes.push_back(outcome_from_json(row));
  }
  return outcomes;
}

}  // namespace rolescope::llm
