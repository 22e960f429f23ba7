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

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "rolescope/error.hpp"
#include "rolescope/llm_classifier.hpp"
#include "rolescope/metrics.hpp"
#include "rolescope/random.hpp"

namespace rolescope::llm {
namespace {

ContributionRecord record(std::string paper, int position, std::string statement) {
  ContributionRecord r;
  r.paper_id = std::move(paper);
  r.year = 2012;
  r.author_name = "A";
  r.author_position = position;
  r.statement = std::move(statement);
  return r;
}

const auto kNoSleep = [](std::chrono::milliseconds) {};

TEST(BuildPrompt, ContainsRolesAndStatementVerbatim) {
  const auto r = record("W1", 1, "Designed the \"core\" assay");
  const auto prompt = build_prompt(r, PromptTemplate::defaults());
  for (const char* s : {"Leadership", "Direct Support", "Indirect Support"}) {
    EXPECT_NE(prompt.find(s), std::string::npos) << s;
  }
  EXPECT_NE(prompt.find(r.statement), std::string::npos);
  EXPECT_EQ(prompt, build_prompt(r, PromptTemplate::defaults()));
  EXPECT_EQ(extract_target_statement(prompt), r.statement);
}

TEST(BuildPrompt, EmptyStatement) {
  try {
    build_prompt(record("W1", 1, "  "), PromptTemplate::defaults());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyStatement);
  }
}

TEST(BuildPrompt, TruncatesToBudget) {
  auto t = PromptTemplate::defaults();
  const auto base = build_prompt(record("W1", 1, "x"), t).size();
  t.max_chars = base + 40;
  std::string longer;
  for (int i = 0; i < 200; ++i) longer += "analyzed é data ";
  const auto prompt = build_prompt(record("W1", 1, longer), t);
  EXPECT_LE(prompt.size(), t.max_chars);
  EXPECT_NE(prompt.find(kTruncationMarker), std::string::npos);
  t.max_chars = 10;
  EXPECT_THROW(build_prompt(record("W1", 1, "x"), t), Error);
}

TEST(PromptTemplate, DefaultsCoverEveryRole) {
  const auto t = PromptTemplate::defaults();
  EXPECT_EQ(t.few_shot_examples.size(), 6u);
  EXPECT_NO_THROW(t.validate());
  auto missing = t;
  std::erase_if(missing.few_shot_examples,
                [](const auto& e) { return e.role == RoleLabel::kDirectSupport; });
  EXPECT_THROW(missing.validate(), Error);
}

TEST(ParseResponse, Examples) {
  EXPECT_EQ(parse_response("Leadership"), RoleLabel::kLeadership);
  EXPECT_EQ(parse_response("This involves analysis, so the role is: Direct Support."),
            RoleLabel::kDirectSupport);
  EXPECT_EQ(parse_response("Not Leadership; this is INDIRECT SUPPORT"),
            RoleLabel::kIndirectSupport);
  EXPECT_EQ(parse_response("Role: IndirectSupport"), RoleLabel::kIndirectSupport);
  try {
    parse_response("I cannot determine this.");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnparseableResponse);
  }
  EXPECT_THROW(parse_response("leaderships"), Error);
}

TEST(ClassifyBatch, MockAgreesWithRules) {
  const std::vector<ContributionRecord> records = {
      record("W1", 1, "Designed the study"), record("W1", 2, "Collected samples"),
      record("W1", 3, "Commented on the draft"), record("W2", 1, "Performed assays")};
  MockChatBackend mock;
  const auto out = classify_batch(records, mock, PromptTemplate::defaults(), BackendConfig{});
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].label, RoleLabel::kLeadership);
  EXPECT_EQ(out[1].label, RoleLabel::kDirectSupport);
  EXPECT_EQ(out[2].label, RoleLabel::kIndirectSupport);
  EXPECT_FALSE(out[3].ok());
  EXPECT_EQ(out[3].error, ErrorCode::kUnparseableResponse);
  EXPECT_EQ(out[3].attempts, 1u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(out[i].record_id, records[i].record_id());
  EXPECT_TRUE(classify_batch({}, mock, PromptTemplate::defaults(), BackendConfig{}).empty());
}

class TimeoutBackend final : public ChatBackend {
 public:
  std::string complete(const std::string&, const BackendConfig&) override {
    ++calls;
    throw Error(ErrorCode::kTransportFailure, "timeout");
  }
  std::atomic<int> calls{0};
};

TEST(ClassifyBatch, RetriesTransportFailures) {
  const std::vector<ContributionRecord> records = {record("W1", 1, "Designed"),
                                                   record("W1", 2, "Helped")};
  TimeoutBackend backend;
  BackendConfig config;
  config.max_retries = 2;
  std::mutex m;
  std::vector<std::chrono::milliseconds> sleeps;
  const auto out = classify_batch(records, backend, PromptTemplate::defaults(), config,
                                  [&](std::chrono::milliseconds d) {
                                    std::lock_guard lock(m);
                                    sleeps.push_back(d);
                                  });
  for (const auto& o : out) {
    EXPECT_EQ(o.error, ErrorCode::kTransportFailure);
    EXPECT_EQ(o.attempts, 3u);
  }
  EXPECT_EQ(backend.calls.load(), 6);
  std::sort(sleeps.begin(), sleeps.end());
  EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{
                        std::chrono::milliseconds(500), std::chrono::milliseconds(500),
                        std::chrono::milliseconds(1000), std::chrono::milliseconds(1000)}));
}

class FlakyBackend final : public ChatBackend {
 public:
  std::string complete(const std::string& prompt, const BackendConfig& config) override {
    if (failures_.fetch_add(1) < 1) throw std::runtime_error("socket reset");
    return inner_.complete(prompt, config);
  }

 private:
  MockChatBackend inner_;
  std::atomic<int> failures_{0};
};

TEST(ClassifyBatch, RecoversAfterTransientFailure) {
  const std::vector<ContributionRecord> records = {record("W1", 1, "Designed")};
  FlakyBackend backend;
  const auto out = classify_batch(records, backend, PromptTemplate::defaults(),
                                  BackendConfig{}, kNoSleep);
  EXPECT_EQ(out[0].label, RoleLabel::kLeadership);
  EXPECT_EQ(out[0].attempts, 2u);
}

TEST(ClassifyBatch, ManyRecordsKeepOrderUnderConcurrency) {
  std::vector<ContributionRecord> records;
  for (int i = 0; i < 200; ++i) {
    records.push_back(record("W" + std::to_string(i), 1 + i % 3,
                             i % 2 ? "Analyzed data" : "Supervised the work"));
  }
  MockChatBackend mock;
  BackendConfig config;
  config.max_in_flight = 8;
  const auto out = classify_batch(records, mock, PromptTemplate::defaults(), config);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(out[i].record_id, records[i].record_id());
    EXPECT_EQ(out[i].label, i % 2 ? RoleLabel::kDirectSupport : RoleLabel::kLeadership);
  }
}

TEST(ClassifyBatch, MockLabelCountsAreConserved) {
  const auto& stems = rules::KeywordTaxonomy::defaults();
  Rng rng(31);
  std::vector<ContributionRecord> records;
  for (int i = 0; i < 5000; ++i) {
    const auto role = kAllRoles[rng.below(3)];
    const auto& list = stems.stems(role);
    records.push_back(record("W" + std::to_string(i / 5), 1 + i % 5,
                             list[rng.below(list.size())] + "ed the samples"));
  }
  MockChatBackend mock;
  const auto out = classify_batch(records, mock, PromptTemplate::defaults(), BackendConfig{});
  std::vector<RoleLabel> labels;
  for (const auto& o : out) {
    ASSERT_TRUE(o.ok());
    labels.push_back(*o.label);
  }
  const auto counts = metrics::label_distribution(labels);
  EXPECT_EQ(counts[0] + counts[1] + counts[2], 5000u);
}

TEST(BackendConfig, Validation) {
  BackendConfig c;
  EXPECT_NO_THROW(c.validate());
  c.temperature = -1;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.max_in_flight = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Outcomes, JsonLinesRoundTrip) {
  MockChatBackend mock;
  const std::vector<ContributionRecord> records = {record("W1", 1, "Designed"),
                                                   record("W1", 2, "Ran gels")};
  const auto out = classify_batch(records, mock, PromptTemplate::defaults(), BackendConfig{});
  const auto json = to_json(out[0]);
  EXPECT_EQ(json["schema_version"], 1);
  EXPECT_EQ(json["label"], "Leadership");
  EXPECT_EQ(json["raw_response_hash"].get<std::string>().size(), 16u);
  const auto path = std::filesystem::temp_directory_path() / "rolescope_outcomes.jsonl";
  write_outcomes(path, out);
  const auto back = read_outcomes(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].label, out[0].label);
  EXPECT_EQ(back[1].error, out[1].error);
  EXPECT_EQ(back[1].record_id, "W1#2");
  std::filesystem::remove(path);
}

class ChatServer : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      std::lock_guard lock(mutex_);
      last_body_ = nlohmann::json::parse(req.body);
      last_auth_ = req.get_header_value("Authorization");
      if (status_ != 200) {
        res.status = status_;
        return;
      }
      res.set_content(reply_, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    config_.endpoint_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
    config_.model_name = "test-model";
    config_.api_key_env = "ROLESCOPE_TEST_LLM_KEY";
    config_.timeout = std::chrono::milliseconds(2000);
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
    ::unsetenv("ROLESCOPE_TEST_LLM_KEY");
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  BackendConfig config_;
  std::mutex mutex_;
  nlohmann::json last_body_;
  std::string last_auth_;
  int status_ = 200;
  std::string reply_ =
      R"({"choices":[{"message":{"role":"assistant","content":"Role: Direct Support"}}]})";
};

TEST_F(ChatServer, SendsChatCompletionRequest) {
  ::setenv("ROLESCOPE_TEST_LLM_KEY", "sekret", 1);
  HttpChatBackend backend;
  EXPECT_EQ(backend.complete("hello", config_), "Role: Direct Support");
  std::lock_guard lock(mutex_);
  EXPECT_EQ(last_body_["model"], "test-model");
  EXPECT_DOUBLE_EQ(last_body_["temperature"].get<double>(), 0.01);
  EXPECT_EQ(last_body_["messages"][1]["role"], "user");
  EXPECT_EQ(last_body_["messages"][1]["content"], "hello");
  EXPECT_EQ(last_auth_, "Bearer sekret");
}

TEST_F(ChatServer, ServerErrorIsTransportFailure) {
  status_ = 503;
  HttpChatBackend backend;
  try {
    backend.complete("hello", config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransportFailure);
  }
}

TEST_F(ChatServer, BadShapeIsUnparseable) {
  reply_ = R"({"choices":[]})";
  HttpChatBackend backend;
  try {
    backend.complete("hello", config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnparseableResponse);
  }
}

TEST_F(ChatServer, BatchEndToEnd) {
  HttpChatBackend backend;
  const std::vector<ContributionRecord> records = {record("W1", 1, "Anything")};
  const auto out = classify_batch(records, backend, PromptTemplate::defaults(), config_);
  EXPECT_EQ(out[0].label, RoleLabel::kDirectSupport);
}

TEST(HttpChatBackend, UnreachableEndpointIsTransportFailure) {
  BackendConfig config;
  config.endpoint_url = "http://127.0.0.1:1/v1/chat";
  config.timeout = std::chrono::milliseconds(500);
  HttpChatBackend backend;
  try {
    backend.complete("x", config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransportFailure);
  }
}

}  // namespace
}  // namespace rolescope::llm
