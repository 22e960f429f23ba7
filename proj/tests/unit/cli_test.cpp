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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rolescope/cli.hpp"
#include "rolescope/ingest.hpp"
#include "rolescope/rule_classifier.hpp"
#include "rolescope/table_io.hpp"

namespace rolescope::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = ROLESCOPE_FIXTURE_DIR;

class Pipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    out_ = fs::temp_directory_path() /
           (std::string("rolescope_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(out_);
  }
  void TearDown() override { fs::remove_all(out_); }

  int stage(const std::string& command, std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {"rolescope",
                                     "--corpus", (kFixtures / "corpus.csv").string(),
                                     "--cache-dir", (kFixtures / "openalex_cache").string(),
                                     "--offline",
                                     "--output-dir", out_.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    args.push_back(command);
    return run(args);
  }

  fs::path out_;
};

TEST_F(Pipeline, LabelRuleMatchesClassifierRowByRow) {
  ASSERT_EQ(stage("ingest"), kExitOk);
  ASSERT_EQ(stage("label-rule"), kExitOk);
  const auto corpus = ingest::read_corpus(out_ / "corpus.jsonl");
  const auto labels = read_json_lines(out_ / "rule_labels.jsonl");
  ASSERT_EQ(labels.size(), corpus.size());
  const auto taxonomy = rules::KeywordTaxonomy::defaults();
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    EXPECT_EQ(labels[i]["record_id"], corpus[i].record_id());
    const auto role = rules::try_classify_statement(corpus[i].statement, taxonomy);
    if (role) {
      EXPECT_EQ(labels[i]["label"], std::string(to_string(*role)));
    } else {
      EXPECT_FALSE(labels[i].contains("label"));
    }
  }
  const auto first = read_text_file(out_ / "rule_labels.jsonl");
  ASSERT_EQ(stage("label-rule"), kExitOk);
  EXPECT_EQ(read_text_file(out_ / "rule_labels.jsonl"), first);
}

TEST_F(Pipeline, IngestWritesRejects) {
  ASSERT_EQ(stage("ingest"), kExitOk);
  EXPECT_EQ(read_json_lines(out_ / "corpus.rejects.jsonl").size(), 3u);
  const auto summary = read_json_file(out_ / "ingest_summary.json");
  EXPECT_EQ(summary["records"].get<int>() + summary["rejected"].get<int>(),
            summary["input_rows"].get<int>());
}

TEST_F(Pipeline, TrainBeforeFeaturizeIsUpstreamMissing) {
  EXPECT_EQ(stage("train"), kExitUpstreamMissing);
  EXPECT_EQ(stage("report"), kExitUpstreamMissing);
}

TEST_F(Pipeline, UsageErrors) {
  EXPECT_EQ(stage("ingest", {"--bogus-flag"}), kExitConfigError);
  EXPECT_EQ(stage("no-such-command"), kExitConfigError);
  EXPECT_EQ(stage("ingest", {"--label-source", "oracle"}), kExitConfigError);
}

TEST_F(Pipeline, ConfigFileAndEffectiveConfig) {
  fs::create_directories(out_);
  const auto config = out_ / "run.toml";
  std::ofstream(config) << "seed = 7\nepochs = 3\nper-journal = 1\n";
  ASSERT_EQ(stage("ingest", {"--config", config.string(), "--epochs", "4"}), kExitOk);
  const auto effective = read_text_file(out_ / "effective_config.toml");
  EXPECT_NE(effective.find("seed=7"), std::string::npos) << effective;
  EXPECT_NE(effective.find("epochs=4"), std::string::npos);
  EXPECT_NE(effective.find("api-key-env=\"ROLESCOPE_LLM_API_KEY\""), std::string::npos);
}

TEST_F(Pipeline, FullRunProducesReport) {
  for (const char* s : {"ingest", "label-rule", "label-llm", "featurize", "split", "train",
                        "evaluate", "explain", "lratio", "report"}) {
    ASSERT_EQ(stage(s, {"--shap-samples", "64", "--shap-baselines", "4"}), kExitOk) << s;
  }
  for (const char* f : {"metrics.json", "distribution.csv", "shap_summary.csv",
                        "shap_summary.svg", "lratio.csv", "summary.txt"}) {
    EXPECT_TRUE(fs::exists(out_ / "report" / f)) << f;
  }
  const auto metrics = read_json_file(out_ / "metrics.json");
  EXPECT_TRUE(metrics.contains("schema_version"));
  EXPECT_GE(metrics["baseline"]["macro"]["f1"].get<double>(), 0.8);
  const auto llm = read_json_lines(out_ / "llm_labels.jsonl");
  const auto rule = read_json_lines(out_ / "rule_labels.jsonl");
  ASSERT_EQ(llm.size(), rule.size());
  for (std::size_t i = 0; i < llm.size(); ++i) {
    if (rule[i].contains("label")) {
      EXPECT_EQ(llm[i]["label"], rule[i]["label"]);
    }
  }
}

}  // namespace
}  // namespace rolescope::cli
