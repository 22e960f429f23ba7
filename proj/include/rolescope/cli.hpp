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

// Command-line front end. Each subcommand runs one pipeline stage and
// reads/writes fixed artifact names under the output directory.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace rolescope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitUpstreamMissing = 3;

struct PipelineConfig {
  // Paths.
  std::filesystem::path corpus;
  std::string corpus_format = "auto";  // auto | csv | tsv | jsonl
  std::filesystem::path cache_dir;
  std::filesystem::path output_dir = "rolescope_out";
  std::filesystem::path taxonomy;  // empty: built-in keyword lists

  // Sampling.
  std::size_t per_journal = 250;
  std::size_t min_team = 2;
  std::size_t max_team = 8;
  bool use_sample = false;

  // Labeling.
  std::string label_source = "rule";  // rule | llm
  std::string llm_backend = "mock";   // mock | http
  std::string endpoint_url;
  std::string model_name;
  double temperature = 0.01;
  std::size_t max_retries = 2;
  std::int64_t timeout_ms = 30000;
  std::string api_key_env = "ROLESCOPE_LLM_API_KEY";
  std::size_t max_in_flight = 4;
  std::int64_t backoff_ms = 500;
  std::size_t prompt_max_chars = 8000;

  // OpenAlex.
  std::string openalex_url = "https://api.openalex.org";
  double requests_per_second = 8.0;
  std::size_t page_size = 200;
  std::string topic_source = "concepts";  // concepts | topics
  bool offline = false;

  // Split, training, attribution, baseline.
  double test_ratio = 0.2;
  bool group_by_author = false;
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  double learning_rate = 3e-3;
  std::size_t hidden1 = 64;
  std::size_t hidden2 = 32;
  std::string optimizer = "adam";
  std::size_t active_features = 10;
  bool balance_classes = false;
  double threshold = 0.5;
  std::size_t shap_samples = 256;
  std::size_t shap_baselines = 32;
  std::size_t max_features = 2000;
  std::size_t baseline_epochs = 40;
  double baseline_learning_rate = 0.5;

  std::uint64_t seed = 42;
};

// Parses arguments (argv[0] included) and runs the selected command.
// Returns one of the kExit* codes.
int run(int argc, const char* const* argv);
int run(std::span<const std::string> args);

}  // namespace rolescope::cli
