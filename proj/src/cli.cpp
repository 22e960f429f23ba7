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

#include "rolescope/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "CLI11.hpp"
#include "fmt/format.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"
#include "rolescope/baseline.hpp"
#include "rolescope/dataset.hpp"
#include "rolescope/error.hpp"
#include "rolescope/explain.hpp"
#include "rolescope/features.hpp"
#include "rolescope/ingest.hpp"
#include "rolescope/llm_classifier.hpp"
#include "rolescope/metrics.hpp"
#include "rolescope/mlp.hpp"
#include "rolescope/openalex_client.hpp"
#include "rolescope/random.hpp"
#include "rolescope/rule_classifier.hpp"
#include "rolescope/table_io.hpp"
#include "rolescope/text_util.hpp"

namespace rolescope::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed streams for the stages that draw random numbers.
constexpr std::uint64_t kSplitStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kExplainStream = 3;
constexpr std::uint64_t kBaselineStream = 4;

struct Artifact {
  const char* stage;
  const char* file;
};

constexpr Artifact kCorpus{"ingest", "corpus.jsonl"};
constexpr Artifact kSample{"sample", "sampled_corpus.jsonl"};
constexpr Artifact kRuleLabels{"label-rule", "rule_labels.jsonl"};
constexpr Artifact kLlmLabels{"label-llm", "llm_labels.jsonl"};
constexpr Artifact kFeatures{"featurize", "features.csv"};
constexpr Artifact kTrain{"split", "train.csv"};
constexpr Artifact kTest{"split", "test.csv"};
constexpr Artifact kModel{"train", "model.json"};
constexpr Artifact kMetrics{"evaluate", "metrics.json"};
constexpr Artifact kShapSummary{"explain", "shap_summary.csv"};

fs::path require(const PipelineConfig& cfg, const Artifact& artifact) {
  const fs::path path = cfg.output_dir / artifact.file;
  if (!fs::exists(path)) {
    throw UpstreamArtifactMissing(artifact.stage, path.string());
  }
  return path;
}

fs::path out(const PipelineConfig& cfg, std::string_view file) {
  return cfg.output_dir / file;
}

void config_error(const std::string& message) {
  throw Error(ErrorCode::kConfigError, message);
}

std::vector<ContributionRecord> load_stage_corpus(const PipelineConfig& cfg) {
  return ingest::read_corpus(require(cfg, cfg.use_sample ? kSample : kCorpus));
}

const Artifact& label_artifact(const PipelineConfig& cfg) {
  return cfg.label_source == "llm" ? kLlmLabels : kRuleLabels;
}

std::map<std::string, RoleLabel> load_labels(const PipelineConfig& cfg) {
  std::map<std::string, RoleLabel> labels;
  for (const auto& o : llm::read_outcomes(require(cfg, label_artifact(cfg)))) {
    if (o.label) labels.emplace(o.record_id, *o.label);
  }
  return labels;
}

rules::KeywordTaxonomy load_taxonomy(const PipelineConfig& cfg) {
  if (cfg.taxonomy.empty()) return rules::KeywordTaxonomy::defaults();
  return rules::load_taxonomy(cfg.taxonomy);
}

openalex::OpenAlexClient make_client(const PipelineConfig& cfg) {
  if (cfg.cache_dir.empty()) config_error("cache-dir is required");
  openalex::ClientConfig oc;
  oc.base_url = cfg.openalex_url;
  if (const char* mailto = std::getenv("OPENALEX_MAILTO")) oc.mailto = mailto;
  oc.max_requests_per_second = cfg.requests_per_second;
  oc.cache_dir = cfg.cache_dir;
  oc.offline = cfg.offline;
  oc.page_size = cfg.page_size;
  oc.topic_source = cfg.topic_source == "topics"
                        ? openalex::TopicSource::kTopics
                        : openalex::TopicSource::kConcepts;
  return openalex::OpenAlexClient(std::move(oc));
}

mlp::TrainConfig train_config(const PipelineConfig& cfg) {
  mlp::TrainConfig tc;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.learning_rate = cfg.learning_rate;
  tc.hidden1 = cfg.hidden1;
  tc.hidden2 = cfg.hidden2;
  tc.seed = derive_seed(cfg.seed, kTrainStream);
  const auto optimizer = mlp::parse_optimizer(cfg.optimizer);
  if (!optimizer) config_error("unknown optimizer '" + cfg.optimizer + "'");
  tc.optimizer = *optimizer;
  tc.active_features = cfg.active_features;
  tc.validate();
  return tc;
}

void log_counts(std::string_view what, std::size_t ok, std::size_t failed) {
  spdlog::info("{}: {} ok, {} failed", what, ok, failed);
}

// ---------------------------------------------------------------- stages

void cmd_ingest(const PipelineConfig& cfg) {
  if (cfg.corpus.empty()) config_error("corpus is required");
  ingest::CorpusFile file;
  file.path = cfg.corpus;
  file.column_map = ingest::CorpusFile::default_column_map();
  std::string format = cfg.corpus_format;
  if (format == "auto") {
    const auto ext = text::ascii_lower(cfg.corpus.extension().string());
    format = ext == ".jsonl" ? "jsonl" : ext == ".tsv" ? "tsv" : "csv";
  }
  if (format == "jsonl") {
    file.format = ingest::CorpusFormat::kJsonLines;
  } else if (format == "tsv") {
    file.delimiter = '\t';
  } else if (format != "csv") {
    config_error("unknown corpus-format '" + cfg.corpus_format + "'");
  }
  const auto result = ingest::parse_corpus(file);
  ingest::write_corpus(out(cfg, kCorpus.file), result.records);
  ingest::write_rejects(out(cfg, "corpus.rejects.jsonl"), result.rejects);
  std::map<std::string, std::size_t> reasons;
  for (const auto& r : result.rejects) ++reasons[r.reason];
  write_json_file(out(cfg, "ingest_summary.json"),
                  {{"schema_version", 1},
                   {"input_rows", result.input_rows},
                   {"records", result.records.size()},
                   {"rejected", result.rejects.size()},
                   {"reject_reasons", reasons}});
  log_counts("ingest", result.records.size(), result.rejects.size());
}

void cmd_sample(const PipelineConfig& cfg) {
  const auto records = ingest::read_corpus(require(cfg, kCorpus));
  ingest::SamplingPlan plan;
  plan.per_journal = cfg.per_journal;
  plan.min_team = cfg.min_team;
  plan.max_team = cfg.max_team;
  plan.seed = cfg.seed;
  const auto papers = ingest::sample_papers(group_into_papers(records), plan);
  std::vector<ContributionRecord> sampled;
  for (const auto& p : papers) {
    sampled.insert(sampled.end(), p.authors.begin(), p.authors.end());
  }
  ingest::write_corpus(out(cfg, kSample.file), sampled);
  spdlog::info("sample: {} papers, {} records", papers.size(), sampled.size());
}

void cmd_label_rule(const PipelineConfig& cfg) {
  const auto records = load_stage_corpus(cfg);
  const auto taxonomy = load_taxonomy(cfg);
  taxonomy.validate();
  std::vector<llm::Outcome> outcomes;
  outcomes.reserve(records.size());
  std::size_t failed = 0;
  for (const auto& r : records) {
    llm::Outcome o;
    o.record_id = r.record_id();
    o.attempts = 1;
    if (text::trim(r.statement).empty()) {
      o.error = ErrorCode::kEmptyStatement;
    } else if (auto role = rules::try_classify_statement(r.statement, taxonomy)) {
      o.label = role;
    } else {
      o.error = ErrorCode::kNoKeywordMatch;
    }
    failed += o.ok() ? 0 : 1;
    outcomes.push_back(std::move(o));
  }
  llm::write_outcomes(out(cfg, kRuleLabels.file), outcomes);
  log_counts("label-rule", outcomes.size() - failed, failed);
}

void cmd_label_llm(const PipelineConfig& cfg) {
  const auto records = load_stage_corpus(cfg);
  llm::BackendConfig bc;
  bc.endpoint_url = cfg.endpoint_url;
  bc.model_name = cfg.model_name;
  bc.temperature = cfg.temperature;
  bc.max_retries = cfg.max_retries;
  bc.timeout = std::chrono::milliseconds(cfg.timeout_ms);
  bc.api_key_env = cfg.api_key_env;
  bc.max_in_flight = cfg.max_in_flight;
  bc.initial_backoff = std::chrono::milliseconds(cfg.backoff_ms);
  bc.validate();
  auto prompt = llm::PromptTemplate::defaults();
  prompt.max_chars = cfg.prompt_max_chars;

  std::unique_ptr<llm::ChatBackend> backend;
  if (cfg.llm_backend == "mock") {
    backend = std::make_unique<llm::MockChatBackend>(load_taxonomy(cfg));
  } else if (cfg.llm_backend == "http") {
    if (cfg.endpoint_url.empty()) config_error("endpoint-url is required");
    if (cfg.model_name.empty()) config_error("model-name is required");
    backend = std::make_unique<llm::HttpChatBackend>();
  } else {
    config_error("unknown llm-backend '" + cfg.llm_backend + "'");
  }
  const auto outcomes = llm::classify_batch(records, *backend, prompt, bc);
  const auto failed = static_cast<std::size_t>(std::count_if(
      outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.ok(); }));
  llm::write_outcomes(out(cfg, kLlmLabels.file), outcomes);
  log_counts("label-llm", outcomes.size() - failed, failed);
}

void cmd_fetch(const PipelineConfig& cfg) {
  const auto records = load_stage_corpus(cfg);
  auto client = make_client(cfg);
  std::vector<json> rows;
  std::size_t failed = 0;
  for (const auto& r : records) {
    json row = {{"schema_version", 1}, {"record_id", r.record_id()}};
    try {
      client.fetch_work(r.paper_id);
      const auto author = client.resolve_author(r.author_name, r.paper_id);
      client.fetch_author_profile(author, std::nullopt);
      row["author_id"] = author;
    } catch (const Error& e) {
      row["error"] = std::string(to_string(e.code()));
      row["message"] = e.what();
      ++failed;
    }
    rows.push_back(std::move(row));
  }
  write_json_lines(out(cfg, "author_map.jsonl"), rows);
  log_counts("fetch", rows.size() - failed, failed);
  spdlog::info("fetch: {} network requests", client.network_requests());
}

void cmd_featurize(const PipelineConfig& cfg) {
  const auto records = load_stage_corpus(cfg);
  const auto labels = load_labels(cfg);
  auto client = make_client(cfg);
  std::vector<dataset::LabeledExample> examples;
  std::vector<json> rejects;
  for (const auto& r : records) {
    const auto id = r.record_id();
    const auto label = labels.find(id);
    if (label == labels.end()) {
      rejects.push_back({{"record_id", id}, {"reason", "unlabeled"}});
      continue;
    }
    try {
      const auto work = client.fetch_work(r.paper_id);
      const auto author = client.resolve_author(r.author_name, r.paper_id);
      const auto history = client.fetch_author_profile(author, r.year);
      PaperRecord focal;
      focal.paper_id = r.paper_id;
      focal.journal = r.journal;
      focal.year = r.year;
      focal.referenced_work_ids = work.referenced_work_ids;
      focal.topic_ids = work.topic_ids;
      std::vector<std::string> warnings;
      dataset::LabeledExample e;
      e.author_id = author;
      e.paper_id = r.paper_id;
      e.features = features::extract_features(history, focal, &warnings);
      e.label = to_binary(label->second);
      examples.push_back(std::move(e));
    } catch (const Error& e) {
      rejects.push_back({{"record_id", id},
                         {"reason", std::string(to_string(e.code()))},
                         {"message", e.what()}});
    }
  }
  dataset::write_examples(out(cfg, kFeatures.file), examples);
  write_json_lines(out(cfg, "featurize_rejects.jsonl"), rejects);
  log_counts("featurize", examples.size(), rejects.size());
}

void cmd_split(const PipelineConfig& cfg) {
  const auto examples = dataset::read_examples(require(cfg, kFeatures));
  dataset::SplitOptions options;
  options.group_by_author = cfg.group_by_author;
  const auto split = dataset::stratified_split(
      examples, cfg.test_ratio, derive_seed(cfg.seed, kSplitStream), options);
  dataset::write_examples(out(cfg, kTrain.file), split.train);
  dataset::write_examples(out(cfg, kTest.file), split.test);
  write_json_file(out(cfg, "split_manifest.json"),
                  dataset::split_manifest(split, options));
  spdlog::info("split: {} train, {} test", split.train.size(),
               split.test.size());
}

void cmd_train(const PipelineConfig& cfg) {
  const auto examples = dataset::read_examples(require(cfg, kTrain));
  auto tc = train_config(cfg);
  if (cfg.balance_classes) {
    std::array<double, kBinaryRoleCount> counts{};
    for (const auto& e : examples) counts[index_of(e.label)] += 1.0;
    std::array<double, kBinaryRoleCount> weights{};
    for (std::size_t c = 0; c < kBinaryRoleCount; ++c) {
      weights[c] = counts[c] > 0.0
                       ? static_cast<double>(examples.size()) / (2.0 * counts[c])
                       : 1.0;
    }
    tc.class_weights = weights;
  }
  const auto model = mlp::train(examples, tc);
  mlp::save_model(out(cfg, kModel.file), model);
  Table log;
  log.header = {"epoch", "loss"};
  for (std::size_t i = 0; i < model.loss_history.size(); ++i) {
    log.rows.push_back(
        {std::to_string(i + 1), text::format_double(model.loss_history[i])});
  }
  write_table(out(cfg, "training_log.csv"), log);
  spdlog::info("train: final loss {}", model.loss_history.empty()
                                           ? 0.0
                                           : model.loss_history.back());
}

json baseline_metrics(const PipelineConfig& cfg) {
  const auto records = load_stage_corpus(cfg);
  const auto labels = load_labels(cfg);
  std::vector<std::string> statements;
  std::vector<RoleLabel> roles;
  for (const auto& r : records) {
    const auto it = labels.find(r.record_id());
    if (it == labels.end()) continue;
    statements.push_back(r.statement);
    roles.push_back(it->second);
  }
  std::vector<std::size_t> classes;
  for (auto r : roles) classes.push_back(index_of(r));
  const auto mask = dataset::stratified_test_mask(
      classes, cfg.test_ratio, derive_seed(cfg.seed, kBaselineStream));
  std::vector<std::string> train_text;
  std::vector<RoleLabel> train_roles;
  std::vector<RoleLabel> gold;
  std::vector<std::string> test_text;
  for (std::size_t i = 0; i < statements.size(); ++i) {
    if (mask[i]) {
      test_text.push_back(statements[i]);
      gold.push_back(roles[i]);
    } else {
      train_text.push_back(statements[i]);
      train_roles.push_back(roles[i]);
    }
  }
  if (train_text.empty() || test_text.empty()) {
    return {{"skipped", "too few labeled statements"}};
  }
  baseline::SoftmaxConfig sc;
  sc.epochs = cfg.baseline_epochs;
  sc.learning_rate = cfg.baseline_learning_rate;
  sc.seed = derive_seed(cfg.seed, kBaselineStream);
  const auto classifier =
      baseline::fit_text_classifier(train_text, train_roles, cfg.max_features, sc);
  write_json_file(out(cfg, "baseline_model.json"), to_json(classifier));
  std::vector<RoleLabel> predicted;
  for (const auto& t : test_text) predicted.push_back(classifier.predict(t));
  auto report = metrics::classification_report(gold, predicted).to_json();
  report["vocabulary_size"] = classifier.vocabulary.size();
  return report;
}

void cmd_evaluate(const PipelineConfig& cfg) {
  const auto model = mlp::load_model(require(cfg, kModel));
  const auto train = dataset::read_examples(require(cfg, kTrain));
  const auto test = dataset::read_examples(require(cfg, kTest));

  const auto score = [&](const std::vector<dataset::LabeledExample>& rows,
                         Table* predictions) {
    std::vector<BinaryRole> gold;
    std::vector<BinaryRole> predicted;
    for (const auto& e : rows) {
      const double p = model.probability(e.features);
      const auto pred = p >= cfg.threshold ? BinaryRole::kLeadership
                                           : BinaryRole::kSupport;
      gold.push_back(e.label);
      predicted.push_back(pred);
      if (predictions != nullptr) {
        predictions->rows.push_back({e.author_id, e.paper_id,
                                     text::format_double(p),
                                     std::string(to_string(pred)),
                                     std::string(to_string(e.label))});
      }
    }
    return metrics::classification_report(gold, predicted);
  };
  Table predictions;
  predictions.header = {"author_id", "paper_id", "probability", "predicted",
                        "label"};
  const auto test_report = score(test, &predictions);
  const auto train_report = score(train, nullptr);
  write_table(out(cfg, "predictions.csv"), predictions);

  json result = {{"schema_version", 1},
                 {"threshold", cfg.threshold},
                 {"active_features", model.config.active_features},
                 {"model", {{"test", test_report.to_json()},
                            {"train", train_report.to_json()}}}};
  std::string text = "model (test)\n" + test_report.to_text();

  // Labels against the corpus gold roles, where both exist.
  const auto records = load_stage_corpus(cfg);
  const auto labels = load_labels(cfg);
  std::vector<RoleLabel> gold;
  std::vector<RoleLabel> assigned;
  for (const auto& r : records) {
    const auto it = labels.find(r.record_id());
    if (!r.gold_role || it == labels.end()) continue;
    gold.push_back(*r.gold_role);
    assigned.push_back(it->second);
  }
  if (!gold.empty()) {
    const auto report = metrics::classification_report(gold, assigned);
    result["labels_vs_gold"] = report.to_json();
    result["labels_vs_gold"]["label_source"] = cfg.label_source;
    text += "\nlabels vs gold (" + cfg.label_source + ")\n" + report.to_text();
  }
  result["baseline"] = baseline_metrics(cfg);
  if (result["baseline"].contains("macro")) {
    text += fmt::format("\nTF-IDF baseline macro F1: {:.4f}\n",
                        result["baseline"]["macro"]["f1"].get<double>());
  }
  write_json_file(out(cfg, kMetrics.file), result);
  write_text_file(out(cfg, "metrics.txt"), text);
  spdlog::info("evaluate: test macro F1 {:.4f}", test_report.macro.f1);
}

void cmd_explain(const PipelineConfig& cfg) {
  const auto model = mlp::load_model(require(cfg, kModel));
  const auto train = dataset::read_examples(require(cfg, kTrain));
  const auto test = dataset::read_examples(require(cfg, kTest));
  if (test.empty()) throw Error(ErrorCode::kEmptyInput, "test set is empty");
  std::vector<FeatureVector> train_raw;
  for (const auto& e : train) train_raw.push_back(e.features);
  const auto seed = derive_seed(cfg.seed, kExplainStream);
  const auto baselines =
      explain::default_baselines(model, train_raw, cfg.shap_baselines, seed);

  Table table;
  table.header = {"author_id", "paper_id", "base_value", "prediction"};
  for (const auto name : kFeatureNames) table.header.emplace_back(name);
  std::vector<explain::Attribution> attributions;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto a = explain::gradient_shap(
        model, model.prepare(test[i].features), baselines, cfg.shap_samples,
        derive_seed(seed, i + 1));
    std::vector<std::string> row = {test[i].author_id, test[i].paper_id,
                                    text::format_double(a.base_value),
                                    text::format_double(a.prediction)};
    for (double v : a.phi) row.push_back(text::format_double(v));
    table.rows.push_back(std::move(row));
    attributions.push_back(a);
  }
  write_table(out(cfg, "attributions.csv"), table);
  const auto summary = explain::shap_summary(attributions);
  write_text_file(out(cfg, kShapSummary.file), explain::summary_csv(summary));
  write_text_file(out(cfg, "shap_summary.svg"), explain::summary_svg(summary));
  spdlog::info("explain: top feature {}", summary.front().name);
}

Table lratio_table(const PipelineConfig& cfg) {
  const auto records = load_stage_corpus(cfg);
  const auto labels = load_labels(cfg);
  Table table;
  table.header = {"paper_id", "journal", "year", "team_size", "labeled",
                  "leaders", "l_ratio"};
  for (const auto& paper : group_into_papers(records)) {
    std::vector<RoleLabel> team;
    for (const auto& a : paper.authors) {
      const auto it = labels.find(a.record_id());
      if (it != labels.end()) team.push_back(it->second);
    }
    if (team.empty()) continue;
    const auto leaders = std::count(team.begin(), team.end(),
                                    RoleLabel::kLeadership);
    table.rows.push_back({paper.paper_id, std::string(to_string(paper.journal)),
                          std::to_string(paper.year),
                          std::to_string(paper.team_size()),
                          std::to_string(team.size()), std::to_string(leaders),
                          text::format_double(metrics::l_ratio(team))});
  }
  return table;
}

void cmd_lratio(const PipelineConfig& cfg) {
  const auto table = lratio_table(cfg);
  write_table(out(cfg, "lratio.csv"), table);
  spdlog::info("lratio: {} papers", table.rows.size());
}

void cmd_report(const PipelineConfig& cfg) {
  const auto metrics_path = require(cfg, kMetrics);
  const auto shap_path = require(cfg, kShapSummary);
  const fs::path dir = cfg.output_dir / "report";
  fs::create_directories(dir);
  write_json_file(dir / "metrics.json", read_json_file(metrics_path));
  write_text_file(dir / "shap_summary.csv", read_text_file(shap_path));
  if (fs::exists(out(cfg, "shap_summary.svg"))) {
    write_text_file(dir / "shap_summary.svg",
                    read_text_file(out(cfg, "shap_summary.svg")));
  }

  const auto records = load_stage_corpus(cfg);
  const auto labels = load_labels(cfg);
  std::map<Journal, std::vector<RoleLabel>> by_journal;
  std::vector<RoleLabel> all;
  for (const auto& r : records) {
    const auto it = labels.find(r.record_id());
    if (it == labels.end()) continue;
    by_journal[r.journal].push_back(it->second);
    all.push_back(it->second);
  }
  Table dist;
  dist.header = {"journal"};
  for (const auto role : kAllRoles) dist.header.emplace_back(to_string(role));
  dist.header.emplace_back("total");
  const auto add_row = [&](std::string name, const std::vector<RoleLabel>& v) {
    const auto counts = metrics::label_distribution(v);
    std::vector<std::string> row = {std::move(name)};
    for (auto c : counts) row.push_back(std::to_string(c));
    row.push_back(std::to_string(v.size()));
    dist.rows.push_back(std::move(row));
  };
  for (const auto& [journal, v] : by_journal) {
    add_row(std::string(to_string(journal)), v);
  }
  add_row("all", all);
  write_table(dir / "distribution.csv", dist);

  const auto lr = lratio_table(cfg);
  write_table(dir / "lratio.csv", lr);

  const json m = read_json_file(metrics_path);
  std::string summary = "rolescope report\n\n";
  summary += fmt::format("labeled records: {}\n", all.size());
  summary += fmt::format("papers with l_ratio: {}\n", lr.rows.size());
  summary += fmt::format("model test macro F1: {:.4f}\n",
                         m["model"]["test"]["macro"]["f1"].get<double>());
  if (m.contains("baseline") && m["baseline"].contains("macro")) {
    summary += fmt::format("baseline macro F1: {:.4f}\n",
                           m["baseline"]["macro"]["f1"].get<double>());
  }
  write_text_file(dir / "summary.txt", summary);
  spdlog::info("report written to {}", dir.string());
}

void add_options(CLI::App& app, PipelineConfig& c) {
  app.option_defaults()->always_capture_default();
  app.add_option("--corpus", c.corpus, "Raw corpus table or JSON lines")
      ->group("Paths");
  app.add_option("--corpus-format", c.corpus_format, "auto|csv|tsv|jsonl")
      ->group("Paths");
  app.add_option("--cache-dir", c.cache_dir, "OpenAlex response cache")
      ->group("Paths");
  app.add_option("--output-dir", c.output_dir, "Artifact directory")
      ->group("Paths");
  app.add_option("--taxonomy", c.taxonomy, "Keyword taxonomy JSON")
      ->group("Paths");

  app.add_option("--per-journal", c.per_journal)->group("Sampling");
  app.add_option("--min-team", c.min_team)->group("Sampling");
  app.add_option("--max-team", c.max_team)->group("Sampling");
  app.add_flag("--use-sample,!--no-use-sample", c.use_sample,
               "Downstream stages read the sampled corpus")
      ->group("Sampling");

  app.add_option("--label-source", c.label_source, "rule|llm")
      ->group("Labeling");
  app.add_option("--llm-backend", c.llm_backend, "mock|http")
      ->group("Labeling");
  app.add_option("--endpoint-url", c.endpoint_url)->group("Labeling");
  app.add_option("--model-name", c.model_name)->group("Labeling");
  app.add_option("--temperature", c.temperature)->group("Labeling");
  app.add_option("--max-retries", c.max_retries)->group("Labeling");
  app.add_option("--timeout-ms", c.timeout_ms)->group("Labeling");
  app.add_option("--api-key-env", c.api_key_env,
                 "Environment variable holding the API key")
      ->group("Labeling");
  app.add_option("--max-in-flight", c.max_in_flight)->group("Labeling");
  app.add_option("--backoff-ms", c.backoff_ms)->group("Labeling");
  app.add_option("--prompt-max-chars", c.prompt_max_chars)->group("Labeling");

  app.add_option("--openalex-url", c.openalex_url)->group("OpenAlex");
  app.add_option("--requests-per-second", c.requests_per_second)
      ->group("OpenAlex");
  app.add_option("--page-size", c.page_size)->group("OpenAlex");
  app.add_option("--topic-source", c.topic_source, "concepts|topics")
      ->group("OpenAlex");
  app.add_flag("--offline,!--online", c.offline, "Serve only from the cache")
      ->group("OpenAlex");

  app.add_option("--test-ratio", c.test_ratio)->group("Model");
  app.add_flag("--group-by-author,!--no-group-by-author", c.group_by_author)
      ->group("Model");
  app.add_option("--epochs", c.epochs)->group("Model");
  app.add_option("--batch-size", c.batch_size)->group("Model");
  app.add_option("--learning-rate", c.learning_rate)->group("Model");
  app.add_option("--hidden1", c.hidden1)->group("Model");
  app.add_option("--hidden2", c.hidden2)->group("Model");
  app.add_option("--optimizer", c.optimizer, "adam|sgd")->group("Model");
  app.add_option("--active-features", c.active_features,
                 "Use the first N features (8 or 10)")
      ->group("Model");
  app.add_flag("--balance-classes,!--no-balance-classes", c.balance_classes)
      ->group("Model");
  app.add_option("--threshold", c.threshold)->group("Model");
  app.add_option("--shap-samples", c.shap_samples)->group("Model");
  app.add_option("--shap-baselines", c.shap_baselines)->group("Model");
  app.add_option("--max-features", c.max_features)->group("Baseline");
  app.add_option("--baseline-epochs", c.baseline_epochs)->group("Baseline");
  app.add_option("--baseline-learning-rate", c.baseline_learning_rate)
      ->group("Baseline");
  app.add_option("--seed", c.seed)->group("Model");
}

void validate(const PipelineConfig& c) {
  const auto one_of = [](const std::string& value,
                         std::initializer_list<std::string_view> allowed,
                         const char* name) {
    if (std::find(allowed.begin(), allowed.end(), value) == allowed.end()) {
      config_error(std::string("invalid ") + name + " '" + value + "'");
    }
  };
  one_of(c.label_source, {"rule", "llm"}, "label-source");
  one_of(c.llm_backend, {"mock", "http"}, "llm-backend");
  one_of(c.topic_source, {"concepts", "topics"}, "topic-source");
  one_of(c.corpus_format, {"auto", "csv", "tsv", "jsonl"}, "corpus-format");
  if (c.output_dir.empty()) config_error("output-dir must not be empty");
  if (!(c.test_ratio > 0.0 && c.test_ratio < 1.0)) {
    config_error("test-ratio must lie in (0,1)");
  }
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) {
    config_error("threshold must lie in (0,1)");
  }
  if (c.shap_samples == 0) config_error("shap-samples must be >= 1");
}

}  // namespace

int run(int argc, const char* const* argv) {
  static const bool logger_ready = [] {
    auto logger = spdlog::stderr_color_mt("rolescope");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)logger_ready;

  CLI::App app{"Author-role classification pipeline", "rolescope"};
  app.set_config("--config", "", "TOML configuration file");
  app.require_subcommand(1);
  PipelineConfig config;
  add_options(app, config);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging")->configurable(false);

  using Stage = std::function<void(const PipelineConfig&)>;
  const std::vector<std::tuple<const char*, const char*, Stage>> stages = {
      {"ingest", "Parse and validate the raw corpus", cmd_ingest},
      {"sample", "Draw the per-journal paper sample", cmd_sample},
      {"label-rule", "Label statements with the keyword hierarchy",
       cmd_label_rule},
      {"label-llm", "Label statements with a chat-completion backend",
       cmd_label_llm},
      {"fetch", "Fill the OpenAlex cache for every record", cmd_fetch},
      {"featurize", "Compute feature vectors for labeled records",
       cmd_featurize},
      {"split", "Stratified train/test split", cmd_split},
      {"train", "Train the network", cmd_train},
      {"evaluate", "Score the network, the labels and the text baseline",
       cmd_evaluate},
      {"explain", "Shapley attributions for the test set", cmd_explain},
      {"lratio", "Leadership ratio per paper", cmd_lratio},
      {"report", "Collect metrics, distribution and attributions",
       cmd_report},
  };
  for (const auto& [name, help, fn] : stages) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    validate(config);
    fs::create_directories(config.output_dir);
    write_text_file(config.output_dir / "effective_config.toml",
                    app.config_to_str(true, false));
    for (const auto& [name, help, fn] : stages) {
      if (app.got_subcommand(name)) fn(config);
    }
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.code()), e.what());
    switch (e.code()) {
      case ErrorCode::kConfigError:
        return kExitConfigError;
      case ErrorCode::kUpstreamArtifactMissing:
        return kExitUpstreamMissing;
      default:
        return kExitFailure;
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
  return kExitOk;
}

int run(std::span<const std::string> args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace rolescope::cli
