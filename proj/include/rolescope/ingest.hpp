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

// Contribution-corpus parsing and journal-stratified paper sampling.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolescope/core_domain.hpp"

namespace rolescope::ingest {

enum class CorpusFormat { kDelimitedTable, kJsonLines };

struct CorpusFile {
  std::filesystem::path path;
  CorpusFormat format = CorpusFormat::kDelimitedTable;
  char delimiter = ',';
  // Source column name -> record field. Recognized fields: paper_id,
  // journal, year, author_name, author_position, is_corresponding,
  // statement, gold_role.
  std::map<std::string, std::string> column_map;

  // Identity mapping for every recognized field.
  static std::map<std::string, std::string> default_column_map();
};

struct RejectedRow {
  std::size_t line = 0;
  // Source row as an object keyed by the source column names.
  nlohmann::json row;
  std::string reason;
};

struct ParseResult {
  std::vector<ContributionRecord> records;
  std::vector<RejectedRow> rejects;
  std::size_t input_rows = 0;
};

// Throws Error(kFileUnreadable), FormatError, MissingColumn, or
// Error(kInvalidArgument) if column_map lacks a required field.
ParseResult parse_corpus(const CorpusFile& file);

// Canonical corpus format, one record per line.
nlohmann::json to_json(const ContributionRecord& record);
ContributionRecord record_from_json(const nlohmann::json& json);
void write_corpus(const std::filesystem::path& path,
                  const std::vector<ContributionRecord>& records);
std::vector<ContributionRecord> read_corpus(const std::filesystem::path& path);
// Mirrors the source rows with an added `reject_reason` field.
void write_rejects(const std::filesystem::path& path,
                   const std::vector<RejectedRow>& rejects);

struct SamplingPlan {
  std::size_t per_journal = 250;
  std::size_t min_team = 2;
  std::size_t max_team = 8;
  std::uint64_t seed = 0;

  void validate() const;
};

// Exactly plan.per_journal papers per journal, drawn by a seeded shuffle of
// each journal's eligible papers followed by a prefix take. Output is
// grouped by journal in PNAS, Nature, Science, PLoS One order. Throws
// InsufficientPapers.
std::vector<PaperRecord> sample_papers(const std::vector<PaperRecord>& papers,
                                       const SamplingPlan& plan);

// R = J * E * A: expected corpus rows for J journals, E entries per journal
// and A authors per paper on average. Throws Error(kNonPositiveInput).
double expected_rows(double journals, double per_journal, double avg_authors);

}  // namespace rolescope::ingest
