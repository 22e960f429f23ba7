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

#include "rolescope/ingest.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <unordered_map>
#include <variant>

#include "rolescope/error.hpp"
#include "rolescope/random.hpp"
#include "rolescope/table_io.hpp"
#include "rolescope/text_util.hpp"

namespace rolescope::ingest {

namespace {

constexpr std::array<std::string_view, 5> kRequiredFields = {
    "paper_id", "journal", "year", "author_name", "statement"};
constexpr std::array<std::string_view, 3> kOptionalFields = {
    "author_position", "is_corresponding", "gold_role"};

struct SourceRow {
  std::size_t line = 0;
  nlohmann::json original;
  std::unordered_map<std::string, std::string> fields;  // record field -> raw
};

std::string json_scalar_to_string(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_null()) return "";
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  return value.dump();
}

std::optional<bool> parse_bool(std::string_view raw) {
  const std::string v = text::ascii_lower(text::trim(raw));
  if (v.empty() || v == "false" || v == "0" || v == "no" || v == "n") {
    return false;
  }
  if (v == "true" || v == "1" || v == "yes" || v == "y") return true;
  return std::nullopt;
}

std::vector<SourceRow> load_table_rows(
    const CorpusFile& file,
    const std::map<std::string, std::string>& field_to_source) {
  const Table table = read_table(file.path, file.delimiter);
  std::map<std::string, std::size_t> field_column;
  for (const auto& [field, source] : field_to_source) {
    const std::size_t column = table.column(source);
    if (column == std::string::npos) {
      const bool required =
          std::find(kRequiredFields.begin(), kRequiredFields.end(), field) !=
          kRequiredFields.end();
      if (required) throw MissingColumn(source);
      continue;
    }
    field_column[field] = column;
  }
  std::vector<SourceRow> rows;
  rows.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    SourceRow row;
    row.line = table.row_lines[r];
    row.original = nlohmann::json::object();
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      row.original[table.header[c]] = table.rows[r][c];
    }
    for (const auto& [field, column] : field_column) {
      row.fields[field] = table.rows[r][column];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SourceRow> load_json_rows(
    const CorpusFile& file,
    const std::map<std::string, std::string>& field_to_source) {
  const auto objects = read_json_lines(file.path);
  // Line numbers: recount non-empty lines to report source positions.
  const std::string text = read_text_file(file.path);
  std::vector<std::size_t> line_numbers;
  {
    std::size_t number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto end = text.find('\n', start);
      const auto line = std::string_view(text).substr(
          start, end == std::string::npos ? std::string::npos : end - start);
      ++number;
      if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
        line_numbers.push_back(number);
      }
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  std::set<std::string> keys;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (!objects[i].is_object()) {
      throw FormatError(line_numbers[i], "expected a JSON object");
    }
    for (const auto& item : objects[i].items()) keys.insert(item.key());
  }
  for (const auto field : kRequiredFields) {
    const auto& source = field_to_source.at(std::string(field));
    if (!objects.empty() && !keys.contains(source)) {
      throw MissingColumn(source);
    }
  }
  std::vector<SourceRow> rows;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    SourceRow row;
    row.line = line_numbers[i];
    row.original = objects[i];
    for (const auto& [field, source] : field_to_source) {
      if (objects[i].contains(source)) {
        row.fields[field] = json_scalar_to_string(objects[i].at(source));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Converts one row, returning the reject reason on failure.
std::variant<ContributionRecord, std::string> convert_row(
    const SourceRow& row) {
  const auto get = [&](std::string_view field) -> std::string {
    const auto it = row.fields.find(std::string(field));
    return it == row.fields.end() ? std::string()
                                  : std::string(text::trim(it->second));
  };
  for (const auto field : kRequiredFields) {
    if (get(field).empty()) return "missing_value:" + std::string(field);
  }
  ContributionRecord record;
  record.paper_id = get("paper_id");
  record.author_name = get("author_name");
  const auto statement = row.fields.find("statement");
  record.statement = std::string(text::trim(statement->second));

  const auto journal = parse_journal(get("journal"));
  if (!journal) return std::string("unknown_journal");
  record.journal = *journal;

  const auto year = text::parse_int(get("year"));
  if (!year) return std::string("invalid_year");
  if (*year < kCorpusFirstYear || *year > kCorpusLastYear) {
    return std::string("year_out_of_range");
  }
  record.year = static_cast<int>(*year);

  const std::string position = get("author_position");
  if (!position.empty()) {
    const auto value = text::parse_int(position);
    if (!value || *value < 1) return std::string("invalid_position");
    record.author_position = static_cast<int>(*value);
  } else {
    record.author_position = 0;  // assigned from row order below
  }

  const auto corresponding = parse_bool(get("is_corresponding"));
  if (!corresponding) return std::string("invalid_corresponding");
  record.is_corresponding = *corresponding;

  const std::string gold = get("gold_role");
  if (!gold.empty()) {
    const auto role = parse_role(gold);
    if (!role) return std::string("invalid_gold_role");
    record.gold_role = *role;
  }
  return record;
}

}  // namespace

std::map<std::string, std::string> CorpusFile::default_column_map() {
  std::map<std::string, std::string> map;
  for (const auto f : kRequiredFields) map[std::string(f)] = std::string(f);
  for (const auto f : kOptionalFields) map[std::string(f)] = std::string(f);
  return map;
}

ParseResult parse_corpus(const CorpusFile& file) {
  std::map<std::string, std::string> field_to_source;
  for (const auto& [source, field] : file.column_map) {
    const bool known =
        std::find(kRequiredFields.begin(), kRequiredFields.end(), field) !=
            kRequiredFields.end() ||
        std::find(kOptionalFields.begin(), kOptionalFields.end(), field) !=
            kOptionalFields.end();
    if (!known) {
      throw Error(ErrorCode::kInvalidArgument,
                  "column_map targets unknown field '" + field + "'");
    }
    field_to_source[field] = source;
  }
  for (const auto field : kRequiredFields) {
    if (!field_to_source.contains(std::string(field))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "column_map does not cover required field '" +
                      std::string(field) + "'");
    }
  }

  const std::vector<SourceRow> rows =
      file.format == CorpusFormat::kDelimitedTable
          ? load_table_rows(file, field_to_source)
          : load_json_rows(file, field_to_source);

  ParseResult result;
  result.input_rows = rows.size();

  struct Pending {
    std::size_t row_index;
    ContributionRecord record;
  };
  std::vector<Pending> accepted;
  std::vector<std::pair<std::size_t, std::string>> rejected;
  std::unordered_map<std::string, int> team_rows;
  std::unordered_map<std::string, int> next_position;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto converted = convert_row(rows[i]);
    if (auto* reason = std::get_if<std::string>(&converted)) {
      rejected.emplace_back(i, *reason);
      continue;
    }
    auto record = std::get<ContributionRecord>(std::move(converted));
    const int order = ++next_position[record.paper_id];
    if (record.author_position == 0) record.author_position = order;
    ++team_rows[record.paper_id];
    accepted.push_back({i, std::move(record)});
  }

  std::set<std::pair<std::string, int>> seen_positions;
  for (auto& pending : accepted) {
    const auto& record = pending.record;
    if (record.author_position > team_rows[record.paper_id]) {
      rejected.emplace_back(pending.row_index, "position_exceeds_team_size");
      continue;
    }
    if (!seen_positions.emplace(record.paper_id, record.author_position)
             .second) {
      rejected.emplace_back(pending.row_index, "duplicate_position");
      continue;
    }
    result.records.push_back(std::move(pending.record));
  }

  std::sort(rejected.begin(), rejected.end());
  for (const auto& [index, reason] : rejected) {
    result.rejects.push_back({rows[index].line, rows[index].original, reason});
  }
  return result;
}

nlohmann::json to_json(const ContributionRecord& record) {
  nlohmann::json json;
  json["schema_version"] = 1;
  json["paper_id"] = record.paper_id;
  json["journal"] = std::string(to_string(record.journal));
  json["year"] = record.year;
  json["author_name"] = record.author_name;
  json["author_position"] = record.author_position;
  json["is_corresponding"] = record.is_corresponding;
  json["statement"] = record.statement;
  if (record.gold_role) {
    json["gold_role"] = std::string(to_string(*record.gold_role));
  } else {
    json["gold_role"] = nullptr;
  }
  return json;
}

ContributionRecord record_from_json(const nlohmann::json& json) {
  try {
    ContributionRecord record;
    record.paper_id = json.at("paper_id").get<std::string>();
    const auto journal = parse_journal(json.at("journal").get<std::string>());
    if (!journal) {
      throw Error(ErrorCode::kInvalidArgument, "unknown journal");
    }
    record.journal = *journal;
    record.year = json.at("year").get<int>();
    record.author_name = json.at("author_name").get<std::string>();
    record.author_position = json.at("author_position").get<int>();
    record.is_corresponding = json.at("is_corresponding").get<bool>();
    record.statement = json.at("statement").get<std::string>();
    if (json.contains("gold_role") && !json.at("gold_role").is_null()) {
      const auto role = parse_role(json.at("gold_role").get<std::string>());
      if (!role) throw Error(ErrorCode::kInvalidArgument, "invalid gold_role");
      record.gold_role = *role;
    }
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError,
                std::string("invalid corpus record: ") + e.what());
  }
}

void write_corpus(const std::filesystem::path& path,
                  const std::vector<ContributionRecord>& records) {
  std::vector<nlohmann::json> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(to_json(r));
  write_json_lines(path, rows);
}

std::vector<ContributionRecord> read_corpus(
    const std::filesystem::path& path) {
  std::vector<ContributionRecord> records;
  for (const auto& row : read_json_lines(path)) {
    records.push_back(record_from_json(row));
  }
  return records;
}

void write_rejects(const std::filesystem::path& path,
                   const std::vector<RejectedRow>& rejects) {
  std::vector<nlohmann::json> rows;
  for (const auto& reject : rejects) {
    nlohmann::json row = reject.row;
    row["reject_reason"] = reject.reason;
    row["source_line"] = reject.line;
    rows.push_back(std::move(row));
  }
  write_json_lines(path, rows);
}

void SamplingPlan::validate() const {
  if (per_journal < 1) {
    throw Error(ErrorCode::kInvalidArgument, "per_journal must be >= 1");
  }
  if (min_team > max_team) {
    throw Error(ErrorCode::kInvalidArgument, "min_team exceeds max_team");
  }
}

std::vector<PaperRecord> sample_papers(const std::vector<PaperRecord>& papers,
                                       const SamplingPlan& plan) {
  plan.validate();
  std::array<std::vector<std::size_t>, kAllJournals.size()> eligible;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < papers.size(); ++i) {
    const auto& paper = papers[i];
    const auto size = paper.team_size();
    if (size < plan.min_team || size > plan.max_team) continue;
    if (!seen.insert(paper.paper_id).second) continue;
    eligible[static_cast<std::size_t>(paper.journal)].push_back(i);
  }
  for (const auto journal : kAllJournals) {
    const auto& pool = eligible[static_cast<std::size_t>(journal)];
    if (pool.size() < plan.per_journal) {
      throw InsufficientPapers(std::string(to_string(journal)), pool.size(),
                               plan.per_journal);
    }
  }
  std::vector<PaperRecord> sample;
  sample.reserve(plan.per_journal * kAllJournals.size());
  for (const auto journal : kAllJournals) {
    auto pool = eligible[static_cast<std::size_t>(journal)];
    Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(journal)));
    rng.shuffle(std::span<std::size_t>(pool));
    for (std::size_t k = 0; k < plan.per_journal; ++k) {
      sample.push_back(papers[pool[k]]);
    }
  }
  return sample;
}

double expected_rows(double journals, double per_journal, double avg_authors) {
  if (!(journals > 0) || !(per_journal > 0) || !(avg_authors > 0)) {
    throw Error(ErrorCode::kNonPositiveInput,
                "expected_rows requires positive inputs");
  }
  return journals * per_journal * avg_authors;
}

}  // namespace rolescope::ingest
