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

#include "rolescope/table_io.hpp"

#include <fstream>
#include <sstream>

#include "rolescope/error.hpp"

namespace rolescope {

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::string::npos;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable,
                "cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kFileUnreadable,
                "cannot write " + path.string());
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

Table parse_table(std::string_view text, char delimiter) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") {
    text.remove_prefix(3);
  }
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> lines;
  std::vector<std::string> record;
  std::string field;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool any_content = false;

  const auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
    const bool blank = record.size() == 1 && record[0].empty() && !any_content;
    if (!blank) {
      records.push_back(std::move(record));
      lines.push_back(record_line);
    }
    record.clear();
    any_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || field_was_quoted) {
        throw FormatError(line, "unexpected quote inside unquoted field");
      }
      in_quotes = true;
      field_was_quoted = true;
      any_content = true;
    } else if (c == delimiter) {
      record.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
      any_content = true;
    } else if (c == '\r') {
      // tolerated before \n
    } else if (c == '\n') {
      end_record();
      ++line;
      record_line = line;
    } else {
      if (field_was_quoted) {
        throw FormatError(line, "characters after closing quote");
      }
      field += c;
      any_content = true;
    }
  }
  if (in_quotes) throw FormatError(record_line, "unterminated quoted field");
  if (any_content || !field.empty()) end_record();

  Table table;
  if (records.empty()) throw FormatError(1, "missing header row");
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw FormatError(lines[r], "expected " +
                                      std::to_string(table.header.size()) +
                                      " fields, found " +
                                      std::to_string(records[r].size()));
    }
    table.rows.push_back(std::move(records[r]));
    table.row_lines.push_back(lines[r]);
  }
  return table;
}

Table read_table(const std::filesystem::path& path, char delimiter) {
  return parse_table(read_text_file(path), delimiter);
}

namespace {

void append_field(std::string& out, const std::string& field, char delimiter) {
  const bool quote = field.find_first_of(std::string{delimiter, '"', '\n',
                                                     '\r'}) !=
                     std::string::npos;
  if (!quote) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_row(std::string& out, const std::vector<std::string>& row,
                char delimiter) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i > 0) out += delimiter;
    append_field(out, row[i], delimiter);
  }
  out += '\n';
}

}  // namespace

std::string format_table(const Table& table, char delimiter) {
  std::string out;
  append_row(out, table.header, delimiter);
  for (const auto& row : table.rows) append_row(out, row, delimiter);
  return out;
}

void write_table(const std::filesystem::path& path, const Table& table,
                 char delimiter) {
  write_text_file(path, format_table(table, delimiter));
}

std::vector<nlohmann::json> read_json_lines(
    const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<nlohmann::json> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(number, e.what());
    }
  }
  return rows;
}

void write_json_lines(const std::filesystem::path& path,
                      const std::vector<nlohmann::json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  write_text_file(path, out);
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kFormatError, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& json) {
  write_text_file(path, json.dump(2) + "\n");
}

}  // namespace rolescope
