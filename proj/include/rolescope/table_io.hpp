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

// Delimited tables (RFC 4180 quoting, configurable delimiter, header row
// required) and JSON-lines helpers shared by the pipeline stages.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace rolescope {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row (multi-line quoted fields count once).
  std::vector<std::size_t> row_lines;

  // Column index, or npos.
  std::size_t column(std::string_view name) const;
};

// Throws Error(kFileUnreadable) or FormatError with the offending line.
Table read_table(const std::filesystem::path& path, char delimiter = ',');
Table parse_table(std::string_view text, char delimiter = ',');

void write_table(const std::filesystem::path& path, const Table& table,
                 char delimiter = ',');
std::string format_table(const Table& table, char delimiter = ',');

// One parsed object per non-empty line; FormatError carries the line number.
std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);
void write_json_lines(const std::filesystem::path& path,
                      const std::vector<nlohmann::json>& rows);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& json);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     std::string_view contents);

}  // namespace rolescope
