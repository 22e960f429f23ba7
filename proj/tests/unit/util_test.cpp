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

#include <cmath>
#include <filesystem>

#include "rolescope/error.hpp"
#include "rolescope/random.hpp"
#include "rolescope/table_io.hpp"
#include "rolescope/text_util.hpp"

namespace rolescope {
namespace {

TEST(Text, Basics) {
  EXPECT_EQ(text::ascii_lower("AbC-1"), "abc-1");
  EXPECT_EQ(text::trim("  x y \t"), "x y");
  EXPECT_TRUE(text::iequals("Nature", "NATURE"));
  EXPECT_EQ(text::split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(text::parse_int("42"), 42);
  EXPECT_FALSE(text::parse_int("4x").has_value());
  EXPECT_EQ(text::parse_double("0.25"), 0.25);
  EXPECT_FALSE(text::parse_double("").has_value());
  EXPECT_EQ(text::fnv1a_hex(""), "cbf29ce484222325");
}

TEST(Text, FormatDoubleRoundTrips) {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<int>(rng.below(20)) - 10);
    EXPECT_EQ(text::parse_double(text::format_double(v)), v);
  }
  EXPECT_EQ(text::format_double(0.5), "0.5");
}

TEST(Table, QuotedFieldsRoundTrip) {
  Table t;
  t.header = {"a", "b"};
  t.rows = {{"plain", "with, comma"}, {"quote \"here\"", "multi\nline"}};
  const auto back = parse_table(format_table(t));
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.row_lines, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(back.column("b"), 1u);
  EXPECT_EQ(back.column("zzz"), std::string::npos);
}

TEST(Table, TabDelimiter) {
  const auto t = parse_table("x\ty\n1\t2\n", '\t');
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], "2");
}

TEST(Table, MalformedQuoteReportsLine) {
  try {
    parse_table("a,b\n1,2\n\"open,3\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Files, MissingFileIsUnreadable) {
  try {
    read_table("/nonexistent/path.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileUnreadable);
  }
}

TEST(Files, JsonLinesRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "rolescope_util_test.jsonl";
  write_json_lines(path, {{{"a", 1}}, {{"b", "x"}}});
  const auto rows = read_json_lines(path);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1]["b"], "x");
  std::filesystem::remove(path);
}

TEST(ErrorCodes, NamesRoundTrip) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kUpstreamArtifactMissing); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    EXPECT_EQ(parse_error_code(to_string(code)), code);
  }
  EXPECT_FALSE(parse_error_code("Bogus").has_value());
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(rng.below(7), 7u);
}

}  // namespace
}  // namespace rolescope
