// Copyright 2026 The Wikistance Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wikistance/text.h"

#include <gtest/gtest.h>

#include "wikistance/common.h"

namespace wikistance {
namespace {

TEST(ToLower, TurkishDottedAndDotlessI) {
  EXPECT_EQ(to_lower("IŞIK", Language::kTr), "ışık");
  EXPECT_EQ(to_lower("İstanbul", Language::kTr), "istanbul");
  EXPECT_EQ(to_lower("KALSIN", Language::kTr), "kalsın");
}

TEST(ToLower, OtherLanguagesUseRootRules) {
  EXPECT_EQ(to_lower("KEEP", Language::kEn), "keep");
  EXPECT_EQ(to_lower("LÖSCHEN", Language::kDe), "löschen");
  EXPECT_EQ(to_lower("İstanbul", Language::kEn), "istanbul");
}

TEST(SplitWords, DropsPunctuationAndSpace) {
  EXPECT_EQ(split_words("Not enough sources!"),
            (std::vector<std::string>{"Not", "enough", "sources"}));
  EXPECT_TRUE(split_words("").empty());
  EXPECT_TRUE(split_words(" ,.;! ").empty());
  EXPECT_EQ(split_words("Löschung von Müller"),
            (std::vector<std::string>{"Löschung", "von", "Müller"}));
}

TEST(Utf8Length, CountsCodePoints) {
  EXPECT_EQ(utf8_length(""), 0u);
  EXPECT_EQ(utf8_length("abc"), 3u);
  EXPECT_EQ(utf8_length("Kulübü"), 6u);
  EXPECT_EQ(utf8_length("ış"), 2u);
}

TEST(CollapseWhitespace, CollapsesAndTrims) {
  EXPECT_EQ(collapse_whitespace("  a \t b\n\nc  "), "a b c");
  EXPECT_EQ(collapse_whitespace(""), "");
  EXPECT_EQ(collapse_whitespace("   "), "");
}

TEST(Trim, RemovesEdgeWhitespace) {
  EXPECT_EQ(trim("  x y \n"), "x y");
  EXPECT_EQ(trim(""), "");
}

TEST(StartsWithCi, AsciiCaseInsensitive) {
  EXPECT_TRUE(starts_with_ci("[[wp:NOTE]]", "[[WP:"));
  EXPECT_TRUE(starts_with_ci("[[Wikipedia:N]]", "[[wikipedia:"));
  EXPECT_FALSE(starts_with_ci("[[W", "[[WP:"));
}

TEST(NormalizeTitle, UnderscoresCaseAndSpaces) {
  EXPECT_EQ(normalize_title("Wikipedia:notability"), "Wikipedia:Notability");
  EXPECT_EQ(normalize_title("wikipedia:What_Wikipedia_is_not"),
            "Wikipedia:What Wikipedia is not");
  EXPECT_EQ(normalize_title("WP:  NOTE"), "WP:NOTE");
  EXPECT_EQ(normalize_title("foo  bar"), "Foo bar");
}

TEST(NormalizeTitle, Idempotent) {
  for (const char *t : {"wp:note", "Vikipedi:kayda_değerlik", "a_b  c", "X"}) {
    std::string once = normalize_title(t);
    EXPECT_EQ(normalize_title(once), once) << t;
  }
}

TEST(Fnv1a64, ReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Languages, CodesRoundTrip) {
  for (Language l : kAllLanguages) {
    EXPECT_EQ(parse_language(language_code(l)), l);
  }
  EXPECT_FALSE(parse_language("fr"));
  EXPECT_FALSE(parse_language("EN"));
}

TEST(Diagnostics, CaptureCollectsRecords) {
  ScopedDiagnosticCapture capture;
  emit_diagnostic("warning", "Something", {{"x", 1}});
  ASSERT_EQ(capture.records().size(), 1u);
  EXPECT_EQ(capture.records()[0]["level"], "warning");
  EXPECT_EQ(capture.count("Something"), 1u);
}

TEST(Error, JsonCarriesKindAndCode) {
  Error e(ErrorKind::kData, "SchemaViolation", "bad");
  Json j = e.to_json();
  EXPECT_EQ(j["error"], "SchemaViolation");
  EXPECT_EQ(j["kind"], "data");
  EXPECT_EQ(j["message"], "bad");
}

}  // namespace
}  // namespace wikistance
