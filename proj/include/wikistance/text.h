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

// UTF-8 string helpers shared by the parsing and modelling code.

#ifndef WIKISTANCE_TEXT_H_
#define WIKISTANCE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

#include "wikistance/common.h"

namespace wikistance {

// Lowercases with language-specific rules. Turkish maps "I" to dotless "ı"
// and "İ" to "i"; the other languages use root rules except that "İ" also
// lowercases to a plain "i".
std::string to_lower(std::string_view utf8, Language lang);

// Unicode word segmentation. Keeps letter and number words, drops
// punctuation and whitespace segments. Words are returned as-is (no case
// mapping).
std::vector<std::string> split_words(std::string_view utf8);

// Number of Unicode code points.
size_t utf8_length(std::string_view utf8);

// Replaces every run of whitespace with a single space and trims both ends.
std::string collapse_whitespace(std::string_view text);

std::string_view trim(std::string_view text);

// ASCII-only case-insensitive prefix test.
bool starts_with_ci(std::string_view text, std::string_view prefix);

// Wiki title normalization: underscores become spaces, runs of spaces are
// collapsed, and the first letter of the page name (after any namespace) is
// uppercased when ASCII.
std::string normalize_title(std::string_view title);

}  // namespace wikistance

#endif  // WIKISTANCE_TEXT_H_
