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

#include <unicode/brkiter.h>
#include <unicode/locid.h>
#include <unicode/ucasemap.h>
#include <unicode/unistr.h>

#include <cctype>
#include <memory>

namespace wikistance {

namespace {

std::string icu_lower(std::string_view utf8, const char *locale) {
  UErrorCode status = U_ZERO_ERROR;
  UCaseMap *csm = ucasemap_open(locale, 0, &status);
  if (U_FAILURE(status)) return std::string(utf8);
  std::string out(utf8.size() + 8, '\0');
  int32_t n = ucasemap_utf8ToLower(csm, out.data(),
                                   static_cast<int32_t>(out.size()),
                                   utf8.data(),
                                   static_cast<int32_t>(utf8.size()), &status);
  if (status == U_BUFFER_OVERFLOW_ERROR) {
    status = U_ZERO_ERROR;
    out.assign(static_cast<size_t>(n), '\0');
    n = ucasemap_utf8ToLower(csm, out.data(), n, utf8.data(),
                             static_cast<int32_t>(utf8.size()), &status);
  }
  ucasemap_close(csm);
  if (U_FAILURE(status)) return std::string(utf8);
  out.resize(static_cast<size_t>(n));
  return out;
}

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string to_lower(std::string_view utf8, Language lang) {
  if (lang == Language::kTr) return icu_lower(utf8, "tr");
  std::string lowered = icu_lower(utf8, "");
  // Root rules turn U+0130 into "i" + U+0307 COMBINING DOT ABOVE.
  static const std::string kDotted = "i\xCC\x87";
  size_t pos = 0;
  while ((pos = lowered.find(kDotted, pos)) != std::string::npos) {
    lowered.replace(pos, kDotted.size(), "i");
    ++pos;
  }
  return lowered;
}

std::vector<std::string> split_words(std::string_view utf8) {
  std::vector<std::string> words;
  if (utf8.empty()) return words;
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::BreakIterator> it(
      icu::BreakIterator::createWordInstance(icu::Locale::getRoot(), status));
  if (U_FAILURE(status)) return words;
  it->setText(text);
  int32_t start = it->first();
  for (int32_t end = it->next(); end != icu::BreakIterator::DONE;
       start = end, end = it->next()) {
    if (it->getRuleStatus() == UBRK_WORD_NONE) continue;
    std::string word;
    text.tempSubStringBetween(start, end).toUTF8String(word);
    words.push_back(std::move(word));
  }
  return words;
}

size_t utf8_length(std::string_view utf8) {
  size_t n = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

std::string_view trim(std::string_view text) {
  size_t b = 0;
  size_t e = text.size();
  while (b < e && is_space(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(text[e - 1]))) --e;
  return text.substr(b, e - b);
}

bool starts_with_ci(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (size_t i = 0; i < prefix.size(); ++i) {
    unsigned char a = static_cast<unsigned char>(text[i]);
    unsigned char b = static_cast<unsigned char>(prefix[i]);
    if (a < 0x80) a = static_cast<unsigned char>(std::tolower(a));
    if (b < 0x80) b = static_cast<unsigned char>(std::tolower(b));
    if (a != b) return false;
  }
  return true;
}

std::string normalize_title(std::string_view title) {
  std::string spaced(title);
  for (char &c : spaced) {
    if (c == '_') c = ' ';
  }
  std::string out = collapse_whitespace(spaced);
  size_t colon = out.find(':');
  size_t name_start = 0;
  if (colon != std::string::npos && colon + 1 < out.size() &&
      out.find(' ') > colon) {
    // Namespace prefix (no spaces before the colon): capitalize both parts.
    size_t after = colon + 1;
    while (after < out.size() && out[after] == ' ') out.erase(after, 1);
    if (after < out.size() && out[after] >= 'a' && out[after] <= 'z') {
      out[after] = static_cast<char>(out[after] - 'a' + 'A');
    }
  }
  if (name_start < out.size() && out[name_start] >= 'a' &&
      out[name_start] <= 'z') {
    out[name_start] = static_cast<char>(out[name_start] - 'a' + 'A');
  }
  return out;
}

}  // namespace wikistance
