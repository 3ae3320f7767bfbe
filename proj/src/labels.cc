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

#include "wikistance/labels.h"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "wikistance/text.h"

namespace wikistance {

namespace {

const char *const kQualifiers[] = {"speedy", "strong", "weak", "schnell",
                                   "hızlı"};

bool is_edge_char(unsigned char c) {
  return std::isspace(c) || std::ispunct(c);
}

std::string strip_edges(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && is_edge_char(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_edge_char(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

size_t count_words(std::string_view s) {
  size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    bool space = c == ' ';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

}  // namespace

std::string_view stance_name(Stance stance) {
  switch (stance) {
    case Stance::kComment: return "comment";
    case Stance::kDelete: return "delete";
    case Stance::kKeep: return "keep";
    case Stance::kMerge: return "merge";
  }
  return "comment";
}

std::optional<Stance> parse_stance(std::string_view name) {
  for (Stance s : kAllStances) {
    if (stance_name(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view discard_reason_name(DiscardReason reason) {
  switch (reason) {
    case DiscardReason::kNoVote: return "no_vote";
    case DiscardReason::kUnknownToken: return "unknown_token";
    case DiscardReason::kAmbiguous: return "ambiguous";
  }
  return "unknown_token";
}

void StanceLexicon::add(std::string_view surface, Stance stance) {
  std::string key = collapse_whitespace(to_lower(surface, language_));
  if (variants_.count(key)) {
    throw_error(ErrorKind::kData, "DuplicateVariant",
                "duplicate lexicon variant '" + key + "' for " +
                    std::string(language_code(language_)));
  }
  variants_.emplace(key, stance);
  canonical_.emplace(stance, key);  // keeps the first one
  max_words_ = std::max(max_words_, count_words(key));
}

std::optional<Stance> StanceLexicon::lookup(std::string_view normalized) const {
  auto it = variants_.find(std::string(normalized));
  if (it == variants_.end()) return std::nullopt;
  return it->second;
}

const std::string &StanceLexicon::canonical(Stance stance) const {
  auto it = canonical_.find(stance);
  if (it == canonical_.end()) {
    throw_error(ErrorKind::kData, "MissingLexicon",
                "no surface form for " + std::string(stance_name(stance)));
  }
  return it->second;
}

std::string default_lexicon_path() {
  return data_dir() + "/lexicons/stance.tsv";
}

StanceLexicon load_lexicon(Language lang, const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw_error(ErrorKind::kConfig, "MissingLexicon",
                "cannot open lexicon " + path);
  }
  StanceLexicon lexicon(lang);
  std::string line;
  size_t line_no = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss{std::string(row)};
    std::string col;
    while (std::getline(ss, col, '\t')) cols.emplace_back(trim(col));
    auto label = cols.size() == 3 ? parse_stance(cols[2]) : std::nullopt;
    auto row_lang = cols.size() == 3 ? parse_language(cols[0]) : std::nullopt;
    if (!label || !row_lang || cols[1].empty()) {
      throw_error(ErrorKind::kConfig, "SchemaViolation",
                  path + ":" + std::to_string(line_no) +
                      ": expected language<TAB>surface<TAB>label");
    }
    if (*row_lang != lang) continue;
    lexicon.add(cols[1], *label);
    any = true;
  }
  if (!any) {
    throw_error(ErrorKind::kConfig, "MissingLexicon",
                "no lexicon rows for " + std::string(language_code(lang)) +
                    " in " + path);
  }
  return lexicon;
}

StanceLexicon load_lexicon(Language lang) {
  return load_lexicon(lang, default_lexicon_path());
}

bool is_stance_qualifier(std::string_view word) {
  for (const char *q : kQualifiers) {
    if (word == q) return true;
  }
  return false;
}

StanceOutcome normalize_stance(std::optional<std::string_view> vote_raw,
                               const StanceLexicon &lexicon) {
  StanceOutcome out;
  if (!vote_raw) {
    out.discard = DiscardReason::kNoVote;
    return out;
  }
  std::string norm =
      collapse_whitespace(strip_edges(to_lower(*vote_raw, lexicon.language())));
  for (;;) {
    size_t space = norm.find(' ');
    std::string_view head = std::string_view(norm).substr(0, space);
    if (space == std::string::npos || !is_stance_qualifier(head)) break;
    norm = strip_edges(std::string_view(norm).substr(space + 1));
  }
  out.normalized = norm;
  if (norm.empty()) {
    out.discard = DiscardReason::kNoVote;
    return out;
  }
  if (auto hit = lexicon.lookup(norm)) {
    out.stance = hit;
    return out;
  }
  // No exact match: distinguish "keep or delete" from unrecognised tokens.
  std::vector<std::string> words;
  for (std::string &w : split_words(norm)) words.push_back(std::move(w));
  std::set<Stance> found;
  for (size_t i = 0; i < words.size(); ++i) {
    std::string gram;
    for (size_t n = 0; n < lexicon.max_words() && i + n < words.size(); ++n) {
      if (n) gram += ' ';
      gram += words[i + n];
      if (auto hit = lexicon.lookup(gram)) found.insert(*hit);
    }
  }
  out.discard = found.size() >= 2 ? DiscardReason::kAmbiguous
                                  : DiscardReason::kUnknownToken;
  return out;
}

}  // namespace wikistance
