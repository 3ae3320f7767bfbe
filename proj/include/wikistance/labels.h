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

#ifndef WIKISTANCE_LABELS_H_
#define WIKISTANCE_LABELS_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "wikistance/common.h"

namespace wikistance {

// Enumerators are in label-index order, which is alphabetical.
enum class Stance { kComment, kDelete, kKeep, kMerge };

inline constexpr std::array<Stance, 4> kAllStances = {
    Stance::kComment, Stance::kDelete, Stance::kKeep, Stance::kMerge};

std::string_view stance_name(Stance stance);
std::optional<Stance> parse_stance(std::string_view name);

enum class DiscardReason { kNoVote, kUnknownToken, kAmbiguous };

std::string_view discard_reason_name(DiscardReason reason);

// Exactly one of `stance` and `discard` is set.
struct StanceOutcome {
  std::optional<Stance> stance;
  std::optional<DiscardReason> discard;
  // Normalized vote string used for lookup; empty for kNoVote.
  std::string normalized;
};

class StanceLexicon {
 public:
  StanceLexicon() = default;
  explicit StanceLexicon(Language lang) : language_(lang) {}

  Language language() const { return language_; }
  const std::map<std::string, Stance> &variants() const { return variants_; }

  // Adds a surface form; throws DuplicateVariant if it is already present.
  void add(std::string_view surface, Stance stance);

  std::optional<Stance> lookup(std::string_view normalized) const;

  // The first surface listed for `stance`, e.g. "behalten" for de keep.
  const std::string &canonical(Stance stance) const;

  // Longest variant length in words; bounds the n-gram scan.
  size_t max_words() const { return max_words_; }

 private:
  Language language_ = Language::kEn;
  std::map<std::string, Stance> variants_;
  std::map<Stance, std::string> canonical_;
  size_t max_words_ = 1;
};

// Reads the `language<TAB>surface<TAB>label` table. Rows for other languages
// are ignored. Throws MissingLexicon if the file is absent or has no rows
// for `lang`, DuplicateVariant on a repeated surface form.
StanceLexicon load_lexicon(Language lang, const std::string &path);
StanceLexicon load_lexicon(Language lang);  // <data_dir>/lexicons/stance.tsv

std::string default_lexicon_path();

// Qualifiers stripped from the front of a vote before lookup.
bool is_stance_qualifier(std::string_view word);

// Lowercases, trims punctuation, strips qualifiers and matches exactly.
// Never throws.
StanceOutcome normalize_stance(std::optional<std::string_view> vote_raw,
                               const StanceLexicon &lexicon);

}  // namespace wikistance

#endif  // WIKISTANCE_LABELS_H_
