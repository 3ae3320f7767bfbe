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

// Corpus records: text cleanup, topics, splits, JSONL and statistics.

#ifndef WIKISTANCE_CORPUS_H_
#define WIKISTANCE_CORPUS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wikistance/align.h"
#include "wikistance/common.h"
#include "wikistance/labels.h"
#include "wikistance/policies.h"
#include "wikistance/wikitext.h"

namespace wikistance {

enum class Split { kTrain, kTest, kDev };

std::string_view split_name(Split split);
std::optional<Split> parse_split(std::string_view name);

struct CorpusRecord {
  std::string id;
  Language language = Language::kEn;
  std::string topic;
  std::string comment;                     // policy mentions removed
  std::optional<std::string> comment_raw;  // policy mentions intact
  Stance stance = Stance::kComment;
  std::string policy;
  int policy_superset_id = 0;
  Split split = Split::kTrain;

  bool operator==(const CorpusRecord &) const = default;
};

Json record_to_json(const CorpusRecord &record);
// Throws SchemaViolation on missing, mistyped, unknown or extra fields.
CorpusRecord record_from_json(const Json &j);

struct SplitPlan {
  double train = 0.80;
  double test = 0.15;
  double dev = 0.05;
  uint64_t seed = 0;
  // Lower bound on the Turkish test split.
  size_t tr_min_test = 200;

  // Throws InvalidArgument unless the ratios are non-negative and sum to 1.
  void validate() const;
};

// Removes policy links (with any piped text) and bare shortcut tokens such
// as "WP:NOTE", then collapses whitespace. The result never contains a
// policy link.
std::string scrub_policy_mentions(std::string_view text,
                                  const PolicyPrefixSet &prefixes);

// Removes the given byte spans and collapses whitespace. Spans may overlap.
std::string remove_spans(std::string_view text, std::vector<Span> spans);
std::string anonymize(std::string_view text, const SignatureSpans &spans);

using TopicOverrides = std::map<std::string, std::string>;

// `title<TAB>topic` lines.
TopicOverrides load_topic_overrides(const std::string &path);
std::string default_topic_overrides_path(Language lang);

// The Turkish genitive ending for a title, apostrophe included ("'in").
std::string turkish_genitive_suffix(std::string_view title);

// "Deletion of X", "Löschung von X" or "X'in silinmesi".
std::string make_topic(std::string_view article_title, Language lang,
                       const TopicOverrides *overrides = nullptr);

std::string record_id(Language lang, std::string_view article, size_t index);

// Seeded order by hash of id within each language, then ratio cuts.
// Throws TooFewRecords if a Turkish corpus is smaller than tr_min_test.
void assign_splits(std::vector<CorpusRecord> &records, const SplitPlan &plan);

// Writes one record per line. comment_raw is omitted unless `include_raw`.
void emit_jsonl(const std::vector<CorpusRecord> &records,
                const std::string &path, bool include_raw = false);
// Throws IoError or SchemaViolation naming the offending line.
std::vector<CorpusRecord> load_jsonl(const std::string &path);

struct BuildContext {
  Language language = Language::kEn;
  const StanceLexicon *lexicon = nullptr;
  const PolicyRegistry *registry = nullptr;
  // Optional; ids are left at 0 without it.
  const PolicyAlignment *alignment = nullptr;
  const TopicOverrides *topics = nullptr;
  bool keep_raw = true;
};

struct BuildResult {
  std::vector<CorpusRecord> records;
  size_t parsed_comments = 0;
  // Comments whose vote normalized to one of the four labels.
  size_t stance_comments = 0;
  std::map<DiscardReason, size_t> discarded;
  // Normalized votes that missed the lexicon, for curation.
  std::map<std::string, size_t> unknown_votes;
};

// One record per comment that has both a stance and a retained policy.
BuildResult build_records(const std::vector<RawDiscussion> &discussions,
                          const BuildContext &context);

struct LanguageStats {
  size_t records = 0;
  std::map<Stance, size_t> stance_counts;
  std::map<std::string, size_t> policy_counts;
  // Denominator of mention_rate.
  size_t comment_total = 0;
  double mention_rate = 0.0;
  double mean_comment_length = 0.0;  // code points
  size_t policy_count = 0;

  std::vector<std::pair<std::string, size_t>> top_policies(size_t k) const;
};

struct DatasetStats {
  std::map<Language, LanguageStats> languages;
  Json to_json(size_t top_k = 15) const;
};

// `comment_totals` holds the per-language comment count that the mention
// rate is taken over; languages without an entry use the record count.
DatasetStats compute_stats(const std::vector<CorpusRecord> &records,
                           const std::map<Language, size_t> &comment_totals = {});

// Horizontal bar chart of the most frequent policies.
std::string policy_chart_svg(const LanguageStats &stats, Language lang,
                             size_t top_k = 15);

struct LintFinding {
  std::string id;
  std::string kind;
  std::string excerpt;
};

// Residues that suggest a missed signature, timestamp or policy mention.
std::vector<LintFinding> lint_records(const std::vector<CorpusRecord> &records);

}  // namespace wikistance

#endif  // WIKISTANCE_CORPUS_H_
