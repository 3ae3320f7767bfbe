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

// Deletion-discussion wikitext: sections, comments, votes, policy links and
// signatures. This is deliberately not a general wikitext parser; it only
// recognises the conventions used on deletion-discussion pages.

#ifndef WIKISTANCE_WIKITEXT_H_
#define WIKISTANCE_WIKITEXT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wikistance/common.h"
#include "wikistance/ingest.h"

namespace wikistance {

// Half-open byte range [begin, end).
struct Span {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool operator==(const Span &) const = default;
};

struct RawComment {
  std::string text;
  std::optional<std::string> vote_raw;
  std::optional<Span> vote_span;
  std::vector<std::string> policy_targets;
  std::vector<Span> signature_spans;
  std::vector<Span> timestamp_spans;
};

struct RawDiscussion {
  std::string article_title;
  Language language = Language::kEn;
  std::vector<RawComment> comments;
};

// Link openers that mark a policy citation, e.g. "[[WP:". Matching on the
// namespace part is ASCII case-insensitive.
struct PolicyPrefixSet {
  Language language = Language::kEn;
  std::vector<std::string> prefixes;

  static PolicyPrefixSet defaults(Language lang);
};

// A policy link occurrence: the full "[[...]]" span and its target.
struct PolicyLink {
  Span span;
  std::string target;
};

struct SignatureSpans {
  std::vector<Span> signatures;
  std::vector<Span> timestamps;
};

struct VoteMatch {
  std::string vote;  // lowercased, link brackets and punctuation stripped
  Span span;         // the bold run including its ''' markers
};

// Splits an archive page into discussions. Each heading that links the
// nominated page opens a discussion; a comment is a list item (or a plain
// paragraph) plus its unmarked continuation lines. Comments are returned
// with votes, policy targets and signature spans filled in. A page without
// discussions yields an empty list and an "EmptyPage" warning.
std::vector<RawDiscussion> parse_archive(const CachedPage &page);

// Discussion parse of raw wikitext; parse_archive() wraps this.
std::vector<RawDiscussion> parse_discussions(std::string_view wikitext,
                                             Language lang);

// First bold ('''...''') token sequence. Bold runs that start inside one of
// `skip` (e.g. signature spans) are passed over.
std::optional<VoteMatch> find_vote(std::string_view text,
                                   Language lang = Language::kEn,
                                   std::span<const Span> skip = {});
std::optional<std::string> extract_vote(std::string_view text,
                                        Language lang = Language::kEn);

// An opener without "]]" on the same line is skipped and, when
// `report_unclosed` is set, reported as an "UnclosedLink" diagnostic.
std::vector<PolicyLink> find_policy_links(std::string_view text,
                                          const PolicyPrefixSet &prefixes,
                                          bool report_unclosed = true);
std::vector<std::string> extract_policy_links(std::string_view text,
                                              const PolicyPrefixSet &prefixes);

SignatureSpans detect_signatures(std::string_view text, Language lang);

// True when `text` is matched in full by the timestamp pattern for `lang`.
bool is_timestamp(std::string_view text, Language lang);
// True when `text` contains a user/user-talk/contributions link.
bool contains_user_link(std::string_view text);

}  // namespace wikistance

#endif  // WIKISTANCE_WIKITEXT_H_
