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

// Per-language policy registry: shortcut resolution, sub-policy merging and
// the frequency filter.

#ifndef WIKISTANCE_POLICIES_H_
#define WIKISTANCE_POLICIES_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wikistance/common.h"

namespace wikistance {

struct PolicyPage {
  std::string title;
  Language language = Language::kEn;
  std::string full_text;
  bool is_policy = false;
};

// Manual policy judgments, one per line:
//   verdict(<title>)=policy|not_policy
//   merge(<child title>)=<parent title>
struct PolicyCuration {
  Language language = Language::kEn;
  std::map<std::string, bool> verdicts;
  std::map<std::string, std::string> merges;

  bool is_policy(const std::string &title) const;

  static PolicyCuration parse(std::string_view text, Language lang,
                              const std::string &source = "<curation>");
  // Throws MissingCuration if the file cannot be read.
  static PolicyCuration load(Language lang, const std::string &path);
};

std::string default_curation_path(Language lang);

// Mention threshold used by the reference corpus: 100 en, 10 de, 2 tr.
size_t default_min_count(Language lang);

struct PolicyRegistry {
  Language language = Language::kEn;
  std::set<std::string> canonical;
  // Normalized raw link target -> resolved page title.
  std::map<std::string, std::string> redirect_map;
  // Sub-policy -> parent. Parents are fixed points.
  std::map<std::string, std::string> merge_map;
  // Comments mentioning each canonical policy.
  std::map<std::string, size_t> counts;
  size_t min_count = 1;

  // raw -> redirect -> merge -> canonical. Absent when the chain leaves the
  // curated set. Fragments ("#Section") are ignored.
  std::optional<std::string> canonicalize(std::string_view raw_target) const;

  Json to_json() const;
  static PolicyRegistry from_json(const Json &j);
};

// Title used as the redirect-map key: fragment dropped, wiki-normalized.
std::string policy_link_key(std::string_view raw_target);

// Merge edges from `curation` that are backed by a link from the child page
// to the parent, flattened so every child maps directly to a root. Throws
// CycleDetected on a cyclic chain.
std::map<std::string, std::string> build_merge_map(
    const std::vector<PolicyPage> &pages, const PolicyCuration &curation,
    const std::map<std::string, std::string> &redirect_map = {});

// Titles with count >= min_count. Throws InvalidArgument if min_count < 1.
std::set<std::string> filter_infrequent(
    const std::map<std::string, size_t> &counts, size_t min_count);

std::optional<std::string> select_primary_policy(
    const std::vector<std::string> &targets);

struct RegistryInput {
  Language language = Language::kEn;
  PolicyCuration curation;
  std::map<std::string, std::string> redirect_map;
  std::vector<PolicyPage> pages;
  // Raw policy link targets of every parsed comment, in comment order.
  std::vector<std::vector<std::string>> comment_targets;
  size_t min_count = 1;
};

// Counts each policy once per comment after redirects and merges, then
// applies the frequency filter.
PolicyRegistry build_registry(const RegistryInput &input);

}  // namespace wikistance

#endif  // WIKISTANCE_POLICIES_H_
