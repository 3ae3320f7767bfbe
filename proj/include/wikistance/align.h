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

// Cross-lingual policy label space. Interwiki links between canonical
// policies form an undirected graph; each connected component is one
// superset entry.

#ifndef WIKISTANCE_ALIGN_H_
#define WIKISTANCE_ALIGN_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wikistance/common.h"
#include "wikistance/ingest.h"
#include "wikistance/policies.h"

namespace wikistance {

// Language links per (language, local title).
using InterwikiTable = std::map<std::pair<Language, std::string>, LanguageLinks>;

struct InterwikiEdge {
  Language from_language = Language::kEn;
  std::string from_title;
  Language to_language = Language::kEn;
  std::string to_title;
};

// Curated edge edits, one per line, tab separated:
//   cut<TAB>en:<title><TAB>de:<title>
//   link<TAB>de:<title><TAB>tr:<title>
struct AlignmentOverrides {
  std::vector<InterwikiEdge> cut;
  std::vector<InterwikiEdge> link;

  static AlignmentOverrides parse(std::string_view text,
                                  const std::string &source = "<overrides>");
  static AlignmentOverrides load(const std::string &path);
};

struct SupersetEntry {
  int id = 0;
  std::string display_title;
  std::map<Language, std::string> members;
};

class PolicyAlignment {
 public:
  const std::vector<SupersetEntry> &entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

  // Throws UnknownPolicy for titles outside every registry.
  int project(Language lang, const std::string &local_title) const;

  Json to_json() const;
  static PolicyAlignment from_json(const Json &j);

 private:
  friend PolicyAlignment align(const std::vector<PolicyRegistry> &,
                               const InterwikiTable &,
                               const AlignmentOverrides &);
  void index();

  std::vector<SupersetEntry> entries_;
  std::map<std::pair<Language, std::string>, int> projection_;
};

// Registries must cover distinct languages. Throws ConflictingLinks when a
// component would hold two titles of one language.
PolicyAlignment align(const std::vector<PolicyRegistry> &registries,
                      const InterwikiTable &interwiki,
                      const AlignmentOverrides &overrides = {});

}  // namespace wikistance

#endif  // WIKISTANCE_ALIGN_H_
