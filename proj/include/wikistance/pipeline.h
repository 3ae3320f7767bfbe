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

// End-to-end corpus construction: fetch, parse, resolve, curate, align,
// assemble, split.

#ifndef WIKISTANCE_PIPELINE_H_
#define WIKISTANCE_PIPELINE_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wikistance/align.h"
#include "wikistance/corpus.h"
#include "wikistance/ingest.h"
#include "wikistance/policies.h"

namespace wikistance {

struct PipelineOptions {
  std::vector<Language> languages;
  int from_year = 2005;
  int to_year = 2022;
  SplitPlan plan;
  // Missing entries fall back to default_min_count().
  std::map<Language, size_t> min_count;
  // Missing entries fall back to WikiSource::defaults().
  std::map<Language, WikiSource> sources;
  // Directory with lexicons/, policies/ and topics/; empty means data_dir().
  std::string data_root;
  // Optional alignment overrides file.
  std::string alignment_overrides;
  bool keep_raw = true;

  size_t min_count_for(Language lang) const;
  WikiSource source_for(Language lang) const;
  std::string data_path(const std::string &relative) const;
};

struct LanguageIngest {
  std::vector<RawDiscussion> discussions;
  std::map<std::string, std::string> redirect_map;
  std::vector<PolicyPage> policy_pages;
  PolicyCuration curation;
};

struct BuildOutput {
  std::map<Language, PolicyRegistry> registries;
  PolicyAlignment alignment;
  std::vector<CorpusRecord> records;
  std::map<Language, BuildResult> per_language;  // records moved out
  DatasetStats stats;
};

// Fetches and parses one language's archives, resolves every policy link
// target and loads the pages named by the curation file's merge edges.
LanguageIngest ingest_language(MediaWikiClient &client,
                               const PipelineOptions &options, Language lang);

// Runs every stage for all requested languages. Records are ordered by
// language then archive order.
BuildOutput build_corpus(MediaWikiClient &client, const PipelineOptions &options);

}  // namespace wikistance

#endif  // WIKISTANCE_PIPELINE_H_
