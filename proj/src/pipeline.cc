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

#include "wikistance/pipeline.h"

#include <filesystem>
#include <set>

#include "wikistance/labels.h"
#include "wikistance/wikitext.h"

namespace wikistance {

namespace fs = std::filesystem;

size_t PipelineOptions::min_count_for(Language lang) const {
  auto it = min_count.find(lang);
  return it != min_count.end() ? it->second : default_min_count(lang);
}

WikiSource PipelineOptions::source_for(Language lang) const {
  auto it = sources.find(lang);
  return it != sources.end() ? it->second : WikiSource::defaults(lang);
}

std::string PipelineOptions::data_path(const std::string &relative) const {
  return (data_root.empty() ? data_dir() : data_root) + "/" + relative;
}

LanguageIngest ingest_language(MediaWikiClient &client,
                               const PipelineOptions &options, Language lang) {
  const WikiSource source = options.source_for(lang);
  const std::string code(language_code(lang));
  LanguageIngest out;

  for (const CachedPage &page :
       client.fetch_archive_pages(source, options.from_year, options.to_year)) {
    for (RawDiscussion &d : parse_archive(page)) {
      out.discussions.push_back(std::move(d));
    }
  }

  std::set<std::string> keys;
  for (const RawDiscussion &d : out.discussions) {
    for (const RawComment &c : d.comments) {
      for (const std::string &t : c.policy_targets) {
        std::string key = policy_link_key(t);
        if (!key.empty()) keys.insert(key);
      }
    }
  }
  std::vector<std::string> targets(keys.begin(), keys.end());
  size_t red_links = 0;
  for (const TitleResolution &r : client.resolve_titles(source, targets)) {
    if (r.resolved_title) {
      out.redirect_map[r.raw_target] = *r.resolved_title;
    } else {
      ++red_links;
    }
  }
  if (red_links) {
    emit_diagnostic("info", "UnresolvedTargets", {{"lang", code}, {"count", red_links}});
  }

  out.curation = PolicyCuration::load(
      lang, options.data_path("policies/" + code + ".curation"));
  for (const auto &[child, parent] : out.curation.merges) {
    try {
      CachedPage page = client.fetch_pages(source, {child}).front();
      out.policy_pages.push_back({page.title, lang, page.wikitext,
                                  out.curation.is_policy(page.title)});
    } catch (const Error &e) {
      if (e.code() != "MissingPage") throw;
      emit_diagnostic("warning", "MissingPolicyPage", {{"lang", code}, {"title", child}});
    }
  }
  return out;
}

BuildOutput build_corpus(MediaWikiClient &client, const PipelineOptions &options) {
  options.plan.validate();
  if (options.languages.empty()) {
    throw_error(ErrorKind::kConfig, "InvalidArgument", "no languages requested");
  }
  BuildOutput out;
  std::map<Language, LanguageIngest> ingested;
  InterwikiTable interwiki;
  std::vector<PolicyRegistry> registries;

  for (Language lang : options.languages) {
    LanguageIngest in = ingest_language(client, options, lang);
    RegistryInput reg_in;
    reg_in.language = lang;
    reg_in.curation = in.curation;
    reg_in.redirect_map = in.redirect_map;
    reg_in.pages = in.policy_pages;
    reg_in.min_count = options.min_count_for(lang);
    for (const RawDiscussion &d : in.discussions) {
      for (const RawComment &c : d.comments) reg_in.comment_targets.push_back(c.policy_targets);
    }
    PolicyRegistry reg = build_registry(reg_in);

    if (options.languages.size() > 1 && !reg.canonical.empty()) {
      std::vector<std::string> titles(reg.canonical.begin(), reg.canonical.end());
      for (auto &[title, links] :
           client.fetch_interwiki(options.source_for(lang), titles)) {
        interwiki[{lang, title}] = links;
      }
    }
    registries.push_back(reg);
    out.registries[lang] = std::move(reg);
    ingested[lang] = std::move(in);
  }

  AlignmentOverrides overrides;
  if (!options.alignment_overrides.empty()) {
    overrides = AlignmentOverrides::load(options.alignment_overrides);
  }
  out.alignment = align(registries, interwiki, overrides);

  for (Language lang : options.languages) {
    const std::string code(language_code(lang));
    StanceLexicon lexicon =
        load_lexicon(lang, options.data_path("lexicons/stance.tsv"));
    TopicOverrides topics;
    const std::string topic_path = options.data_path("topics/" + code + ".overrides");
    if (fs::exists(topic_path)) topics = load_topic_overrides(topic_path);

    BuildContext ctx;
    ctx.language = lang;
    ctx.lexicon = &lexicon;
    ctx.registry = &out.registries.at(lang);
    ctx.alignment = &out.alignment;
    ctx.topics = &topics;
    ctx.keep_raw = options.keep_raw;
    BuildResult result = build_records(ingested.at(lang).discussions, ctx);
    for (CorpusRecord &r : result.records) out.records.push_back(std::move(r));
    result.records.clear();
    out.per_language[lang] = std::move(result);
  }

  assign_splits(out.records, options.plan);
  std::map<Language, size_t> totals;
  for (const auto &[lang, result] : out.per_language) totals[lang] = result.stance_comments;
  out.stats = compute_stats(out.records, totals);
  return out;
}

}  // namespace wikistance
