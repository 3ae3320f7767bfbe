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

// MediaWiki Action API client for deletion-discussion archives, policy pages
// and interlanguage links. Every response that matters is cached on disk
// under <cache>/<lang>/, so a populated cache supports fully offline runs.

#ifndef WIKISTANCE_INGEST_H_
#define WIKISTANCE_INGEST_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wikistance/common.h"

namespace wikistance {

// One language edition together with the rule used to enumerate its
// deletion-discussion archive.
//
// Archive traversal: all pages in the project namespace whose title starts
// with `list_prefix` (with "{year}" substituted) are listed. If
// `title_year_pattern` is set, a listed title is kept only when the regex
// (again with "{year}" substituted) matches it. If `transclusion_prefix` is
// set, each listed page is an index of transcluded discussion subpages and
// the subpages are returned in its place.
struct WikiSource {
  Language language = Language::kEn;
  std::string api_endpoint;
  std::string archive_root;
  std::string project_namespace;  // "Wikipedia", "Vikipedi"
  std::string list_prefix;
  std::string title_year_pattern;
  std::string transclusion_prefix;
  int first_year = 2005;
  int last_year = 2022;

  static WikiSource defaults(Language lang);
  // Overrides fields from a JSON object keyed by field name.
  static WikiSource from_json(Language lang, const Json &config);
};

struct CachedPage {
  std::string title;
  Language language = Language::kEn;
  std::string wikitext;
  std::string fetched_at;  // ISO-8601 UTC
  int64_t revision_id = 0;

  Json to_json() const;
  static CachedPage from_json(const Json &j);
  bool operator==(const CachedPage &) const = default;
};

struct TitleResolution {
  std::string raw_target;
  std::optional<std::string> resolved_title;

  bool operator==(const TitleResolution &) const = default;
};

// Interlanguage links of one page, restricted to en/de/tr.
using LanguageLinks = std::map<Language, std::string>;

using ApiParams = std::map<std::string, std::string>;

// Issues one Action API request and returns the decoded JSON body.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Json get(const WikiSource &source, const ApiParams &params) = 0;
};

// libcurl transport. Requests to one endpoint are serialized and spaced at
// least `min_interval` apart; HTTP 429 is retried after Retry-After.
class CurlTransport : public Transport {
 public:
  explicit CurlTransport(
      std::chrono::milliseconds min_interval = std::chrono::milliseconds(200),
      int max_retries = 3);
  Json get(const WikiSource &source, const ApiParams &params) override;

 private:
  struct Endpoint {
    std::mutex mu;
    std::chrono::steady_clock::time_point last{};
  };
  Endpoint &endpoint(const std::string &url);

  std::chrono::milliseconds min_interval_;
  int max_retries_;
  std::mutex map_mu_;
  std::map<std::string, std::unique_ptr<Endpoint>> endpoints_;
};

// Answers Action API queries from a recorded wiki snapshot on disk:
//   <dir>/<lang>/wiki.json
// {
//   "namespace_aliases": {"WP": "Wikipedia"},
//   "project_namespace": "Wikipedia",
//   "pages": {"<title>": {"revid": 1, "timestamp": "...",
//                          "text": "..." | "file": "<relative path>"}},
//   "redirects": {"<title>": "<target>"},
//   "langlinks": {"<title>": {"de": "<title>", ...}}
// }
// Supports list=allpages, prop=revisions, prop=langlinks and redirects=1
// with formatversion=2 response shapes.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(std::filesystem::path dir);
  Json get(const WikiSource &source, const ApiParams &params) override;

 private:
  struct Wiki {
    std::string project_namespace;
    std::map<std::string, std::string> aliases;  // lowercased alias -> ns
    Json pages = Json::object();
    std::map<std::string, std::string> redirects;
    Json langlinks = Json::object();
  };
  const Wiki &wiki(Language lang);
  std::string normalize(const Wiki &w, const std::string &title) const;
  std::string page_text(Language lang, const Json &page) const;

  std::filesystem::path dir_;
  std::mutex mu_;
  std::map<Language, Wiki> wikis_;
};

// On-disk cache. Pages live at <root>/<lang>/<percent-encoded title>.json;
// auxiliary responses (listings, resolutions, language links) live in
// subdirectories of <root>/<lang>/. Writes are atomic (temp + rename).
class PageCache {
 public:
  explicit PageCache(std::filesystem::path root);

  const std::filesystem::path &root() const { return root_; }
  std::optional<CachedPage> load_page(Language lang,
                                      const std::string &title) const;
  void store_page(const CachedPage &page) const;

  std::optional<Json> load_entry(Language lang, const std::string &kind,
                                 const std::string &key) const;
  void store_entry(Language lang, const std::string &kind,
                   const std::string &key, const Json &value) const;

  std::filesystem::path page_path(Language lang,
                                  const std::string &title) const;

 private:
  std::filesystem::path root_;
};

// Percent-encodes everything except RFC 3986 unreserved characters. Names
// longer than 200 bytes are truncated and suffixed with a hash.
std::string encode_cache_name(const std::string &title);

// Cache root from $WIKISTANCE_CACHE, falling back to "cache".
std::filesystem::path default_cache_root();

// Pins revision ids per (language, title) so rebuilds read a fixed snapshot.
class SnapshotManifest {
 public:
  SnapshotManifest() = default;
  SnapshotManifest(const SnapshotManifest &other);
  SnapshotManifest &operator=(const SnapshotManifest &other);

  std::optional<int64_t> pinned(Language lang, const std::string &title) const;
  void record(Language lang, const std::string &title, int64_t revision_id);
  size_t size() const;

  Json to_json() const;
  static SnapshotManifest from_json(const Json &j);
  static SnapshotManifest load(const std::filesystem::path &path);
  void save(const std::filesystem::path &path) const;

 private:
  mutable std::mutex mu_;
  std::map<Language, std::map<std::string, int64_t>> pins_;
};

struct ClientOptions {
  // Never touch the transport; cache misses fail with NetworkUnavailable.
  bool offline = false;
  size_t batch_size = 50;
};

class MediaWikiClient {
 public:
  MediaWikiClient(PageCache cache, std::shared_ptr<Transport> transport,
                  ClientOptions options = {});

  // Discussion archive pages for every year in [from_year, to_year],
  // clipped to the source's first year. Errors with InvalidRange outside
  // [2005, 2022].
  std::vector<CachedPage> fetch_archive_pages(const WikiSource &source,
                                              int from_year, int to_year);

  // Current (or pinned) revision of each title. Missing pages raise
  // MissingPage.
  std::vector<CachedPage> fetch_pages(const WikiSource &source,
                                      const std::vector<std::string> &titles);

  // Follows title normalization and redirects. Order-preserving; red links
  // resolve to nullopt.
  std::vector<TitleResolution> resolve_titles(
      const WikiSource &source, const std::vector<std::string> &targets);

  std::map<std::string, LanguageLinks> fetch_interwiki(
      const WikiSource &source, const std::vector<std::string> &titles);

  // Number of transport requests issued by this client.
  size_t request_count() const;

  SnapshotManifest &manifest() { return manifest_; }
  const PageCache &cache() const { return cache_; }

 private:
  Json request(const WikiSource &source, ApiParams params);
  std::vector<std::string> list_prefix(const WikiSource &source,
                                       const std::string &prefix);
  std::vector<std::optional<CachedPage>> get_pages(
      const WikiSource &source, const std::vector<std::string> &titles);

  PageCache cache_;
  std::shared_ptr<Transport> transport_;
  ClientOptions options_;
  SnapshotManifest manifest_;
  mutable std::mutex count_mu_;
  size_t requests_ = 0;
};

}  // namespace wikistance

#endif  // WIKISTANCE_INGEST_H_
