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

#include "wikistance/ingest.h"

#include <curl/curl.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "wikistance/text.h"

namespace wikistance {

namespace fs = std::filesystem;

namespace {

constexpr int kMinYear = 2005;
constexpr int kMaxYear = 2022;

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string replace_year(std::string pattern, int year) {
  const std::string token = "{year}";
  size_t pos;
  while ((pos = pattern.find(token)) != std::string::npos) {
    pattern.replace(pos, token.size(), std::to_string(year));
  }
  return pattern;
}

std::string join_titles(const std::vector<std::string> &titles, size_t begin,
                        size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) out += '|';
    out += titles[i];
  }
  return out;
}

std::string strip_fragment(const std::string &target) {
  size_t hash = target.find('#');
  return std::string(trim(hash == std::string::npos ? target
                                                     : target.substr(0, hash)));
}

// Maps requested titles through the API's "normalized" list.
std::map<std::string, std::string> normalized_map(const Json &query) {
  std::map<std::string, std::string> out;
  if (!query.contains("normalized")) return out;
  for (const Json &n : query["normalized"]) {
    out[n.at("from").get<std::string>()] = n.at("to").get<std::string>();
  }
  return out;
}

const Json &query_of(const Json &response) {
  if (!response.is_object() || !response.contains("query") ||
      !response["query"].is_object()) {
    throw_error(ErrorKind::kNetwork, "MalformedResponse",
                "response has no query object");
  }
  return response["query"];
}

std::vector<std::string> transcluded_titles(const std::string &wikitext,
                                            const std::string &prefix) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  const std::string want = normalize_title(prefix);
  size_t pos = 0;
  while ((pos = wikitext.find("{{", pos)) != std::string::npos) {
    size_t close = wikitext.find("}}", pos + 2);
    if (close == std::string::npos) break;
    std::string inner = wikitext.substr(pos + 2, close - pos - 2);
    pos = close + 2;
    if (inner.find('|') != std::string::npos ||
        inner.find('{') != std::string::npos) {
      continue;
    }
    std::string title = normalize_title(trim(inner));
    if (title.size() <= want.size() || title.compare(0, want.size(), want)) {
      continue;
    }
    if (seen.insert(title).second) out.push_back(title);
  }
  return out;
}

}  // namespace

// --- WikiSource -------------------------------------------------------------

WikiSource WikiSource::defaults(Language lang) {
  WikiSource s;
  s.language = lang;
  switch (lang) {
    case Language::kEn:
      s.api_endpoint = "https://en.wikipedia.org/w/api.php";
      s.archive_root = "Wikipedia:Articles for deletion";
      s.project_namespace = "Wikipedia";
      s.list_prefix = "Articles for deletion/Log/{year} ";
      s.transclusion_prefix = "Wikipedia:Articles for deletion/";
      s.first_year = 2005;
      break;
    case Language::kDe:
      s.api_endpoint = "https://de.wikipedia.org/w/api.php";
      s.archive_root = "Wikipedia:Löschkandidaten";
      s.project_namespace = "Wikipedia";
      s.list_prefix = "Löschkandidaten/";
      s.title_year_pattern =
          "^Wikipedia:Löschkandidaten/[0-9]{1,2}\\. [^ ]+ {year}$";
      s.first_year = 2005;
      break;
    case Language::kTr:
      s.api_endpoint = "https://tr.wikipedia.org/w/api.php";
      s.archive_root = "Vikipedi:Silinmeye aday sayfalar";
      s.project_namespace = "Vikipedi";
      s.list_prefix = "Silinmeye aday sayfalar/Kayıtlar/{year}";
      s.transclusion_prefix = "Vikipedi:Silinmeye aday sayfalar/";
      s.first_year = 2006;
      break;
  }
  s.last_year = kMaxYear;
  return s;
}

WikiSource WikiSource::from_json(Language lang, const Json &config) {
  WikiSource s = defaults(lang);
  s.api_endpoint = config.value("api_endpoint", s.api_endpoint);
  s.archive_root = config.value("archive_root", s.archive_root);
  s.project_namespace = config.value("project_namespace", s.project_namespace);
  s.list_prefix = config.value("list_prefix", s.list_prefix);
  s.title_year_pattern =
      config.value("title_year_pattern", s.title_year_pattern);
  s.transclusion_prefix =
      config.value("transclusion_prefix", s.transclusion_prefix);
  s.first_year = config.value("first_year", s.first_year);
  s.last_year = config.value("last_year", s.last_year);
  if (s.archive_root.empty()) {
    throw_error(ErrorKind::kConfig, "InvalidSource",
                "archive_root must be non-empty");
  }
  return s;
}

// --- CachedPage -------------------------------------------------------------

Json CachedPage::to_json() const {
  return Json{{"title", title},
              {"lang", std::string(language_code(language))},
              {"wikitext", wikitext},
              {"revision_id", revision_id},
              {"fetched_at", fetched_at}};
}

CachedPage CachedPage::from_json(const Json &j) {
  CachedPage p;
  p.title = j.at("title").get<std::string>();
  auto lang = parse_language(j.at("lang").get<std::string>());
  if (!lang) {
    throw_error(ErrorKind::kData, "SchemaViolation", "bad cached language");
  }
  p.language = *lang;
  p.wikitext = j.at("wikitext").get<std::string>();
  p.revision_id = j.at("revision_id").get<int64_t>();
  p.fetched_at = j.value("fetched_at", "");
  if (p.revision_id < 0) {
    throw_error(ErrorKind::kData, "SchemaViolation", "negative revision id");
  }
  return p;
}

// --- CurlTransport ----------------------------------------------------------

namespace {

size_t write_body(char *data, size_t size, size_t n, void *user) {
  static_cast<std::string *>(user)->append(data, size * n);
  return size * n;
}

size_t read_header(char *data, size_t size, size_t n, void *user) {
  std::string line(data, size * n);
  if (starts_with_ci(line, "retry-after:")) {
    *static_cast<long *>(user) =
        std::strtol(line.c_str() + std::string("retry-after:").size(),
                    nullptr, 10);
  }
  return size * n;
}

void curl_init_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
}

}  // namespace

CurlTransport::CurlTransport(std::chrono::milliseconds min_interval,
                             int max_retries)
    : min_interval_(min_interval), max_retries_(max_retries) {
  curl_init_once();
}

CurlTransport::Endpoint &CurlTransport::endpoint(const std::string &url) {
  std::lock_guard<std::mutex> lock(map_mu_);
  auto &slot = endpoints_[url];
  if (!slot) slot = std::make_unique<Endpoint>();
  return *slot;
}

Json CurlTransport::get(const WikiSource &source, const ApiParams &params) {
  Endpoint &ep = endpoint(source.api_endpoint);
  std::lock_guard<std::mutex> in_flight(ep.mu);

  std::unique_ptr<CURL, void (*)(CURL *)> curl(curl_easy_init(),
                                               curl_easy_cleanup);
  if (!curl) {
    throw_error(ErrorKind::kNetwork, "NetworkUnavailable", "curl init failed");
  }
  std::string url = source.api_endpoint + "?";
  bool first = true;
  for (const auto &[key, value] : params) {
    char *escaped = curl_easy_escape(curl.get(), value.c_str(),
                                     static_cast<int>(value.size()));
    if (!first) url += '&';
    url += key + "=" + escaped;
    curl_free(escaped);
    first = false;
  }

  for (int attempt = 0;; ++attempt) {
    auto wait = ep.last + min_interval_ - std::chrono::steady_clock::now();
    if (wait.count() > 0) std::this_thread::sleep_for(wait);

    std::string body;
    long retry_after = 0;
    curl_easy_setopt(curl.get(), CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl.get(), CURLOPT_USERAGENT,
                     "wikistance/0.1 (deletion discussion corpus builder)");
    curl_easy_setopt(curl.get(), CURLOPT_WRITEFUNCTION, write_body);
    curl_easy_setopt(curl.get(), CURLOPT_WRITEDATA, &body);
    curl_easy_setopt(curl.get(), CURLOPT_HEADERFUNCTION, read_header);
    curl_easy_setopt(curl.get(), CURLOPT_HEADERDATA, &retry_after);
    curl_easy_setopt(curl.get(), CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl.get(), CURLOPT_TIMEOUT, 60L);
    CURLcode rc = curl_easy_perform(curl.get());
    ep.last = std::chrono::steady_clock::now();
    if (rc != CURLE_OK) {
      throw_error(ErrorKind::kNetwork, "NetworkUnavailable",
                  std::string("request failed: ") + curl_easy_strerror(rc));
    }
    long status = 0;
    curl_easy_getinfo(curl.get(), CURLINFO_RESPONSE_CODE, &status);
    if (status == 429 || status == 503) {
      if (attempt >= max_retries_) {
        throw_error(ErrorKind::kNetwork, "RateLimited",
                    "rate limited by " + source.api_endpoint);
      }
      std::this_thread::sleep_for(
          std::chrono::seconds(std::clamp(retry_after, 1L, 120L)));
      continue;
    }
    if (status != 200) {
      throw_error(ErrorKind::kNetwork, "MalformedResponse",
                  "HTTP status " + std::to_string(status));
    }
    Json decoded = Json::parse(body, nullptr, false);
    if (decoded.is_discarded()) {
      throw_error(ErrorKind::kNetwork, "MalformedResponse",
                  "response is not JSON");
    }
    return decoded;
  }
}

// --- FixtureTransport -------------------------------------------------------

FixtureTransport::FixtureTransport(fs::path dir) : dir_(std::move(dir)) {}

const FixtureTransport::Wiki &FixtureTransport::wiki(Language lang) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = wikis_.find(lang);
  if (it != wikis_.end()) return it->second;
  Wiki w;
  fs::path path = dir_ / std::string(language_code(lang)) / "wiki.json";
  std::ifstream in(path);
  if (in) {
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) {
      throw_error(ErrorKind::kData, "MalformedResponse",
                  "fixture is not valid JSON: " + path.string());
    }
    w.project_namespace = j.value("project_namespace", "Wikipedia");
    const Json aliases = j.value("namespace_aliases", Json::object());
    for (auto &[alias, ns] : aliases.items()) {
      w.aliases[to_lower(alias, Language::kEn)] = ns.get<std::string>();
    }
    w.aliases[to_lower(w.project_namespace, Language::kEn)] =
        w.project_namespace;
    w.pages = j.value("pages", Json::object());
    const Json redirects = j.value("redirects", Json::object());
    for (auto &[from, to] : redirects.items()) {
      w.redirects[from] = to.get<std::string>();
    }
    w.langlinks = j.value("langlinks", Json::object());
  }
  return wikis_.emplace(lang, std::move(w)).first->second;
}

std::string FixtureTransport::normalize(const Wiki &w,
                                        const std::string &title) const {
  std::string t = normalize_title(title);
  size_t colon = t.find(':');
  if (colon != std::string::npos) {
    auto it = w.aliases.find(to_lower(t.substr(0, colon), Language::kEn));
    if (it != w.aliases.end()) {
      t = it->second + t.substr(colon);
      t = normalize_title(t);
    }
  }
  return t;
}

std::string FixtureTransport::page_text(Language lang, const Json &page) const {
  if (page.contains("text")) return page["text"].get<std::string>();
  fs::path path = dir_ / std::string(language_code(lang)) /
                  page.at("file").get<std::string>();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw_error(ErrorKind::kData, "MalformedResponse",
                "missing fixture file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json FixtureTransport::get(const WikiSource &source, const ApiParams &params) {
  const Wiki &w = wiki(source.language);
  auto param = [&](const std::string &key) -> std::string {
    auto it = params.find(key);
    return it == params.end() ? std::string() : it->second;
  };
  Json query = Json::object();
  Json response = Json::object();

  if (param("list") == "allpages") {
    std::string prefix = w.project_namespace + ":" + param("apprefix");
    std::vector<std::string> titles;
    for (auto &[title, page] : w.pages.items()) {
      if (title.compare(0, prefix.size(), prefix) == 0) titles.push_back(title);
    }
    std::sort(titles.begin(), titles.end());
    std::string from = param("apcontinue");
    size_t limit = 2;  // small page size exercises continuation
    Json list = Json::array();
    size_t i = 0;
    for (; i < titles.size(); ++i) {
      if (!from.empty() && titles[i] < from) continue;
      if (list.size() == limit) break;
      list.push_back({{"ns", 4}, {"title", titles[i]}});
    }
    query["allpages"] = list;
    if (i < titles.size()) {
      response["continue"] = {{"apcontinue", titles[i]}, {"continue", "-||"}};
    }
    response["query"] = query;
    return response;
  }

  std::vector<std::string> requested;
  {
    std::string joined = param("titles");
    size_t start = 0;
    while (!joined.empty()) {
      size_t bar = joined.find('|', start);
      requested.push_back(joined.substr(start, bar - start));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
  }

  Json pages = Json::array();
  if (!param("revids").empty()) {
    std::stringstream ss(param("revids"));
    std::string id;
    while (std::getline(ss, id, '|')) {
      int64_t revid = std::stoll(id);
      for (auto &[title, page] : w.pages.items()) {
        if (page.value("revid", int64_t{0}) != revid) continue;
        pages.push_back(
            {{"title", title},
             {"revisions",
              Json::array({{{"revid", revid},
                            {"timestamp", page.value("timestamp", "")},
                            {"slots",
                             {{"main",
                               {{"content",
                                 page_text(source.language, page)}}}}}}})}});
      }
    }
    query["pages"] = pages;
    response["query"] = query;
    return response;
  }

  Json normalized = Json::array();
  Json redirects = Json::array();
  std::set<std::string> emitted;
  for (const std::string &raw : requested) {
    std::string title = normalize(w, raw);
    if (title != raw) normalized.push_back({{"from", raw}, {"to", title}});
    if (param("redirects") == "1") {
      for (int hops = 0; hops < 5; ++hops) {
        auto it = w.redirects.find(title);
        if (it == w.redirects.end()) break;
        std::string target = normalize(w, it->second);
        redirects.push_back({{"from", title}, {"to", target}});
        title = target;
      }
    }
    if (!emitted.insert(title).second) continue;
    Json entry = {{"title", title}};
    bool is_redirect = w.redirects.count(title) > 0;
    if (!w.pages.contains(title) && !is_redirect) {
      entry["missing"] = true;
      pages.push_back(entry);
      continue;
    }
    if (param("prop") == "revisions") {
      if (is_redirect) {
        entry["revisions"] = Json::array(
            {{{"revid", 0},
              {"timestamp", ""},
              {"slots",
               {{"main",
                 {{"content", "#REDIRECT [[" + w.redirects.at(title) +
                                  "]]"}}}}}}});
      } else {
        const Json &page = w.pages[title];
        entry["revisions"] = Json::array(
            {{{"revid", page.value("revid", int64_t{0})},
              {"timestamp", page.value("timestamp", "")},
              {"slots",
               {{"main", {{"content", page_text(source.language, page)}}}}}}});
      }
    } else if (param("prop") == "langlinks") {
      Json links = Json::array();
      if (w.langlinks.contains(title)) {
        for (auto &[lang, foreign] : w.langlinks[title].items()) {
          links.push_back({{"lang", lang}, {"title", foreign}});
        }
      }
      entry["langlinks"] = links;
    }
    pages.push_back(entry);
  }
  if (!normalized.empty()) query["normalized"] = normalized;
  if (!redirects.empty()) query["redirects"] = redirects;
  query["pages"] = pages;
  response["query"] = query;
  return response;
}

// --- PageCache --------------------------------------------------------------

std::string encode_cache_name(const std::string &title) {
  static const char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : title) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xf]);
    }
  }
  if (out.size() > 200) {
    out = out.substr(0, 180) + "~" + hex64(fnv1a64(title));
  }
  return out;
}

fs::path default_cache_root() {
  const char *env = std::getenv("WIKISTANCE_CACHE");
  return env && *env ? fs::path(env) : fs::path("cache");
}

PageCache::PageCache(fs::path root) : root_(std::move(root)) {}

fs::path PageCache::page_path(Language lang, const std::string &title) const {
  return root_ / std::string(language_code(lang)) /
         (encode_cache_name(title) + ".json");
}

namespace {

std::optional<Json> read_json(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  return j;
}

void write_json_atomic(const fs::path &path, const Json &value) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  static std::atomic<uint64_t> counter{0};
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp."
           << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
           << counter++;
  fs::path tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw_error(ErrorKind::kData, "IoError",
                  "cannot write cache file " + tmp.string());
    }
    out << value.dump(1) << '\n';
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    throw_error(ErrorKind::kData, "IoError",
                "cannot rename cache file " + path.string());
  }
}

}  // namespace

std::optional<CachedPage> PageCache::load_page(Language lang,
                                               const std::string &title) const {
  auto j = read_json(page_path(lang, title));
  if (!j) return std::nullopt;
  return CachedPage::from_json(*j);
}

void PageCache::store_page(const CachedPage &page) const {
  write_json_atomic(page_path(page.language, page.title), page.to_json());
}

std::optional<Json> PageCache::load_entry(Language lang,
                                          const std::string &kind,
                                          const std::string &key) const {
  return read_json(root_ / std::string(language_code(lang)) / kind /
                   (encode_cache_name(key) + ".json"));
}

void PageCache::store_entry(Language lang, const std::string &kind,
                            const std::string &key, const Json &value) const {
  write_json_atomic(root_ / std::string(language_code(lang)) / kind /
                        (encode_cache_name(key) + ".json"),
                    value);
}

// --- SnapshotManifest -------------------------------------------------------

std::optional<int64_t> SnapshotManifest::pinned(Language lang,
                                                const std::string &title) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto l = pins_.find(lang);
  if (l == pins_.end()) return std::nullopt;
  auto t = l->second.find(title);
  if (t == l->second.end()) return std::nullopt;
  return t->second;
}

void SnapshotManifest::record(Language lang, const std::string &title,
                              int64_t revision_id) {
  std::lock_guard<std::mutex> lock(mu_);
  pins_[lang][title] = revision_id;
}

size_t SnapshotManifest::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  size_t n = 0;
  for (const auto &[lang, titles] : pins_) n += titles.size();
  return n;
}

Json SnapshotManifest::to_json() const {
  std::lock_guard<std::mutex> lock(mu_);
  Json j = Json::object();
  for (const auto &[lang, titles] : pins_) {
    Json &entry = j[std::string(language_code(lang))] = Json::object();
    for (const auto &[title, revid] : titles) entry[title] = revid;
  }
  return j;
}

SnapshotManifest::SnapshotManifest(const SnapshotManifest &other) {
  std::lock_guard<std::mutex> lock(other.mu_);
  pins_ = other.pins_;
}

SnapshotManifest &SnapshotManifest::operator=(const SnapshotManifest &other) {
  if (this == &other) return *this;
  std::scoped_lock lock(mu_, other.mu_);
  pins_ = other.pins_;
  return *this;
}

SnapshotManifest SnapshotManifest::from_json(const Json &j) {
  SnapshotManifest m;
  for (auto &[code, titles] : j.items()) {
    auto lang = parse_language(code);
    if (!lang) {
      throw_error(ErrorKind::kConfig, "SchemaViolation",
                  "unknown language in manifest: " + code);
    }
    for (auto &[title, revid] : titles.items()) {
      m.pins_[*lang][title] = revid.get<int64_t>();
    }
  }
  return m;
}

SnapshotManifest SnapshotManifest::load(const fs::path &path) {
  auto j = read_json(path);
  if (!j) {
    throw_error(ErrorKind::kConfig, "IoError",
                "cannot read manifest " + path.string());
  }
  return from_json(*j);
}

void SnapshotManifest::save(const fs::path &path) const {
  write_json_atomic(path, to_json());
}

// --- MediaWikiClient --------------------------------------------------------

MediaWikiClient::MediaWikiClient(PageCache cache,
                                 std::shared_ptr<Transport> transport,
                                 ClientOptions options)
    : cache_(std::move(cache)),
      transport_(std::move(transport)),
      options_(options) {
  if (options_.batch_size == 0) options_.batch_size = 1;
}

size_t MediaWikiClient::request_count() const {
  std::lock_guard<std::mutex> lock(count_mu_);
  return requests_;
}

Json MediaWikiClient::request(const WikiSource &source, ApiParams params) {
  if (options_.offline || !transport_) {
    throw_error(ErrorKind::kNetwork, "NetworkUnavailable",
                "offline and not cached: " + params["titles"] +
                    params["apprefix"]);
  }
  params["action"] = "query";
  params["format"] = "json";
  params["formatversion"] = "2";
  {
    std::lock_guard<std::mutex> lock(count_mu_);
    ++requests_;
  }
  Json response = transport_->get(source, params);
  if (response.contains("error")) {
    std::string code = response["error"].value("code", "unknown");
    if (code == "maxlag" || code == "ratelimited") {
      throw_error(ErrorKind::kNetwork, "RateLimited", "API error " + code);
    }
    throw_error(ErrorKind::kNetwork, "MalformedResponse",
                "API error " + code + ": " +
                    response["error"].value("info", ""));
  }
  return response;
}

std::vector<std::string> MediaWikiClient::list_prefix(
    const WikiSource &source, const std::string &prefix) {
  if (auto cached = cache_.load_entry(source.language, "lists", prefix)) {
    return cached->at("titles").get<std::vector<std::string>>();
  }
  std::vector<std::string> titles;
  std::string cont;
  for (;;) {
    ApiParams params = {{"list", "allpages"},
                        {"apnamespace", "4"},
                        {"apprefix", prefix},
                        {"aplimit", "max"}};
    if (!cont.empty()) params["apcontinue"] = cont;
    Json response = request(source, params);
    const Json &query = query_of(response);
    if (!query.contains("allpages") || !query["allpages"].is_array()) {
      throw_error(ErrorKind::kNetwork, "MalformedResponse",
                  "allpages listing missing");
    }
    for (const Json &p : query["allpages"]) {
      titles.push_back(p.at("title").get<std::string>());
    }
    if (!response.contains("continue")) break;
    cont = response["continue"].value("apcontinue", "");
    if (cont.empty()) break;
  }
  std::sort(titles.begin(), titles.end());
  cache_.store_entry(source.language, "lists", prefix,
                     Json{{"prefix", prefix}, {"titles", titles}});
  return titles;
}

std::vector<std::optional<CachedPage>> MediaWikiClient::get_pages(
    const WikiSource &source, const std::vector<std::string> &titles) {
  std::vector<std::optional<CachedPage>> out(titles.size());
  std::vector<std::string> by_title;
  std::vector<int64_t> by_revid;
  std::map<std::string, std::vector<size_t>> slots;
  for (size_t i = 0; i < titles.size(); ++i) {
    const std::string &title = titles[i];
    auto pin = manifest_.pinned(source.language, title);
    auto cached = cache_.load_page(source.language, title);
    if (cached && (!pin || cached->revision_id == *pin)) {
      out[i] = std::move(cached);
      continue;
    }
    if (!pin && cache_.load_entry(source.language, "missing", title)) continue;
    if (slots[title].empty()) {
      if (pin) {
        by_revid.push_back(*pin);
      } else {
        by_title.push_back(title);
      }
    }
    slots[title].push_back(i);
  }

  auto store = [&](const std::string &title, const Json &rev) {
    CachedPage page;
    page.title = title;
    page.language = source.language;
    page.revision_id = rev.value("revid", int64_t{0});
    page.wikitext = rev.at("slots").at("main").value("content", "");
    page.fetched_at = now_iso8601();
    cache_.store_page(page);
    manifest_.record(source.language, title, page.revision_id);
    for (size_t i : slots[title]) out[i] = page;
  };

  for (size_t b = 0; b < by_title.size(); b += options_.batch_size) {
    size_t e = std::min(by_title.size(), b + options_.batch_size);
    Json response = request(
        source, {{"prop", "revisions"},
                 {"rvprop", "content|ids|timestamp"},
                 {"rvslots", "main"},
                 {"titles", join_titles(by_title, b, e)}});
    const Json &query = query_of(response);
    auto norm = normalized_map(query);
    const Json page_list = query.value("pages", Json::array());
    std::map<std::string, const Json *> pages;
    for (const Json &p : page_list) {
      pages[p.at("title").get<std::string>()] = &p;
    }
    for (size_t i = b; i < e; ++i) {
      const std::string &title = by_title[i];
      auto n = norm.find(title);
      auto p = pages.find(n == norm.end() ? title : n->second);
      if (p == pages.end()) {
        throw_error(ErrorKind::kNetwork, "MalformedResponse",
                    "no page entry for " + title);
      }
      const Json &page = *p->second;
      if (page.value("missing", false) || !page.contains("revisions") ||
          page["revisions"].empty()) {
        cache_.store_entry(source.language, "missing", title, Json{{"title", title}});
        continue;
      }
      store(title, page["revisions"][0]);
    }
  }

  if (!by_revid.empty()) {
    std::map<int64_t, std::string> title_of;
    for (const auto &[title, idx] : slots) {
      auto pin = manifest_.pinned(source.language, title);
      if (pin) title_of[*pin] = title;
    }
    for (size_t b = 0; b < by_revid.size(); b += options_.batch_size) {
      size_t e = std::min(by_revid.size(), b + options_.batch_size);
      std::string ids;
      for (size_t i = b; i < e; ++i) {
        if (i > b) ids += '|';
        ids += std::to_string(by_revid[i]);
      }
      Json response = request(source, {{"prop", "revisions"},
                                       {"rvprop", "content|ids|timestamp"},
                                       {"rvslots", "main"},
                                       {"revids", ids}});
      for (const Json &p : query_of(response).value("pages", Json::array())) {
        for (const Json &rev : p.value("revisions", Json::array())) {
          auto t = title_of.find(rev.value("revid", int64_t{-1}));
          if (t != title_of.end()) store(t->second, rev);
        }
      }
    }
  }
  return out;
}

std::vector<CachedPage> MediaWikiClient::fetch_pages(
    const WikiSource &source, const std::vector<std::string> &titles) {
  auto pages = get_pages(source, titles);
  std::vector<CachedPage> out;
  out.reserve(pages.size());
  for (size_t i = 0; i < pages.size(); ++i) {
    if (!pages[i]) {
      throw_error(ErrorKind::kData, "MissingPage",
                  "page does not exist: " + titles[i]);
    }
    out.push_back(std::move(*pages[i]));
  }
  return out;
}

std::vector<CachedPage> MediaWikiClient::fetch_archive_pages(
    const WikiSource &source, int from_year, int to_year) {
  if (from_year > to_year || from_year < kMinYear || to_year > kMaxYear) {
    throw_error(ErrorKind::kConfig, "InvalidRange",
                "year range must lie within [2005, 2022]");
  }
  std::vector<CachedPage> out;
  int first = std::max(from_year, source.first_year);
  int last = std::min(to_year, source.last_year);
  for (int year = first; year <= last; ++year) {
    std::vector<std::string> index =
        list_prefix(source, replace_year(source.list_prefix, year));
    if (!source.title_year_pattern.empty()) {
      std::regex pattern(replace_year(source.title_year_pattern, year));
      std::erase_if(index, [&](const std::string &t) {
        return !std::regex_search(t, pattern);
      });
    }
    auto index_pages = get_pages(source, index);
    for (size_t i = 0; i < index.size(); ++i) {
      if (!index_pages[i]) {
        emit_diagnostic("warning", "missing_archive_page",
                        {{"lang", std::string(language_code(source.language))},
                         {"title", index[i]}});
        continue;
      }
      if (source.transclusion_prefix.empty()) {
        out.push_back(std::move(*index_pages[i]));
        continue;
      }
      auto subtitles = transcluded_titles(index_pages[i]->wikitext,
                                          source.transclusion_prefix);
      auto subpages = get_pages(source, subtitles);
      for (size_t s = 0; s < subtitles.size(); ++s) {
        if (!subpages[s]) {
          emit_diagnostic(
              "warning", "missing_archive_page",
              {{"lang", std::string(language_code(source.language))},
               {"title", subtitles[s]}});
          continue;
        }
        out.push_back(std::move(*subpages[s]));
      }
    }
  }
  return out;
}

std::vector<TitleResolution> MediaWikiClient::resolve_titles(
    const WikiSource &source, const std::vector<std::string> &targets) {
  std::vector<TitleResolution> out(targets.size());
  std::vector<std::string> pending;
  std::set<std::string> pending_set;
  for (size_t i = 0; i < targets.size(); ++i) {
    out[i].raw_target = targets[i];
    if (targets[i].empty()) {
      throw_error(ErrorKind::kConfig, "InvalidArgument",
                  "resolve_titles: empty target");
    }
    if (auto cached = cache_.load_entry(source.language, "resolve",
                                        targets[i])) {
      if (!(*cached)["resolved"].is_null()) {
        out[i].resolved_title = (*cached)["resolved"].get<std::string>();
      }
      continue;
    }
    if (pending_set.insert(targets[i]).second) pending.push_back(targets[i]);
  }

  std::map<std::string, std::optional<std::string>> resolved;
  std::vector<std::string> queries;
  for (const std::string &t : pending) queries.push_back(strip_fragment(t));
  for (size_t b = 0; b < pending.size(); b += options_.batch_size) {
    size_t e = std::min(pending.size(), b + options_.batch_size);
    std::vector<std::string> batch;
    for (size_t i = b; i < e; ++i) {
      if (!queries[i].empty()) batch.push_back(queries[i]);
    }
    std::map<std::string, std::string> norm, redirects;
    std::map<std::string, bool> exists;
    if (!batch.empty()) {
      Json response =
          request(source, {{"titles", join_titles(batch, 0, batch.size())},
                           {"redirects", "1"}});
      const Json &query = query_of(response);
      norm = normalized_map(query);
      for (const Json &r : query.value("redirects", Json::array())) {
        redirects[r.at("from").get<std::string>()] =
            r.at("to").get<std::string>();
      }
      for (const Json &p : query.value("pages", Json::array())) {
        exists[p.at("title").get<std::string>()] =
            !p.value("missing", false) && !p.value("invalid", false);
      }
    }
    for (size_t i = b; i < e; ++i) {
      std::optional<std::string> result;
      if (!queries[i].empty()) {
        std::string t = queries[i];
        if (auto n = norm.find(t); n != norm.end()) t = n->second;
        for (int hops = 0; hops < 10; ++hops) {
          auto r = redirects.find(t);
          if (r == redirects.end()) break;
          t = r->second;
        }
        auto ex = exists.find(t);
        if (ex != exists.end() && ex->second) result = t;
      }
      resolved[pending[i]] = result;
      cache_.store_entry(
          source.language, "resolve", pending[i],
          Json{{"raw", pending[i]},
               {"resolved", result ? Json(*result) : Json(nullptr)}});
    }
  }
  for (auto &r : out) {
    auto it = resolved.find(r.raw_target);
    if (it != resolved.end()) r.resolved_title = it->second;
  }
  return out;
}

std::map<std::string, LanguageLinks> MediaWikiClient::fetch_interwiki(
    const WikiSource &source, const std::vector<std::string> &titles) {
  std::map<std::string, LanguageLinks> out;
  std::vector<std::string> pending;
  auto decode = [&](const Json &links) {
    LanguageLinks result;
    for (auto &[code, title] : links.items()) {
      auto lang = parse_language(code);
      if (lang && *lang != source.language) {
        result[*lang] = title.get<std::string>();
      }
    }
    return result;
  };
  for (const std::string &title : titles) {
    if (auto cached = cache_.load_entry(source.language, "langlinks", title)) {
      out[title] = decode(cached->at("links"));
    } else if (std::find(pending.begin(), pending.end(), title) ==
               pending.end()) {
      pending.push_back(title);
    }
  }
  for (size_t b = 0; b < pending.size(); b += options_.batch_size) {
    size_t e = std::min(pending.size(), b + options_.batch_size);
    std::map<std::string, Json> links;
    std::map<std::string, std::string> norm;
    std::set<std::string> missing;
    std::string cont;
    for (;;) {
      ApiParams params = {{"prop", "langlinks"},
                          {"lllimit", "max"},
                          {"titles", join_titles(pending, b, e)}};
      if (!cont.empty()) params["llcontinue"] = cont;
      Json response = request(source, params);
      const Json &query = query_of(response);
      for (auto &[from, to] : normalized_map(query)) norm[from] = to;
      for (const Json &p : query.value("pages", Json::array())) {
        std::string title = p.at("title").get<std::string>();
        if (p.value("missing", false)) missing.insert(title);
        Json &entry = links[title];
        if (!entry.is_object()) entry = Json::object();
        for (const Json &l : p.value("langlinks", Json::array())) {
          std::string code = l.at("lang").get<std::string>();
          if (code == "en" || code == "de" || code == "tr") {
            entry[code] = l.at("title").get<std::string>();
          }
        }
      }
      if (!response.contains("continue")) break;
      cont = response["continue"].value("llcontinue", "");
      if (cont.empty()) break;
    }
    for (size_t i = b; i < e; ++i) {
      const std::string &title = pending[i];
      auto n = norm.find(title);
      std::string key = n == norm.end() ? title : n->second;
      if (missing.count(key)) {
        throw_error(ErrorKind::kData, "MissingPage",
                    "page does not exist: " + title);
      }
      Json entry = links.count(key) ? links[key] : Json::object();
      cache_.store_entry(source.language, "langlinks", title,
                         Json{{"title", title}, {"links", entry}});
      out[title] = decode(entry);
    }
  }
  return out;
}

}  // namespace wikistance
