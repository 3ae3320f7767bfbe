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

#include <gtest/gtest.h>
#include <httplib.h>

#include <thread>

#include "test_support.h"

namespace wikistance {
namespace {

using testing::fixture_path;
using testing::read_file;
using testing::TempDir;
using testing::throws_code;
using testing::write_file;

std::shared_ptr<Transport> pipeline_transport() {
  return std::make_shared<FixtureTransport>(fixture_path("pipeline"));
}

MediaWikiClient client_at(const std::filesystem::path &cache, bool offline = false,
                          std::shared_ptr<Transport> transport = pipeline_transport()) {
  ClientOptions options;
  options.offline = offline;
  return MediaWikiClient(PageCache(cache), std::move(transport), options);
}

std::vector<std::string> titles_of(const std::vector<CachedPage> &pages) {
  std::vector<std::string> out;
  for (const CachedPage &p : pages) out.push_back(p.title);
  return out;
}

TEST(ArchivePages, English2007) {
  TempDir cache;
  MediaWikiClient client = client_at(cache.path());
  auto pages = client.fetch_archive_pages(WikiSource::defaults(Language::kEn), 2007, 2007);
  EXPECT_EQ(titles_of(pages),
            (std::vector<std::string>{
                "Wikipedia:Articles for deletion/Foo Band",
                "Wikipedia:Articles for deletion/Scottish Nursery Nurses Strike"}));
  for (const CachedPage &p : pages) {
    EXPECT_FALSE(p.wikitext.empty());
    EXPECT_GT(p.revision_id, 0);
  }
}

TEST(ArchivePages, GermanDailyPagesAndTurkishStartYear) {
  TempDir cache;
  MediaWikiClient client = client_at(cache.path());
  auto de = client.fetch_archive_pages(WikiSource::defaults(Language::kDe), 2005, 2022);
  EXPECT_EQ(titles_of(de), (std::vector<std::string>{"Wikipedia:Löschkandidaten/5. Mai 2007"}));
  EXPECT_TRUE(client.fetch_archive_pages(WikiSource::defaults(Language::kTr), 2005, 2005)
                  .empty());
  EXPECT_EQ(client.fetch_archive_pages(WikiSource::defaults(Language::kTr), 2010, 2010).size(),
            2u);
  EXPECT_TRUE(client.fetch_archive_pages(WikiSource::defaults(Language::kEn), 2008, 2009)
                  .empty());
}

TEST(ArchivePages, InvalidRange) {
  TempDir cache;
  MediaWikiClient client = client_at(cache.path());
  const WikiSource en = WikiSource::defaults(Language::kEn);
  EXPECT_TRUE(throws_code([&] { client.fetch_archive_pages(en, 2004, 2007); }, "InvalidRange"));
  EXPECT_TRUE(throws_code([&] { client.fetch_archive_pages(en, 2007, 2023); }, "InvalidRange"));
  EXPECT_TRUE(throws_code([&] { client.fetch_archive_pages(en, 2008, 2007); }, "InvalidRange"));
}

TEST(ArchivePages, SecondCallServedFromCache) {
  TempDir cache;
  MediaWikiClient client = client_at(cache.path());
  const WikiSource en = WikiSource::defaults(Language::kEn);
  auto first = client.fetch_archive_pages(en, 2007, 2007);
  size_t requests = client.request_count();
  EXPECT_GT(requests, 0u);
  auto second = client.fetch_archive_pages(en, 2007, 2007);
  EXPECT_EQ(client.request_count(), requests);
  EXPECT_EQ(first, second);
}

TEST(ResolveTitles, Examples) {
  TempDir cache;
  MediaWikiClient client = client_at(cache.path());
  const WikiSource en = WikiSource::defaults(Language::kEn);
  auto r = client.resolve_titles(
      en, {"WP:NOTE", "Wikipedia:Notability", "WP:THIS-DOES-NOT-EXIST-XYZ",
           "wp:MUSIC#Bands", "Project:V"});
  ASSERT_EQ(r.size(), 5u);
  EXPECT_EQ(r[0].raw_target, "WP:NOTE");
  EXPECT_EQ(r[0].resolved_title, "Wikipedia:Notability");
  EXPECT_EQ(r[1].resolved_title, "Wikipedia:Notability");
  EXPECT_EQ(r[2].resolved_title, std::nullopt);
  EXPECT_EQ(r[3].resolved_title, "Wikipedia:Notability (music)");
  EXPECT_EQ(r[4].resolved_title, "Wikipedia:Verifiability");
}

TEST(ResolveTitles, IdempotentOnResolvedTitles) {
  TempDir cache;
  MediaWikiClient client = client_at(cache.path());
  const WikiSource tr = WikiSource::defaults(Language::kTr);
  auto first = client.resolve_titles(tr, {"VP:KD", "Vikipedi:REKLAM"});
  std::vector<std::string> resolved;
  for (const auto &r : first) resolved.push_back(*r.resolved_title);
  for (const auto &r : client.resolve_titles(tr, resolved)) {
    EXPECT_EQ(r.resolved_title, r.raw_target);
  }
}

TEST(Interwiki, Examples) {
  TempDir cache;
  MediaWikiClient client = client_at(cache.path());
  auto en = client.fetch_interwiki(WikiSource::defaults(Language::kEn),
                                   {"Wikipedia:Notability", "Wikipedia:Merging"});
  EXPECT_EQ(en.at("Wikipedia:Notability"),
            (LanguageLinks{{Language::kDe, "Wikipedia:Relevanzkriterien"},
                           {Language::kTr, "Vikipedi:Kayda değerlik"}}));
  EXPECT_TRUE(en.at("Wikipedia:Merging").empty());
  auto de = client.fetch_interwiki(WikiSource::defaults(Language::kDe),
                                   {"Wikipedia:Relevanzkriterien"});
  EXPECT_EQ(de.at("Wikipedia:Relevanzkriterien").at(Language::kEn), "Wikipedia:Notability");
}

TEST(Interwiki, FixtureWithoutLinksAndForeignLanguages) {
  TempDir dir;
  write_file(dir / "wiki/en/wiki.json", R"({
    "project_namespace": "Wikipedia",
    "namespace_aliases": {"WP": "Wikipedia"},
    "pages": {"Wikipedia:Notability": {"revid": 5, "text": "notability"},
              "Wikipedia:Verifiability": {"revid": 6, "text": "v"}},
    "langlinks": {"Wikipedia:Verifiability": {"fr": "Wikipédia:Vérifiabilité",
                                              "de": "Wikipedia:Belege"}}
  })");
  MediaWikiClient client = client_at(dir / "cache", false,
                                     std::make_shared<FixtureTransport>(dir / "wiki"));
  auto links = client.fetch_interwiki(WikiSource::defaults(Language::kEn),
                                      {"Wikipedia:Notability", "Wikipedia:Verifiability"});
  EXPECT_TRUE(links.at("Wikipedia:Notability").empty());
  EXPECT_EQ(links.at("Wikipedia:Verifiability"),
            (LanguageLinks{{Language::kDe, "Wikipedia:Belege"}}));
}

TEST(FetchPages, MissingPage) {
  TempDir cache;
  MediaWikiClient client = client_at(cache.path());
  EXPECT_TRUE(throws_code(
      [&] { client.fetch_pages(WikiSource::defaults(Language::kEn), {"Wikipedia:Nope"}); },
      "MissingPage"));
}

TEST(Offline, MissingPagesAreRemembered) {
  TempDir cache;
  const WikiSource en = WikiSource::defaults(Language::kEn);
  MediaWikiClient online = client_at(cache.path());
  EXPECT_TRUE(throws_code([&] { online.fetch_pages(en, {"Wikipedia:Nope"}); }, "MissingPage"));
  MediaWikiClient offline = client_at(cache.path(), true);
  EXPECT_TRUE(throws_code([&] { offline.fetch_pages(en, {"Wikipedia:Nope"}); }, "MissingPage"));
  EXPECT_EQ(offline.request_count(), 0u);
}

TEST(Offline, PopulatedCacheNeedsNoTransport) {
  TempDir cache;
  const WikiSource en = WikiSource::defaults(Language::kEn);
  {
    MediaWikiClient online = client_at(cache.path());
    online.fetch_archive_pages(en, 2007, 2007);
    online.resolve_titles(en, {"WP:NOTE", "WP:GONE"});
    online.fetch_interwiki(en, {"Wikipedia:Notability"});
  }
  MediaWikiClient offline = client_at(cache.path(), true);
  EXPECT_EQ(offline.fetch_archive_pages(en, 2007, 2007).size(), 2u);
  auto r = offline.resolve_titles(en, {"WP:NOTE", "WP:GONE"});
  EXPECT_EQ(r[0].resolved_title, "Wikipedia:Notability");
  EXPECT_EQ(r[1].resolved_title, std::nullopt);
  EXPECT_EQ(offline.fetch_interwiki(en, {"Wikipedia:Notability"}).size(), 1u);
  EXPECT_EQ(offline.request_count(), 0u);
  EXPECT_TRUE(throws_code([&] { offline.fetch_pages(en, {"Wikipedia:Verifiability"}); },
                          "NetworkUnavailable"));
}

TEST(Cache, PageRoundTripIsByteIdentical) {
  TempDir cache;
  PageCache pc(cache.path());
  auto pages = client_at(cache / "fetch").fetch_archive_pages(
      WikiSource::defaults(Language::kTr), 2010, 2010);
  ASSERT_FALSE(pages.empty());
  for (const CachedPage &p : pages) {
    pc.store_page(p);
    auto back = pc.load_page(Language::kTr, p.title);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, p);
  }
  EXPECT_FALSE(pc.load_page(Language::kTr, "Vikipedi:Yok").has_value());
  EXPECT_TRUE(std::filesystem::exists(pc.page_path(Language::kTr, pages[0].title)));
  EXPECT_EQ(pc.page_path(Language::kTr, "A/B").parent_path().filename(), "tr");
}

TEST(Cache, Entries) {
  TempDir cache;
  PageCache pc(cache.path());
  EXPECT_FALSE(pc.load_entry(Language::kDe, "lists", "x").has_value());
  pc.store_entry(Language::kDe, "lists", "x", Json{{"a", 1}});
  EXPECT_EQ(pc.load_entry(Language::kDe, "lists", "x"), Json({{"a", 1}}));
}

TEST(Cache, EncodeNames) {
  EXPECT_EQ(encode_cache_name("Wikipedia:Notability"), "Wikipedia%3ANotability");
  EXPECT_EQ(encode_cache_name("A b/c"), "A%20b%2Fc");
  EXPECT_EQ(encode_cache_name("ğ"), "%C4%9F");
  std::string long_title(300, 'x');
  std::string encoded = encode_cache_name(long_title);
  EXPECT_LE(encoded.size(), 200u);
  EXPECT_NE(encoded, encode_cache_name(long_title + "y"));
}

TEST(Manifest, PinsAndRoundTrips) {
  TempDir dir;
  SnapshotManifest m;
  EXPECT_EQ(m.pinned(Language::kEn, "A"), std::nullopt);
  m.record(Language::kEn, "A", 7);
  m.record(Language::kTr, "B", 9);
  EXPECT_EQ(m.pinned(Language::kEn, "A"), 7);
  EXPECT_EQ(m.size(), 2u);
  m.save(dir / "manifest.json");
  SnapshotManifest back = SnapshotManifest::load(dir / "manifest.json");
  EXPECT_EQ(back.to_json(), m.to_json());
  EXPECT_TRUE(throws_code([&] { SnapshotManifest::load(dir / "absent.json"); }, "IoError"));
}

TEST(Manifest, FetchRecordsRevisions) {
  TempDir cache;
  MediaWikiClient client = client_at(cache.path());
  client.fetch_pages(WikiSource::defaults(Language::kEn), {"Wikipedia:Notability"});
  EXPECT_TRUE(client.manifest().pinned(Language::kEn, "Wikipedia:Notability").has_value());
}

TEST(WikiSource, DefaultsAndOverrides) {
  EXPECT_EQ(WikiSource::defaults(Language::kTr).first_year, 2006);
  EXPECT_EQ(WikiSource::defaults(Language::kEn).first_year, 2005);
  EXPECT_EQ(WikiSource::defaults(Language::kTr).project_namespace, "Vikipedi");
  WikiSource s = WikiSource::from_json(Language::kDe, Json{{"first_year", 2010}});
  EXPECT_EQ(s.first_year, 2010);
  EXPECT_EQ(s.project_namespace, "Wikipedia");
  EXPECT_TRUE(throws_code(
      [] { WikiSource::from_json(Language::kEn, Json{{"archive_root", ""}}); },
      "InvalidSource"));
}

// Returns one fixed response for every request.
class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(Json response) : response_(std::move(response)) {}
  Json get(const WikiSource &, const ApiParams &) override { return response_; }

 private:
  Json response_;
};

TEST(Client, MalformedResponses) {
  TempDir cache;
  MediaWikiClient client =
      client_at(cache.path(), false, std::make_shared<ScriptedTransport>(Json{{"x", 1}}));
  EXPECT_TRUE(throws_code(
      [&] { client.fetch_archive_pages(WikiSource::defaults(Language::kEn), 2007, 2007); },
      "MalformedResponse"));
}

class LocalApi : public ::testing::Test {
 protected:
  void SetUp() override {
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  WikiSource source() const {
    WikiSource s = WikiSource::defaults(Language::kEn);
    s.api_endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/w/api.php";
    return s;
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST_F(LocalApi, RetriesAfterRateLimit) {
  std::atomic<int> calls{0};
  server_.Get("/w/api.php", [&](const httplib::Request &req, httplib::Response &res) {
    if (calls++ == 0) {
      res.status = 429;
      res.set_header("Retry-After", "1");
      return;
    }
    EXPECT_EQ(req.get_param_value("format"), "json");
    res.set_content(R"({"query":{"ok":true}})", "application/json");
  });
  CurlTransport transport(std::chrono::milliseconds(0));
  auto start = std::chrono::steady_clock::now();
  Json j = transport.get(source(), {{"action", "query"}, {"format", "json"}});
  EXPECT_EQ(j["query"]["ok"], true);
  EXPECT_EQ(calls.load(), 2);
  EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(900));
}

TEST_F(LocalApi, GivesUpAfterRetries) {
  server_.Get("/w/api.php", [](const httplib::Request &, httplib::Response &res) {
    res.status = 429;
    res.set_header("Retry-After", "1");
  });
  CurlTransport transport(std::chrono::milliseconds(0), 1);
  EXPECT_TRUE(throws_code([&] { transport.get(source(), {}); }, "RateLimited"));
}

TEST_F(LocalApi, SpacesRequests) {
  server_.Get("/w/api.php", [](const httplib::Request &, httplib::Response &res) {
    res.set_content(R"({"query":{}})", "application/json");
  });
  CurlTransport transport(std::chrono::milliseconds(200));
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 3; ++i) transport.get(source(), {});
  EXPECT_GE(std::chrono::steady_clock::now() - start, std::chrono::milliseconds(400));
}

TEST_F(LocalApi, RejectsNonJsonAndErrors) {
  server_.Get("/w/api.php", [](const httplib::Request &req, httplib::Response &res) {
    if (req.has_param("fail")) {
      res.status = 500;
      return;
    }
    res.set_content("<html>", "text/html");
  });
  CurlTransport transport(std::chrono::milliseconds(0));
  EXPECT_TRUE(throws_code([&] { transport.get(source(), {}); }, "MalformedResponse"));
  EXPECT_TRUE(throws_code([&] { transport.get(source(), {{"fail", "1"}}); },
                          "MalformedResponse"));
}

TEST(CurlTransportTest, UnreachableEndpoint) {
  WikiSource s = WikiSource::defaults(Language::kEn);
  s.api_endpoint = "http://127.0.0.1:1/w/api.php";
  CurlTransport transport(std::chrono::milliseconds(0));
  EXPECT_TRUE(throws_code([&] { transport.get(s, {}); }, "NetworkUnavailable"));
}

}  // namespace
}  // namespace wikistance
