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

#include "wikistance/align.h"

#include <gtest/gtest.h>

#include "test_support.h"

namespace wikistance {
namespace {

using testing::fixture_path;
using testing::read_file;
using testing::throws_code;

struct Snapshot {
  std::vector<PolicyRegistry> registries;
  InterwikiTable links;
  size_t expected = 0;
};

Snapshot load_snapshot() {
  Json j = Json::parse(read_file(fixture_path("alignment/snapshot.json")));
  Snapshot s;
  for (const Json &r : j["registries"]) s.registries.push_back(PolicyRegistry::from_json(r));
  for (const auto &[code, titles] : j["links"].items()) {
    Language lang = *parse_language(code);
    for (const auto &[title, targets] : titles.items()) {
      LanguageLinks ll;
      for (const auto &[tcode, ttitle] : targets.items()) {
        ll[*parse_language(tcode)] = ttitle.get<std::string>();
      }
      s.links[{lang, title}] = ll;
    }
  }
  s.expected = j["expected_superset_size"].get<size_t>();
  return s;
}

PolicyRegistry registry(Language lang, std::set<std::string> titles) {
  PolicyRegistry r;
  r.language = lang;
  r.canonical = std::move(titles);
  return r;
}

std::vector<PolicyRegistry> small_registries() {
  return {registry(Language::kEn, {"Wikipedia:Notability", "Wikipedia:Verifiability"}),
          registry(Language::kDe, {"Wikipedia:Relevanzkriterien", "Wikipedia:Belege"}),
          registry(Language::kTr, {"Vikipedi:Kayda değerlik", "Vikipedi:Reklam"})};
}

InterwikiTable small_links() {
  return {{{Language::kEn, "Wikipedia:Notability"},
           {{Language::kDe, "Wikipedia:Relevanzkriterien"},
            {Language::kTr, "Vikipedi:Kayda değerlik"}}},
          {{Language::kDe, "Wikipedia:Belege"},
           {{Language::kEn, "Wikipedia:Verifiability"}}}};
}

TEST(Align, NotabilityTriple) {
  PolicyAlignment a = align(small_registries(), small_links());
  ASSERT_EQ(a.size(), 3u);
  int id = a.project(Language::kEn, "Wikipedia:Notability");
  const SupersetEntry &e = a.entries()[static_cast<size_t>(id)];
  EXPECT_EQ(e.display_title, "Wikipedia:Notability");
  EXPECT_EQ(e.members.size(), 3u);
  EXPECT_EQ(a.project(Language::kDe, "Wikipedia:Relevanzkriterien"), id);
  EXPECT_EQ(a.project(Language::kTr, "Vikipedi:Kayda değerlik"), id);
}

TEST(Align, SingletonWithoutEnglishMember) {
  PolicyAlignment a = align(small_registries(), small_links());
  int id = a.project(Language::kTr, "Vikipedi:Reklam");
  EXPECT_EQ(a.entries()[static_cast<size_t>(id)].display_title, "tr:Vikipedi:Reklam");
  EXPECT_EQ(a.entries()[static_cast<size_t>(id)].members.size(), 1u);
}

TEST(Align, IdsFollowSortedDisplayTitles) {
  PolicyAlignment a = align(small_registries(), small_links());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.entries()[i].id, static_cast<int>(i));
    if (i) EXPECT_LT(a.entries()[i - 1].display_title, a.entries()[i].display_title);
  }
}

TEST(Align, SnapshotSizes) {
  Snapshot s = load_snapshot();
  ASSERT_EQ(s.registries.size(), 3u);
  EXPECT_EQ(s.registries[0].canonical.size() + s.registries[1].canonical.size() +
                s.registries[2].canonical.size(),
            175u);
  EXPECT_EQ(s.expected, 116u);
  EXPECT_EQ(align(s.registries, s.links).size(), s.expected);
  EXPECT_EQ(align(s.registries, {}).size(), 175u);
}

// Absorbed titles: sum of component sizes minus number of components.
TEST(Properties, SupersetSizeIdentity) {
  Snapshot s = load_snapshot();
  PolicyAlignment a = align(s.registries, s.links);
  size_t members = 0;
  for (const SupersetEntry &e : a.entries()) members += e.members.size();
  EXPECT_EQ(members, 175u);
  EXPECT_EQ(175u - (members - a.size()), a.size());
  EXPECT_EQ(members - a.size(), 59u);
}

TEST(Properties, ProjectionIsTotalAndPartitions) {
  Snapshot s = load_snapshot();
  PolicyAlignment a = align(s.registries, s.links);
  std::set<std::pair<Language, std::string>> seen;
  for (const SupersetEntry &e : a.entries()) {
    for (const auto &[lang, title] : e.members) {
      EXPECT_TRUE(seen.insert({lang, title}).second);
      EXPECT_EQ(a.project(lang, title), e.id);
    }
  }
  for (const PolicyRegistry &r : s.registries) {
    for (const std::string &title : r.canonical) {
      EXPECT_TRUE(seen.count({r.language, title})) << title;
    }
  }
}

TEST(Properties, DeterministicIds) {
  Snapshot s = load_snapshot();
  EXPECT_EQ(align(s.registries, s.links).to_json(), align(s.registries, s.links).to_json());
  std::vector<PolicyRegistry> reversed(s.registries.rbegin(), s.registries.rend());
  EXPECT_EQ(align(reversed, s.links).to_json(), align(s.registries, s.links).to_json());
}

TEST(Align, ProjectUnknownTitleThrows) {
  PolicyAlignment a = align(small_registries(), small_links());
  EXPECT_TRUE(throws_code([&] { a.project(Language::kEn, "Wikipedia:Nope"); },
                          "UnknownPolicy"));
}

TEST(Align, ConflictingLinksAndOverrides) {
  auto regs = small_registries();
  InterwikiTable links = small_links();
  // Notability also linked to Belege: the component would hold two de titles.
  links[{Language::kEn, "Wikipedia:Notability"}][Language::kDe] = "Wikipedia:Relevanzkriterien";
  links[{Language::kDe, "Wikipedia:Belege"}][Language::kTr] = "Vikipedi:Kayda değerlik";
  EXPECT_TRUE(throws_code([&] { align(regs, links); }, "ConflictingLinks"));

  AlignmentOverrides cut = AlignmentOverrides::parse(
      "# resolve\ncut\tde:Wikipedia:Belege\ttr:Vikipedi:Kayda değerlik\n");
  PolicyAlignment a = align(regs, links, cut);
  EXPECT_EQ(a.size(), 3u);
  EXPECT_NE(a.project(Language::kDe, "Wikipedia:Belege"),
            a.project(Language::kTr, "Vikipedi:Kayda değerlik"));
}

TEST(Align, OverrideLinkAddsEdge) {
  AlignmentOverrides link = AlignmentOverrides::parse(
      "link\tde:Wikipedia:Belege\ttr:Vikipedi:Reklam\n");
  PolicyAlignment a = align(small_registries(), small_links(), link);
  EXPECT_EQ(a.size(), 2u);
  EXPECT_EQ(a.project(Language::kTr, "Vikipedi:Reklam"),
            a.project(Language::kEn, "Wikipedia:Verifiability"));
  AlignmentOverrides bad = AlignmentOverrides::parse(
      "link\tde:Wikipedia:Gibt es nicht\ttr:Vikipedi:Reklam\n");
  EXPECT_TRUE(throws_code([&] { align(small_registries(), small_links(), bad); },
                          "UnknownPolicy"));
  EXPECT_TRUE(throws_code([] { AlignmentOverrides::parse("join\ten:A\tde:B\n"); },
                          "SchemaViolation"));
}

TEST(Align, LinksAreCanonicalizedByTargetRegistry) {
  auto regs = small_registries();
  regs[1].redirect_map["Wikipedia:RK"] = "Wikipedia:Relevanzkriterien";
  InterwikiTable links = {{{Language::kEn, "Wikipedia:Notability"},
                           {{Language::kDe, "Wikipedia:RK"}}}};
  PolicyAlignment a = align(regs, links);
  EXPECT_EQ(a.project(Language::kDe, "Wikipedia:Relevanzkriterien"),
            a.project(Language::kEn, "Wikipedia:Notability"));
}

TEST(Align, JsonRoundTrip) {
  Snapshot s = load_snapshot();
  PolicyAlignment a = align(s.registries, s.links);
  PolicyAlignment back = PolicyAlignment::from_json(a.to_json());
  EXPECT_EQ(back.to_json(), a.to_json());
  EXPECT_EQ(back.project(Language::kDe, "Wikipedia:Relevanzkriterien"),
            a.project(Language::kEn, "Wikipedia:Notability"));
}

}  // namespace
}  // namespace wikistance
