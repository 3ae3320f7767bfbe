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

#include "wikistance/policies.h"

#include <fstream>
#include <sstream>

#include "wikistance/text.h"

namespace wikistance {

namespace {

// Targets of every [[...]] link in a page.
std::vector<std::string> link_targets(std::string_view text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while ((pos = text.find("[[", pos)) != std::string_view::npos) {
    size_t close = text.find("]]", pos + 2);
    if (close == std::string_view::npos) break;
    std::string_view inner = text.substr(pos + 2, close - pos - 2);
    size_t bar = inner.find('|');
    if (bar != std::string_view::npos) inner = inner.substr(0, bar);
    out.emplace_back(trim(inner));
    pos = close + 2;
  }
  return out;
}

std::string resolve(const std::map<std::string, std::string> &redirects,
                    const std::string &key) {
  auto it = redirects.find(key);
  return it == redirects.end() ? key : it->second;
}

}  // namespace

bool PolicyCuration::is_policy(const std::string &title) const {
  auto it = verdicts.find(title);
  return it != verdicts.end() && it->second;
}

PolicyCuration PolicyCuration::parse(std::string_view text, Language lang,
                                     const std::string &source) {
  PolicyCuration c;
  c.language = lang;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    auto fail = [&] {
      throw_error(ErrorKind::kConfig, "SchemaViolation",
                  source + ":" + std::to_string(line_no) +
                      ": expected verdict(title)=policy|not_policy or "
                      "merge(child)=parent");
    };
    bool is_verdict = row.starts_with("verdict(");
    bool is_merge = row.starts_with("merge(");
    if (!is_verdict && !is_merge) fail();
    size_t open = row.find('(');
    size_t close = row.find(")=", open);
    if (close == std::string_view::npos) fail();
    std::string title = normalize_title(trim(row.substr(open + 1, close - open - 1)));
    std::string value(trim(row.substr(close + 2)));
    if (title.empty() || value.empty()) fail();
    if (is_verdict) {
      if (value != "policy" && value != "not_policy") fail();
      c.verdicts[title] = value == "policy";
    } else {
      c.merges[title] = normalize_title(value);
    }
  }
  return c;
}

PolicyCuration PolicyCuration::load(Language lang, const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw_error(ErrorKind::kConfig, "MissingCuration",
                "cannot open curation file " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), lang, path);
}

std::string default_curation_path(Language lang) {
  return data_dir() + "/policies/" + std::string(language_code(lang)) +
         ".curation";
}

size_t default_min_count(Language lang) {
  switch (lang) {
    case Language::kEn: return 100;
    case Language::kDe: return 10;
    case Language::kTr: return 2;
  }
  return 1;
}

std::string policy_link_key(std::string_view raw_target) {
  size_t hash = raw_target.find('#');
  if (hash != std::string_view::npos) raw_target = raw_target.substr(0, hash);
  return normalize_title(trim(raw_target));
}

std::optional<std::string> PolicyRegistry::canonicalize(
    std::string_view raw_target) const {
  std::string title = resolve(redirect_map, policy_link_key(raw_target));
  if (auto it = merge_map.find(title); it != merge_map.end()) {
    title = it->second;
  }
  if (!canonical.count(title)) return std::nullopt;
  return title;
}

Json PolicyRegistry::to_json() const {
  return Json{{"language", language_code(language)},
              {"min_count", min_count},
              {"canonical", canonical},
              {"counts", counts},
              {"redirect_map", redirect_map},
              {"merge_map", merge_map}};
}

PolicyRegistry PolicyRegistry::from_json(const Json &j) {
  PolicyRegistry r;
  try {
    auto lang = parse_language(j.at("language").get<std::string>());
    if (!lang) throw std::invalid_argument("language");
    r.language = *lang;
    r.min_count = j.at("min_count").get<size_t>();
    r.canonical = j.at("canonical").get<std::set<std::string>>();
    r.counts = j.at("counts").get<std::map<std::string, size_t>>();
    r.redirect_map = j.at("redirect_map").get<std::map<std::string, std::string>>();
    r.merge_map = j.at("merge_map").get<std::map<std::string, std::string>>();
  } catch (const std::exception &e) {
    throw_error(ErrorKind::kData, "SchemaViolation",
                std::string("bad policy registry: ") + e.what());
  }
  return r;
}

std::map<std::string, std::string> build_merge_map(
    const std::vector<PolicyPage> &pages, const PolicyCuration &curation,
    const std::map<std::string, std::string> &redirect_map) {
  std::map<std::string, const PolicyPage *> by_title;
  for (const PolicyPage &p : pages) by_title[normalize_title(p.title)] = &p;

  std::map<std::string, std::string> edges;
  for (const auto &[child, parent] : curation.merges) {
    auto page = by_title.find(child);
    bool linked = false;
    if (page != by_title.end()) {
      for (const std::string &target : link_targets(page->second->full_text)) {
        std::string key = policy_link_key(target);
        if (key == parent || resolve(redirect_map, key) == parent) {
          linked = true;
          break;
        }
      }
    }
    if (!linked) {
      emit_diagnostic("warning", "UnlinkedMerge",
                      {{"child", child}, {"parent", parent}});
      continue;
    }
    edges[child] = parent;
  }

  std::map<std::string, std::string> flat;
  for (const auto &[child, parent] : edges) {
    std::set<std::string> seen{child};
    std::string root = parent;
    for (auto it = edges.find(root); it != edges.end(); it = edges.find(root)) {
      if (!seen.insert(root).second) {
        throw_error(ErrorKind::kData, "CycleDetected",
                    "merge chain through '" + child + "' is cyclic");
      }
      root = it->second;
    }
    if (root == child) {
      throw_error(ErrorKind::kData, "CycleDetected",
                  "merge chain through '" + child + "' is cyclic");
    }
    flat[child] = root;
  }
  return flat;
}

std::set<std::string> filter_infrequent(
    const std::map<std::string, size_t> &counts, size_t min_count) {
  if (min_count < 1) {
    throw_error(ErrorKind::kConfig, "InvalidArgument", "min_count must be >= 1");
  }
  std::set<std::string> kept;
  for (const auto &[title, n] : counts) {
    if (n >= min_count) kept.insert(title);
  }
  return kept;
}

std::optional<std::string> select_primary_policy(
    const std::vector<std::string> &targets) {
  if (targets.empty()) return std::nullopt;
  return targets.front();
}

PolicyRegistry build_registry(const RegistryInput &input) {
  PolicyRegistry reg;
  reg.language = input.language;
  reg.min_count = input.min_count;
  reg.redirect_map = input.redirect_map;
  reg.merge_map = build_merge_map(input.pages, input.curation, input.redirect_map);

  // Candidate set: curated policies that are not themselves sub-policies.
  for (const auto &[title, ok] : input.curation.verdicts) {
    if (ok && !reg.merge_map.count(title)) reg.canonical.insert(title);
  }
  for (auto it = reg.merge_map.begin(); it != reg.merge_map.end();) {
    if (!reg.canonical.count(it->second)) {
      emit_diagnostic("warning", "MergeIntoNonPolicy",
                      {{"child", it->first}, {"parent", it->second}});
      it = reg.merge_map.erase(it);
    } else {
      ++it;
    }
  }

  std::map<std::string, size_t> counts;
  size_t dropped = 0;
  for (const auto &targets : input.comment_targets) {
    std::set<std::string> mentioned;
    for (const std::string &raw : targets) {
      if (auto title = reg.canonicalize(raw)) {
        mentioned.insert(*title);
      } else {
        ++dropped;
      }
    }
    for (const std::string &title : mentioned) ++counts[title];
  }
  if (dropped) {
    emit_diagnostic("info", "NonPolicyTargets",
                    {{"lang", std::string(language_code(input.language))},
                     {"count", dropped}});
  }

  reg.canonical = filter_infrequent(counts, input.min_count);
  for (const std::string &title : reg.canonical) reg.counts[title] = counts[title];
  std::erase_if(reg.merge_map,
                [&](const auto &kv) { return !reg.canonical.count(kv.second); });
  std::erase_if(reg.redirect_map, [&](const auto &kv) {
    std::string t = kv.second;
    if (auto m = reg.merge_map.find(t); m != reg.merge_map.end()) t = m->second;
    return !reg.canonical.count(t);
  });
  return reg;
}

}  // namespace wikistance
