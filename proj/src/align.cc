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

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "wikistance/text.h"

namespace wikistance {

namespace {

using Node = std::pair<Language, std::string>;

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), size_t{0});
  }
  size_t find(size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<size_t> parent_;
};

std::string node_name(const Node &n) {
  return std::string(language_code(n.first)) + ":" + n.second;
}

Node parse_node(std::string_view text, const std::string &where) {
  auto lang = text.size() > 3 && text[2] == ':'
                  ? parse_language(text.substr(0, 2))
                  : std::nullopt;
  if (!lang) {
    throw_error(ErrorKind::kConfig, "SchemaViolation",
                where + ": expected <lang>:<title>");
  }
  return {*lang, normalize_title(text.substr(3))};
}

std::pair<Node, Node> ordered(Node a, Node b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

}  // namespace

AlignmentOverrides AlignmentOverrides::parse(std::string_view text,
                                             const std::string &source) {
  AlignmentOverrides out;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss{std::string(row)};
    std::string col;
    while (std::getline(ss, col, '\t')) cols.emplace_back(trim(col));
    std::string where = source + ":" + std::to_string(line_no);
    if (cols.size() != 3 || (cols[0] != "cut" && cols[0] != "link")) {
      throw_error(ErrorKind::kConfig, "SchemaViolation",
                  where + ": expected cut|link<TAB>lang:title<TAB>lang:title");
    }
    Node a = parse_node(cols[1], where);
    Node b = parse_node(cols[2], where);
    InterwikiEdge edge{a.first, a.second, b.first, b.second};
    (cols[0] == "cut" ? out.cut : out.link).push_back(std::move(edge));
  }
  return out;
}

AlignmentOverrides AlignmentOverrides::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw_error(ErrorKind::kConfig, "IoError", "cannot open " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void PolicyAlignment::index() {
  projection_.clear();
  for (const SupersetEntry &e : entries_) {
    for (const auto &[lang, title] : e.members) projection_[{lang, title}] = e.id;
  }
}

int PolicyAlignment::project(Language lang, const std::string &local_title) const {
  auto it = projection_.find({lang, local_title});
  if (it == projection_.end()) {
    throw_error(ErrorKind::kData, "UnknownPolicy",
                "no superset entry for " + node_name({lang, local_title}));
  }
  return it->second;
}

Json PolicyAlignment::to_json() const {
  Json arr = Json::array();
  for (const SupersetEntry &e : entries_) {
    Json members = Json::object();
    for (const auto &[lang, title] : e.members) {
      members[std::string(language_code(lang))] = title;
    }
    arr.push_back({{"id", e.id},
                   {"display_title", e.display_title},
                   {"members", members}});
  }
  return arr;
}

PolicyAlignment PolicyAlignment::from_json(const Json &j) {
  PolicyAlignment a;
  try {
    for (const Json &item : j) {
      SupersetEntry e;
      e.id = item.at("id").get<int>();
      e.display_title = item.at("display_title").get<std::string>();
      for (const auto &[code, title] : item.at("members").items()) {
        auto lang = parse_language(code);
        if (!lang) throw std::invalid_argument("language " + code);
        e.members[*lang] = title.get<std::string>();
      }
      a.entries_.push_back(std::move(e));
    }
  } catch (const std::exception &e) {
    throw_error(ErrorKind::kData, "SchemaViolation",
                std::string("bad alignment: ") + e.what());
  }
  a.index();
  return a;
}

PolicyAlignment align(const std::vector<PolicyRegistry> &registries,
                      const InterwikiTable &interwiki,
                      const AlignmentOverrides &overrides) {
  std::map<Language, const PolicyRegistry *> by_lang;
  std::vector<Node> nodes;
  std::map<Node, size_t> node_index;
  for (const PolicyRegistry &reg : registries) {
    if (!by_lang.emplace(reg.language, &reg).second) {
      throw_error(ErrorKind::kConfig, "InvalidArgument",
                  "two registries for " + std::string(language_code(reg.language)));
    }
    for (const std::string &title : reg.canonical) {
      node_index[{reg.language, title}] = nodes.size();
      nodes.push_back({reg.language, title});
    }
  }

  std::set<std::pair<Node, Node>> edges;
  for (const auto &[source, links] : interwiki) {
    if (!node_index.count(source)) continue;
    for (const auto &[lang, raw] : links) {
      auto reg = by_lang.find(lang);
      if (reg == by_lang.end() || lang == source.first) continue;
      auto title = reg->second->canonicalize(raw);
      if (!title) continue;
      edges.insert(ordered(source, {lang, *title}));
    }
  }
  for (const InterwikiEdge &e : overrides.cut) {
    edges.erase(ordered({e.from_language, e.from_title},
                        {e.to_language, e.to_title}));
  }
  for (const InterwikiEdge &e : overrides.link) {
    Node a{e.from_language, e.from_title}, b{e.to_language, e.to_title};
    if (!node_index.count(a) || !node_index.count(b)) {
      throw_error(ErrorKind::kConfig, "UnknownPolicy",
                  "override links non-canonical " + node_name(a) + " / " +
                      node_name(b));
    }
    edges.insert(ordered(a, b));
  }

  UnionFind uf(nodes.size());
  for (const auto &[a, b] : edges) uf.unite(node_index.at(a), node_index.at(b));

  std::map<size_t, SupersetEntry> components;
  for (size_t i = 0; i < nodes.size(); ++i) {
    SupersetEntry &entry = components[uf.find(i)];
    auto [it, fresh] = entry.members.emplace(nodes[i].first, nodes[i].second);
    if (!fresh) {
      throw_error(ErrorKind::kData, "ConflictingLinks",
                  node_name(nodes[i]) + " and " +
                      node_name({it->first, it->second}) +
                      " are linked into one policy");
    }
  }

  PolicyAlignment out;
  for (auto &[root, entry] : components) {
    if (auto en = entry.members.find(Language::kEn); en != entry.members.end()) {
      entry.display_title = en->second;
    } else {
      std::string best;
      for (const auto &[lang, title] : entry.members) {
        std::string name = node_name({lang, title});
        if (best.empty() || name < best) best = name;
      }
      entry.display_title = best;
    }
    out.entries_.push_back(std::move(entry));
  }
  std::sort(out.entries_.begin(), out.entries_.end(),
            [](const SupersetEntry &a, const SupersetEntry &b) {
              return a.display_title < b.display_title;
            });
  for (size_t i = 0; i < out.entries_.size(); ++i) {
    out.entries_[i].id = static_cast<int>(i);
  }
  out.index();
  return out;
}

}  // namespace wikistance
