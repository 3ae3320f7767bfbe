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

#include "wikistance/wikitext.h"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <regex>
#include <set>

#include "wikistance/text.h"

namespace wikistance {

namespace {

// Namespaces whose links identify an editor. Canonical English names are
// valid on every wiki, so all of them are recognised for all languages.
const char *const kUserNamespaces[] = {
    "User talk",     "User_talk",  "User",
    "Benutzerin Diskussion",       "Benutzerin_Diskussion",
    "Benutzer Diskussion",         "Benutzer_Diskussion",
    "Benutzerin",    "Benutzer",   "BD",
    "Kullanıcı mesaj",             "Kullanıcı_mesaj",
    "Kullanıcı",
};

const char *const kContributionPrefixes[] = {
    "Special:Contributions/",
    "Spezial:Beiträge/",
    "Özel:Katkılar/",
};

// Pages in these namespaces are never the subject of an article deletion
// discussion heading.
const std::set<std::string> kNonArticleNamespaces = {
    "category", "kategorie", "kategori", "template", "vorlage", "şablon",
    "user", "benutzer", "kullanıcı", "file", "image", "datei", "dosya",
    "wikipedia", "vikipedi", "wp", "vp", "portal", "help", "hilfe",
    "yardım", "talk", "diskussion", "tartışma", "special", "spezial",
    "özel", "mediawiki", "module", "modul",
};

bool is_inline_space(char c) { return c == ' ' || c == '\t'; }

// Finds the "]]" closing a link opened at `open`, on the same line.
size_t find_link_close(std::string_view text, size_t open) {
  for (size_t i = open + 2; i + 1 < text.size(); ++i) {
    if (text[i] == '\n') return std::string_view::npos;
    if (text[i] == ']' && text[i + 1] == ']') return i;
  }
  return std::string_view::npos;
}

// Length of the user-link namespace opener at `pos` (just after "[["), or 0.
size_t user_link_prefix(std::string_view text, size_t pos) {
  size_t j = pos;
  if (j < text.size() && text[j] == ':') ++j;
  while (j < text.size() && is_inline_space(text[j])) ++j;
  std::string_view rest = text.substr(j);
  for (const char *prefix : kContributionPrefixes) {
    if (starts_with_ci(rest, prefix)) return j - pos + std::strlen(prefix);
  }
  for (const char *ns : kUserNamespaces) {
    if (!starts_with_ci(rest, ns)) continue;
    size_t k = j + std::strlen(ns);
    while (k < text.size() && is_inline_space(text[k])) ++k;
    if (k < text.size() && text[k] == ':') return k + 1 - pos;
  }
  return 0;
}

bool is_signature_tag(std::string_view tag) {
  // tag is the content between '<' and '>'.
  std::string_view name = tag;
  if (!name.empty() && name.front() == '/') name.remove_prefix(1);
  size_t end = 0;
  while (end < name.size() && std::isalpha(static_cast<unsigned char>(name[end]))) {
    ++end;
  }
  std::string lowered = to_lower(name.substr(0, end), Language::kEn);
  return lowered == "small" || lowered == "span" || lowered == "font" ||
         lowered == "sup" || lowered == "sub" || lowered == "b" ||
         lowered == "i";
}

// Separator text allowed between the parts of one signature, e.g. the
// " (" and ")" around a talk-page link.
size_t skip_signature_separators(std::string_view text, size_t pos) {
  while (pos < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[pos]);
    if (c == ' ' || c == '\t' || c == '(' || c == ')' || c == '|' ||
        c == '/' || c == '-' || c == ',' || c == ':') {
      ++pos;
    } else if (text.compare(pos, 2, "\xC2\xB7") == 0) {  // middle dot
      pos += 2;
    } else if (text.compare(pos, 3, "\xE2\x80\xA2") == 0 ||  // bullet
               text.compare(pos, 3, "\xE2\x80\x93") == 0 ||  // en dash
               text.compare(pos, 3, "\xE2\x80\x94") == 0) {  // em dash
      pos += 3;
    } else if (c == '<') {
      size_t close = text.find('>', pos);
      if (close == std::string_view::npos ||
          !is_signature_tag(text.substr(pos + 1, close - pos - 1))) {
        break;
      }
      pos = close + 1;
    } else {
      break;
    }
  }
  return pos;
}

// Moves `begin` left over opening formatting tags and "--"/dash markers,
// in any interleaving.
size_t extend_signature_left(std::string_view text, size_t begin) {
  size_t q = begin;
  for (;;) {
    size_t r = q;
    while (r > 0 && is_inline_space(text[r - 1])) --r;
    if (r > 0 && text[r - 1] == '>') {
      size_t open = text.rfind('<', r - 1);
      if (open != std::string_view::npos && text[open + 1] != '/' &&
          is_signature_tag(text.substr(open + 1, r - 2 - open))) {
        q = open;
        continue;
      }
    }
    if (r >= 2 && text[r - 1] == '-' && text[r - 2] == '-') {
      while (r > 0 && text[r - 1] == '-') --r;
      q = r;
      continue;
    }
    if (r >= 3 && (text.compare(r - 3, 3, "\xE2\x80\x94") == 0 ||
                   text.compare(r - 3, 3, "\xE2\x80\x93") == 0)) {
      q = r - 3;
      continue;
    }
    return q;
  }
}

const std::regex &timestamp_regex(Language lang) {
  static const std::regex en(
      "[0-9]{1,2}:[0-9]{2}, [0-9]{1,2} "
      "(January|February|March|April|May|June|July|August|September|October|"
      "November|December) [0-9]{4} \\((UTC|CET|CEST|GMT)\\)");
  static const std::regex de(
      "[0-9]{1,2}:[0-9]{2}, [0-9]{1,2}\\. ?"
      "(Januar|Jan\\.?|Februar|Feb\\.?|März|Mär\\.?|April|Apr\\.?|Mai|Juni|"
      "Jun\\.?|Juli|Jul\\.?|August|Aug\\.?|September|Sept?\\.?|Oktober|"
      "Okt\\.?|November|Nov\\.?|Dezember|Dez\\.?) [0-9]{4} "
      "\\((CET|CEST|MEZ|MESZ|UTC)\\)");
  static const std::regex tr(
      "[0-9]{1,2}:[0-9]{2}, [0-9]{1,2} "
      "(Ocak|Şubat|Mart|Nisan|Mayıs|Haziran|Temmuz|Ağustos|Eylül|Ekim|Kasım|"
      "Aralık) [0-9]{4} \\((UTC|EET|EEST|TRT|\\+03)\\)");
  switch (lang) {
    case Language::kEn: return en;
    case Language::kDe: return de;
    case Language::kTr: return tr;
  }
  return en;
}

std::string strip_html_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  size_t pos = 0;
  while (pos < text.size()) {
    size_t open = text.find("<!--", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    size_t close = text.find("-->", open + 4);
    if (close == std::string_view::npos) break;
    pos = close + 3;
  }
  return out;
}

// Replaces "[[a|b]]" by "b" and "[[a]]" by "a".
std::string unlink(std::string_view text) {
  std::string out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t open = text.find("[[", pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    size_t close = text.find("]]", open + 2);
    if (close == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    std::string_view inner = text.substr(open + 2, close - open - 2);
    size_t bar = inner.rfind('|');
    out.append(bar == std::string_view::npos ? inner : inner.substr(bar + 1));
    pos = close + 2;
  }
  return out;
}

std::string strip_markup(std::string_view text) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<') {
      size_t close = text.find('>', i);
      if (close != std::string_view::npos) {
        i = close;
        continue;
      }
    }
    if (text[i] == '\'' && i + 1 < text.size() && text[i + 1] == '\'') {
      while (i + 1 < text.size() && text[i + 1] == '\'') ++i;
      continue;
    }
    out.push_back(text[i]);
  }
  return out;
}

bool is_vote_edge(unsigned char c) {
  return std::isspace(c) || c == '.' || c == ',' || c == ':' || c == ';' ||
         c == '!' || c == '?' || c == '-' || c == '(' || c == ')' ||
         c == '[' || c == ']' || c == '"' || c == '\'' || c == '*' ||
         c == '/' || c == '=';
}

size_t apostrophe_run(std::string_view text, size_t pos) {
  size_t n = 0;
  while (pos + n < text.size() && text[pos + n] == '\'') ++n;
  return n;
}

// Next run of at least three apostrophes in [from, to).
size_t find_bold(std::string_view text, size_t from, size_t to) {
  for (size_t i = from; i < to; ++i) {
    if (text[i] != '\'') continue;
    size_t n = apostrophe_run(text, i);
    if (n >= 3) return i;
    i += n - 1;
  }
  return std::string_view::npos;
}

std::string heading_title(std::string_view heading) {
  size_t open = heading.find("[[");
  if (open == std::string_view::npos) return {};
  size_t close = heading.find("]]", open + 2);
  if (close == std::string_view::npos) return {};
  std::string_view inner = heading.substr(open + 2, close - open - 2);
  size_t bar = inner.find('|');
  if (bar != std::string_view::npos) inner = inner.substr(0, bar);
  inner = trim(inner);
  if (!inner.empty() && inner.front() == ':') inner.remove_prefix(1);
  std::string title = normalize_title(trim(inner));
  size_t colon = title.find(':');
  if (colon != std::string::npos && title.find(' ') > colon) {
    std::string ns = to_lower(title.substr(0, colon), Language::kEn);
    if (kNonArticleNamespaces.count(ns)) return {};
  }
  return title;
}

bool is_boilerplate(std::string_view line) {
  static const char *const kPrefixes[] = {
      "<div", "</div", "{{", "}}", "{|", "|", "----", "__", "<noinclude",
      "</noinclude", "<includeonly", "</includeonly", "[[Category:",
      "[[Kategorie:", "[[Kategori:",
  };
  for (const char *p : kPrefixes) {
    if (starts_with_ci(line, p)) return true;
  }
  return false;
}

}  // namespace

PolicyPrefixSet PolicyPrefixSet::defaults(Language lang) {
  PolicyPrefixSet set;
  set.language = lang;
  if (lang == Language::kTr) {
    set.prefixes = {"[[VP:", "[[Vikipedi:"};
  } else {
    set.prefixes = {"[[WP:", "[[Wikipedia:"};
  }
  return set;
}

// --- Policy links -----------------------------------------------------------

std::vector<PolicyLink> find_policy_links(std::string_view text,
                                          const PolicyPrefixSet &prefixes,
                                          bool report_unclosed) {
  std::vector<PolicyLink> links;
  if (prefixes.prefixes.empty()) return links;
  size_t pos = 0;
  while ((pos = text.find("[[", pos)) != std::string_view::npos) {
    std::string_view rest = text.substr(pos);
    bool matched = false;
    for (const std::string &prefix : prefixes.prefixes) {
      if (starts_with_ci(rest, prefix)) {
        matched = true;
        break;
      }
    }
    if (!matched) {
      pos += 2;
      continue;
    }
    size_t close = find_link_close(text, pos);
    if (close == std::string_view::npos) {
      if (report_unclosed) {
        emit_diagnostic("warning", "UnclosedLink",
                        {{"offset", pos},
                         {"excerpt", std::string(rest.substr(0, 40))}});
      }
      pos += 2;
      continue;
    }
    std::string_view inner = text.substr(pos + 2, close - pos - 2);
    size_t bar = inner.find('|');
    if (bar != std::string_view::npos) inner = inner.substr(0, bar);
    links.push_back({{pos, close + 2}, std::string(trim(inner))});
    pos = close + 2;
  }
  return links;
}

std::vector<std::string> extract_policy_links(std::string_view text,
                                              const PolicyPrefixSet &prefixes) {
  std::vector<std::string> targets;
  for (PolicyLink &link : find_policy_links(text, prefixes)) {
    targets.push_back(std::move(link.target));
  }
  return targets;
}

// --- Votes ------------------------------------------------------------------

std::optional<VoteMatch> find_vote(std::string_view text, Language lang,
                                   std::span<const Span> skip) {
  size_t pos = 0;
  for (;;) {
    size_t open = find_bold(text, pos, text.size());
    if (open == std::string_view::npos) return std::nullopt;
    auto inside = std::find_if(skip.begin(), skip.end(), [&](const Span &s) {
      return open >= s.begin && open < s.end;
    });
    if (inside != skip.end()) {
      pos = std::max(inside->end, open + 1);
      continue;
    }
    size_t run = apostrophe_run(text, open);
    size_t content_begin = open + run;
    size_t line_end = text.find('\n', content_begin);
    if (line_end == std::string_view::npos) line_end = text.size();
    size_t close = find_bold(text, content_begin, line_end);
    size_t content_end = close == std::string_view::npos ? line_end : close;
    size_t span_end = close == std::string_view::npos
                          ? line_end
                          : close + apostrophe_run(text, close);
    std::string content =
        strip_markup(unlink(text.substr(content_begin, content_end - content_begin)));
    size_t b = 0, e = content.size();
    while (b < e && is_vote_edge(static_cast<unsigned char>(content[b]))) ++b;
    while (e > b && is_vote_edge(static_cast<unsigned char>(content[e - 1]))) --e;
    std::string vote = collapse_whitespace(to_lower(content.substr(b, e - b), lang));
    if (vote.empty()) return std::nullopt;
    return VoteMatch{std::move(vote), {open, span_end}};
  }
}

std::optional<std::string> extract_vote(std::string_view text, Language lang) {
  auto match = find_vote(text, lang);
  if (!match) return std::nullopt;
  return std::move(match->vote);
}

// --- Signatures -------------------------------------------------------------

bool contains_user_link(std::string_view text) {
  size_t pos = 0;
  while ((pos = text.find("[[", pos)) != std::string_view::npos) {
    if (user_link_prefix(text, pos + 2) > 0) return true;
    pos += 2;
  }
  return false;
}

bool is_timestamp(std::string_view text, Language lang) {
  std::cmatch m;
  return std::regex_match(text.data(), text.data() + text.size(), m,
                          timestamp_regex(lang)) ||
         std::regex_match(text.data(), text.data() + text.size(), m,
                          timestamp_regex(Language::kEn));
}

SignatureSpans detect_signatures(std::string_view text, Language lang) {
  SignatureSpans out;

  // User links, merged when only signature separators lie between them.
  size_t pos = 0;
  while ((pos = text.find("[[", pos)) != std::string_view::npos) {
    if (user_link_prefix(text, pos + 2) == 0) {
      pos += 2;
      continue;
    }
    size_t close = find_link_close(text, pos);
    if (close == std::string_view::npos) {
      pos += 2;
      continue;
    }
    Span span{extend_signature_left(text, pos), close + 2};
    for (;;) {
      size_t next = skip_signature_separators(text, span.end);
      if (text.compare(next, 2, "[[") == 0 &&
          user_link_prefix(text, next + 2) > 0) {
        size_t next_close = find_link_close(text, next);
        if (next_close != std::string_view::npos) {
          span.end = next_close + 2;
          continue;
        }
      }
      break;
    }
    // Trailing closing tags and a ")" balancing an included "(".
    for (;;) {
      if (text.compare(span.end, 2, "</") == 0) {
        size_t gt = text.find('>', span.end);
        if (gt != std::string_view::npos &&
            is_signature_tag(text.substr(span.end + 1, gt - span.end - 1))) {
          span.end = gt + 1;
          continue;
        }
      }
      std::string_view covered = text.substr(span.begin, span.size());
      auto opens = std::count(covered.begin(), covered.end(), '(');
      auto closes = std::count(covered.begin(), covered.end(), ')');
      if (opens > closes && span.end < text.size() && text[span.end] == ')') {
        ++span.end;
        continue;
      }
      break;
    }
    if (!out.signatures.empty() && span.begin < out.signatures.back().end) {
      out.signatures.back().end = std::max(out.signatures.back().end, span.end);
    } else {
      out.signatures.push_back(span);
    }
    pos = span.end;
  }

  // Timestamps in the language's format, plus the English one.
  std::vector<Span> stamps;
  for (Language l : {lang, Language::kEn}) {
    const std::regex &re = timestamp_regex(l);
    for (std::cregex_iterator it(text.data(), text.data() + text.size(), re),
         end;
         it != end; ++it) {
      size_t b = static_cast<size_t>(it->position(0));
      stamps.push_back({b, b + static_cast<size_t>(it->length(0))});
    }
    if (l == Language::kEn) break;
  }
  std::sort(stamps.begin(), stamps.end(), [](const Span &a, const Span &b) {
    return a.begin < b.begin;
  });
  for (const Span &s : stamps) {
    bool overlaps = std::any_of(
        out.signatures.begin(), out.signatures.end(),
        [&](const Span &sig) { return s.begin < sig.end && sig.begin < s.end; });
    if (overlaps) continue;
    if (!out.timestamps.empty() && s.begin < out.timestamps.back().end) continue;
    out.timestamps.push_back(s);
  }
  return out;
}

// --- Archive parsing --------------------------------------------------------

std::vector<RawDiscussion> parse_discussions(std::string_view wikitext,
                                             Language lang) {
  std::vector<RawDiscussion> discussions;
  std::string text = strip_html_comments(wikitext);
  const PolicyPrefixSet prefixes = PolicyPrefixSet::defaults(lang);

  std::optional<RawDiscussion> current;
  int current_level = 0;
  std::string pending;
  bool in_comment = false;

  auto flush_comment = [&] {
    if (in_comment && current) {
      std::string body(trim(pending));
      if (!body.empty()) {
        RawComment c;
        c.text = std::move(body);
        current->comments.push_back(std::move(c));
      }
    }
    pending.clear();
    in_comment = false;
  };
  auto finish_discussion = [&] {
    flush_comment();
    if (current) discussions.push_back(std::move(*current));
    current.reset();
  };

  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string_view line(text.data() + pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = nl + 1;

    std::string_view trimmed = trim(line);
    if (trimmed.size() >= 2 && trimmed.front() == '=' && trimmed.back() == '=') {
      size_t lead = 0, tail = 0;
      while (lead < trimmed.size() && trimmed[lead] == '=') ++lead;
      while (tail < trimmed.size() && trimmed[trimmed.size() - 1 - tail] == '=') {
        ++tail;
      }
      int level = static_cast<int>(std::min(lead, tail));
      if (lead + tail < trimmed.size()) {
        std::string title = heading_title(
            trimmed.substr(lead, trimmed.size() - lead - tail));
        if (!title.empty()) {
          finish_discussion();
          current = RawDiscussion{title, lang, {}};
          current_level = level;
          continue;
        }
        if (current && level > current_level) {
          flush_comment();
          continue;
        }
        finish_discussion();
        continue;
      }
    }
    if (!current) continue;
    if (trimmed.empty() || is_boilerplate(trimmed)) {
      flush_comment();
      continue;
    }
    char first = line.empty() ? '\0' : line.front();
    if (first == '*' || first == ':' || first == '#') {
      flush_comment();
      size_t b = 0;
      while (b < line.size() &&
             (line[b] == '*' || line[b] == ':' || line[b] == '#')) {
        ++b;
      }
      pending = std::string(trim(line.substr(b)));
      in_comment = true;
      continue;
    }
    if (in_comment) {
      pending += '\n';
      pending += line;
    } else {
      pending = std::string(line);
      in_comment = true;
    }
  }
  finish_discussion();

  for (RawDiscussion &d : discussions) {
    for (RawComment &c : d.comments) {
      SignatureSpans sig = detect_signatures(c.text, lang);
      c.signature_spans = std::move(sig.signatures);
      c.timestamp_spans = std::move(sig.timestamps);
      if (auto vote = find_vote(c.text, lang, c.signature_spans)) {
        c.vote_raw = std::move(vote->vote);
        c.vote_span = vote->span;
      }
      c.policy_targets = extract_policy_links(c.text, prefixes);
    }
  }
  return discussions;
}

std::vector<RawDiscussion> parse_archive(const CachedPage &page) {
  auto discussions = parse_discussions(page.wikitext, page.language);
  if (discussions.empty()) {
    emit_diagnostic("warning", "EmptyPage",
                    {{"lang", std::string(language_code(page.language))},
                     {"title", page.title}});
  }
  return discussions;
}

}  // namespace wikistance
