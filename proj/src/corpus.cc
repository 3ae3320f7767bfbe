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

#include "wikistance/corpus.h"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "wikistance/text.h"

namespace wikistance {

namespace {

const std::regex &bare_shortcut_regex() {
  // Trailing sentence punctuation is not part of the shortcut.
  static const std::regex re(
      "\\b(WP|Wikipedia|VP|Vikipedi):[^\\s\\]|]*[^\\s\\]|.,;:!?)'\"]",
      std::regex::icase);
  return re;
}

// How a Turkish speaker reads a trailing number: its last spoken word.
std::string spoken_number_tail(std::string_view digits) {
  static const char *const kUnits[] = {"sıfır", "bir",  "iki",   "üç",
                                       "dört",  "beş",  "altı",  "yedi",
                                       "sekiz", "dokuz"};
  static const char *const kTens[] = {"",      "on",    "yirmi", "otuz",
                                      "kırk",  "elli",  "altmış", "yetmiş",
                                      "seksen", "doksan"};
  size_t zeros = 0;
  while (zeros < digits.size() && digits[digits.size() - 1 - zeros] == '0') {
    ++zeros;
  }
  if (zeros == digits.size()) return kUnits[0];
  int d = digits[digits.size() - 1 - zeros] - '0';
  switch (zeros) {
    case 0: return kUnits[d];
    case 1: return kTens[d];
    case 2: return "yüz";
  }
  if (zeros < 6) return "bin";
  if (zeros < 9) return "milyon";
  return "milyar";
}

std::string turkish_letter_name(UChar32 lower) {
  switch (lower) {
    case 'a': return "a";
    case 'b': return "be";
    case 'c': return "ce";
    case 0x00E7: return "çe";
    case 'd': return "de";
    case 'e': return "e";
    case 'f': return "fe";
    case 'g': return "ge";
    case 0x011F: return "yumuşak ge";
    case 'h': return "he";
    case 0x0131: return "ı";
    case 'i': return "i";
    case 'j': return "je";
    case 'k': return "ka";
    case 'l': return "le";
    case 'm': return "me";
    case 'n': return "ne";
    case 'o': return "o";
    case 0x00F6: return "ö";
    case 'p': return "pe";
    case 'q': return "kü";
    case 'r': return "re";
    case 's': return "se";
    case 0x015F: return "şe";
    case 't': return "te";
    case 'u': return "u";
    case 0x00FC: return "ü";
    case 'v': return "ve";
    case 'w': return "dabılyu";
    case 'x': return "iks";
    case 'y': return "ye";
    case 'z': return "ze";
  }
  return "e";
}

// Harmony class of a vowel: 'a' (a, ı), 'e' (e, i), 'o' (o, u), 'O' (ö, ü).
char vowel_class(UChar32 c) {
  switch (c) {
    case 'a': case 0x0131: case 0x00E2: return 'a';
    case 'e': case 'i': case 0x00EE: return 'e';
    case 'o': case 'u': case 0x00FB: return 'o';
    case 0x00F6: case 0x00FC: return 'O';
  }
  return 0;
}

std::string genitive_for_spoken(const icu::UnicodeString &spoken) {
  char last_class = 0;
  bool ends_in_vowel = false;
  for (int32_t i = 0; i < spoken.length();) {
    UChar32 c = spoken.char32At(i);
    char cls = vowel_class(c);
    if (cls) last_class = cls;
    ends_in_vowel = cls != 0;
    i += U16_LENGTH(c);
  }
  std::string core;
  switch (last_class) {
    case 'a': core = "ın"; break;
    case 'o': core = "un"; break;
    case 'O': core = "ün"; break;
    default: core = "in"; break;
  }
  return "'" + std::string(ends_in_vowel ? "n" : "") + core;
}

Json::string_t dump_line(const Json &j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

[[noreturn]] void schema_error(const std::string &msg) {
  throw_error(ErrorKind::kData, "SchemaViolation", msg);
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kTest: return "test";
    case Split::kDev: return "dev";
  }
  return "train";
}

std::optional<Split> parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  if (name == "dev") return Split::kDev;
  return std::nullopt;
}

Json record_to_json(const CorpusRecord &r) {
  Json j = {{"id", r.id},
            {"lang", language_code(r.language)},
            {"topic", r.topic},
            {"comment", r.comment}};
  if (r.comment_raw) j["comment_raw"] = *r.comment_raw;
  j["stance"] = stance_name(r.stance);
  j["policy"] = r.policy;
  j["policy_superset_id"] = r.policy_superset_id;
  j["split"] = split_name(r.split);
  return j;
}

CorpusRecord record_from_json(const Json &j) {
  static const std::set<std::string> kFields = {
      "id",     "lang",   "topic", "comment", "comment_raw",
      "stance", "policy", "policy_superset_id", "split"};
  if (!j.is_object()) schema_error("record is not an object");
  for (const auto &[key, value] : j.items()) {
    if (!kFields.count(key)) schema_error("unknown field '" + key + "'");
  }
  auto str = [&](const char *key) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      schema_error(std::string("field '") + key + "' must be a string");
    }
    return it->get<std::string>();
  };
  CorpusRecord r;
  r.id = str("id");
  auto lang = parse_language(str("lang"));
  if (!lang) schema_error("field 'lang' must be one of en, de, tr");
  r.language = *lang;
  r.topic = str("topic");
  r.comment = str("comment");
  if (j.contains("comment_raw")) r.comment_raw = str("comment_raw");
  auto stance = parse_stance(str("stance"));
  if (!stance) {
    schema_error("field 'stance' must be one of keep, delete, merge, comment");
  }
  r.stance = *stance;
  r.policy = str("policy");
  auto sid = j.find("policy_superset_id");
  if (sid == j.end() || !sid->is_number_integer()) {
    schema_error("field 'policy_superset_id' must be an integer");
  }
  r.policy_superset_id = sid->get<int>();
  auto split = parse_split(str("split"));
  if (!split) schema_error("field 'split' must be one of train, test, dev");
  r.split = *split;
  return r;
}

void SplitPlan::validate() const {
  if (train < 0 || test < 0 || dev < 0 ||
      std::fabs(train + test + dev - 1.0) > 1e-9) {
    throw_error(ErrorKind::kConfig, "InvalidArgument",
                "split ratios must be non-negative and sum to 1");
  }
}

std::string scrub_policy_mentions(std::string_view text,
                                  const PolicyPrefixSet &prefixes) {
  std::string current(text);
  for (;;) {
    std::vector<Span> spans;
    for (const PolicyLink &link : find_policy_links(current, prefixes, false)) {
      spans.push_back(link.span);
    }
    for (std::sregex_iterator it(current.begin(), current.end(),
                                 bare_shortcut_regex()),
         end;
         it != end; ++it) {
      size_t b = static_cast<size_t>(it->position(0));
      spans.push_back({b, b + static_cast<size_t>(it->length(0))});
    }
    std::string next = remove_spans(current, std::move(spans));
    if (next == current) return next;
    current = std::move(next);
  }
}

std::string remove_spans(std::string_view text, std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end(), [](const Span &a, const Span &b) {
    return a.begin < b.begin;
  });
  std::string out;
  size_t pos = 0;
  for (const Span &s : spans) {
    size_t b = std::min(s.begin, text.size());
    size_t e = std::min(s.end, text.size());
    if (e <= pos) continue;
    if (b > pos) out.append(text.substr(pos, b - pos));
    out.push_back(' ');
    pos = e;
  }
  if (pos < text.size()) out.append(text.substr(pos));
  return collapse_whitespace(out);
}

std::string anonymize(std::string_view text, const SignatureSpans &spans) {
  std::vector<Span> all = spans.signatures;
  all.insert(all.end(), spans.timestamps.begin(), spans.timestamps.end());
  return remove_spans(text, std::move(all));
}

TopicOverrides load_topic_overrides(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw_error(ErrorKind::kConfig, "IoError", "cannot open " + path);
  }
  TopicOverrides out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    size_t tab = row.find('\t');
    if (tab == std::string_view::npos) {
      throw_error(ErrorKind::kConfig, "SchemaViolation",
                  path + ":" + std::to_string(line_no) +
                      ": expected title<TAB>topic");
    }
    out[std::string(trim(row.substr(0, tab)))] =
        std::string(trim(row.substr(tab + 1)));
  }
  return out;
}

std::string default_topic_overrides_path(Language lang) {
  return data_dir() + "/topics/" + std::string(language_code(lang)) +
         ".overrides";
}

std::string turkish_genitive_suffix(std::string_view title) {
  icu::UnicodeString us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(title.data(), static_cast<int32_t>(title.size())));
  int32_t end = us.length();
  while (end > 0 && !u_isalnum(us.char32At(us.moveIndex32(end, -1)))) {
    end = us.moveIndex32(end, -1);
  }
  if (end == 0) return "'in";
  UChar32 last = us.char32At(us.moveIndex32(end, -1));
  if (u_isdigit(last)) {
    std::string digits;
    int32_t i = end;
    while (i > 0 && u_isdigit(us.char32At(us.moveIndex32(i, -1)))) {
      i = us.moveIndex32(i, -1);
      digits.insert(digits.begin(),
                    static_cast<char>('0' + u_charDigitValue(us.char32At(i))));
    }
    return genitive_for_spoken(
        icu::UnicodeString::fromUTF8(spoken_number_tail(digits)));
  }
  int32_t begin = end;
  bool all_upper = true;
  while (begin > 0) {
    int32_t prev = us.moveIndex32(begin, -1);
    UChar32 c = us.char32At(prev);
    if (!u_isalpha(c)) break;
    all_upper = all_upper && u_isupper(c);
    begin = prev;
  }
  icu::UnicodeString word(us, begin, end - begin);
  word.toLower(icu::Locale("tr"));
  if (all_upper) {
    UChar32 final_letter = word.char32At(word.moveIndex32(word.length(), -1));
    return genitive_for_spoken(
        icu::UnicodeString::fromUTF8(turkish_letter_name(final_letter)));
  }
  return genitive_for_spoken(word);
}

std::string make_topic(std::string_view article_title, Language lang,
                       const TopicOverrides *overrides) {
  if (overrides) {
    auto it = overrides->find(std::string(article_title));
    if (it != overrides->end()) return it->second;
  }
  switch (lang) {
    case Language::kEn: return "Deletion of " + std::string(article_title);
    case Language::kDe: return "Löschung von " + std::string(article_title);
    case Language::kTr:
      return std::string(article_title) + turkish_genitive_suffix(article_title) +
             " silinmesi";
  }
  return std::string(article_title);
}

std::string record_id(Language lang, std::string_view article, size_t index) {
  std::string key(language_code(lang));
  key += '\x1f';
  key += article;
  key += '\x1f';
  key += std::to_string(index);
  return hex64(fnv1a64(key));
}

void assign_splits(std::vector<CorpusRecord> &records, const SplitPlan &plan) {
  plan.validate();
  std::map<Language, std::vector<CorpusRecord *>> groups;
  for (CorpusRecord &r : records) groups[r.language].push_back(&r);
  const std::string salt = std::to_string(plan.seed) + ":";
  for (auto &[lang, group] : groups) {
    std::vector<std::pair<uint64_t, CorpusRecord *>> order;
    order.reserve(group.size());
    for (CorpusRecord *r : group) order.emplace_back(fnv1a64(salt + r->id), r);
    std::sort(order.begin(), order.end(), [](const auto &a, const auto &b) {
      return a.first != b.first ? a.first < b.first : a.second->id < b.second->id;
    });
    const size_t n = order.size();
    size_t test = static_cast<size_t>(std::llround(plan.test * n));
    size_t dev = static_cast<size_t>(std::llround(plan.dev * n));
    if (lang == Language::kTr) {
      if (n < plan.tr_min_test) {
        throw_error(ErrorKind::kData, "TooFewRecords",
                    "tr corpus has " + std::to_string(n) +
                        " records, fewer than the minimum test size " +
                        std::to_string(plan.tr_min_test));
      }
      test = std::max(test, plan.tr_min_test);
    }
    test = std::min(test, n);
    dev = std::min(dev, n - test);
    for (size_t i = 0; i < n; ++i) {
      order[i].second->split =
          i < test ? Split::kTest : (i < test + dev ? Split::kDev : Split::kTrain);
    }
  }
}

void emit_jsonl(const std::vector<CorpusRecord> &records,
                const std::string &path, bool include_raw) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_error(ErrorKind::kConfig, "IoError", "cannot write " + path);
  for (const CorpusRecord &r : records) {
    Json j = record_to_json(r);
    if (!include_raw) j.erase("comment_raw");
    out << dump_line(j) << '\n';
  }
  if (!out) throw_error(ErrorKind::kConfig, "IoError", "write failed: " + path);
}

std::vector<CorpusRecord> load_jsonl(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::kConfig, "IoError", "cannot open " + path);
  std::vector<CorpusRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      records.push_back(record_from_json(Json::parse(line)));
    } catch (const Json::exception &e) {
      throw_error(ErrorKind::kData, "SchemaViolation",
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error &e) {
      throw_error(ErrorKind::kData, "SchemaViolation",
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

BuildResult build_records(const std::vector<RawDiscussion> &discussions,
                          const BuildContext &ctx) {
  if (!ctx.lexicon || !ctx.registry) {
    throw_error(ErrorKind::kConfig, "InvalidArgument",
                "build_records needs a lexicon and a registry");
  }
  const PolicyPrefixSet prefixes = PolicyPrefixSet::defaults(ctx.language);
  BuildResult out;
  std::set<std::string> seen_ids;
  for (const RawDiscussion &d : discussions) {
    const std::string topic = make_topic(d.article_title, ctx.language, ctx.topics);
    for (size_t i = 0; i < d.comments.size(); ++i) {
      const RawComment &c = d.comments[i];
      ++out.parsed_comments;
      std::optional<std::string_view> vote;
      if (c.vote_raw) vote = *c.vote_raw;
      StanceOutcome outcome = normalize_stance(vote, *ctx.lexicon);
      if (outcome.discard) {
        ++out.discarded[*outcome.discard];
        if (*outcome.discard != DiscardReason::kNoVote) {
          ++out.unknown_votes[outcome.normalized];
        }
        continue;
      }
      ++out.stance_comments;
      std::vector<std::string> targets;
      for (const std::string &raw : c.policy_targets) {
        if (auto t = ctx.registry->canonicalize(raw)) targets.push_back(*t);
      }
      auto policy = select_primary_policy(targets);
      if (!policy) continue;

      CorpusRecord r;
      r.id = record_id(ctx.language, d.article_title, i);
      if (!seen_ids.insert(r.id).second) {
        emit_diagnostic("warning", "DuplicateRecordId",
                        {{"id", r.id}, {"article", d.article_title}});
        continue;
      }
      r.language = ctx.language;
      r.topic = topic;
      std::vector<Span> spans = c.signature_spans;
      spans.insert(spans.end(), c.timestamp_spans.begin(), c.timestamp_spans.end());
      if (c.vote_span) spans.push_back(*c.vote_span);
      std::string raw = remove_spans(c.text, std::move(spans));
      r.comment = scrub_policy_mentions(raw, prefixes);
      if (ctx.keep_raw) r.comment_raw = std::move(raw);
      r.stance = *outcome.stance;
      r.policy = *policy;
      r.policy_superset_id =
          ctx.alignment ? ctx.alignment->project(ctx.language, *policy) : 0;
      out.records.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<std::pair<std::string, size_t>> LanguageStats::top_policies(
    size_t k) const {
  std::vector<std::pair<std::string, size_t>> v(policy_counts.begin(),
                                                policy_counts.end());
  std::sort(v.begin(), v.end(), [](const auto &a, const auto &b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (v.size() > k) v.resize(k);
  return v;
}

Json DatasetStats::to_json(size_t top_k) const {
  Json out = Json::object();
  for (const auto &[lang, s] : languages) {
    Json stance = Json::object();
    Json shares = Json::object();
    for (Stance st : kAllStances) {
      size_t n = s.stance_counts.count(st) ? s.stance_counts.at(st) : 0;
      stance[std::string(stance_name(st))] = n;
      shares[std::string(stance_name(st))] =
          s.records ? static_cast<double>(n) / s.records : 0.0;
    }
    Json top = Json::array();
    for (const auto &[title, n] : s.top_policies(top_k)) {
      top.push_back({{"policy", title},
                     {"count", n},
                     {"share", s.records ? static_cast<double>(n) / s.records : 0.0}});
    }
    out[std::string(language_code(lang))] = {
        {"records", s.records},
        {"stance_counts", stance},
        {"stance_shares", shares},
        {"policy_counts", s.policy_counts},
        {"top_policies", top},
        {"comment_total", s.comment_total},
        {"mention_rate", s.mention_rate},
        {"mean_comment_length", s.mean_comment_length},
        {"policy_count", s.policy_count}};
  }
  return out;
}

DatasetStats compute_stats(const std::vector<CorpusRecord> &records,
                           const std::map<Language, size_t> &comment_totals) {
  DatasetStats stats;
  std::map<Language, size_t> total_length;
  for (const CorpusRecord &r : records) {
    LanguageStats &s = stats.languages[r.language];
    ++s.records;
    ++s.stance_counts[r.stance];
    ++s.policy_counts[r.policy];
    total_length[r.language] += utf8_length(r.comment);
  }
  for (auto &[lang, s] : stats.languages) {
    for (Stance st : kAllStances) s.stance_counts.try_emplace(st, 0);
    auto it = comment_totals.find(lang);
    s.comment_total = it != comment_totals.end() ? it->second : s.records;
    s.mention_rate = s.comment_total
                         ? static_cast<double>(s.records) / s.comment_total
                         : 0.0;
    s.mean_comment_length =
        s.records ? static_cast<double>(total_length[lang]) / s.records : 0.0;
    s.policy_count = s.policy_counts.size();
  }
  return stats;
}

std::string policy_chart_svg(const LanguageStats &stats, Language lang,
                             size_t top_k) {
  auto escape = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
      }
    }
    return out;
  };
  const auto top = stats.top_policies(top_k);
  const int bar_h = 20, label_w = 320, plot_w = 400, margin = 10;
  const int height = margin * 3 + 20 + static_cast<int>(top.size()) * bar_h;
  const size_t max_count = top.empty() ? 1 : std::max<size_t>(top.front().second, 1);
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << label_w + plot_w + 80 << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<text x=\"" << margin << "\" y=\"" << margin + 12
      << "\" font-weight=\"bold\">Most frequent policies (" << language_code(lang)
      << ")</text>\n";
  int y = margin * 2 + 20;
  for (const auto &[title, n] : top) {
    int w = static_cast<int>(static_cast<double>(n) / max_count * plot_w);
    svg << "<text x=\"" << label_w - 6 << "\" y=\"" << y + 14
        << "\" text-anchor=\"end\">" << escape(title) << "</text>\n";
    svg << "<rect x=\"" << label_w << "\" y=\"" << y + 2 << "\" width=\"" << w
        << "\" height=\"" << bar_h - 4 << "\" fill=\"#4878a8\"/>\n";
    svg << "<text x=\"" << label_w + w + 4 << "\" y=\"" << y + 14 << "\">" << n
        << "</text>\n";
    y += bar_h;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<LintFinding> lint_records(const std::vector<CorpusRecord> &records) {
  std::vector<LintFinding> out;
  auto add = [&](const CorpusRecord &r, const char *kind, size_t at) {
    size_t b = at > 20 ? at - 20 : 0;
    out.push_back({r.id, kind, r.comment.substr(b, 60)});
  };
  static const char *const kTalkMarkers[] = {"(talk)", "(Diskussion)",
                                             "(mesaj)", "~~~~"};
  for (const CorpusRecord &r : records) {
    const PolicyPrefixSet prefixes = PolicyPrefixSet::defaults(r.language);
    if (auto links = find_policy_links(r.comment, prefixes, false); !links.empty()) {
      add(r, "policy_link", links.front().span.begin);
    }
    SignatureSpans sig = detect_signatures(r.comment, r.language);
    if (!sig.signatures.empty()) add(r, "user_link", sig.signatures.front().begin);
    if (!sig.timestamps.empty()) add(r, "timestamp", sig.timestamps.front().begin);
    for (const char *marker : kTalkMarkers) {
      if (size_t at = r.comment.find(marker); at != std::string::npos) {
        add(r, "signature_residue", at);
        break;
      }
    }
  }
  return out;
}

}  // namespace wikistance
