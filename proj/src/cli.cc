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

#include "wikistance/cli.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "wikistance/align.h"
#include "wikistance/corpus.h"
#include "wikistance/eval.h"
#include "wikistance/ingest.h"
#include "wikistance/labels.h"
#include "wikistance/pipeline.h"
#include "wikistance/textmodels.h"

namespace wikistance {

namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  std::vector<std::string> langs = {"en"};
  int from_year = 2005;
  int to_year = 2022;
  std::string cache;
  uint64_t seed = 0;
  bool offline = false;
  std::string out;
  bool multilingual = false;
  std::string task = "stance";
  std::string fixture;
  std::string data;
};

struct BuildFlags {
  size_t tr_min_test = 200;
  std::vector<std::string> min_counts;  // lang=N
  bool report_unknown = false;
  std::string overrides;
};

struct StatsFlags {
  std::vector<std::string> corpora;
  std::vector<std::string> comment_totals;  // lang=N
  std::string chart_dir;
  size_t top = 15;
};

struct AlignFlags {
  std::vector<std::string> registries;
  std::string links;
  std::string overrides;
};

struct TrainFlags {
  std::vector<std::string> corpora;
  size_t epochs = 50;
  size_t batch = 64;
  double lr = 0.1;
  double l2 = 1e-4;
  size_t min_df = 2;
  size_t max_features = 50000;
  size_t hidden = 256;
  std::vector<size_t> ratio = {3, 1};
  size_t freeze_after = 0;
};

struct PredictFlags {
  std::string model;
  std::vector<std::string> corpora;
  std::string split = "test";
};

struct EvalFlags {
  std::string gold;
  std::string pred;
  std::string report;
  std::string setup;
  std::string model_id = "unspecified";
  std::string split;
};

struct SalientFlags {
  std::string model;
  std::string label;
  size_t k = 20;
};

struct LintFlags {
  std::vector<std::string> corpora;
};

std::vector<Language> parse_languages(const std::vector<std::string> &codes) {
  std::vector<Language> out;
  for (const std::string &code : codes) {
    auto lang = parse_language(code);
    if (!lang) throw_error(ErrorKind::kConfig, "InvalidArgument", "unknown language '" + code + "'");
    if (std::find(out.begin(), out.end(), *lang) == out.end()) out.push_back(*lang);
  }
  return out;
}

std::map<Language, size_t> parse_lang_counts(const std::vector<std::string> &items) {
  std::map<Language, size_t> out;
  for (const std::string &item : items) {
    size_t eq = item.find('=');
    auto lang = eq == std::string::npos ? std::nullopt : parse_language(item.substr(0, eq));
    if (!lang) {
      throw_error(ErrorKind::kConfig, "InvalidArgument", "expected <lang>=<count>, got '" + item + "'");
    }
    try {
      out[*lang] = std::stoul(item.substr(eq + 1));
    } catch (const std::exception &) {
      throw_error(ErrorKind::kConfig, "InvalidArgument", "expected <lang>=<count>, got '" + item + "'");
    }
  }
  return out;
}

Json read_json_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::kConfig, "IoError", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception &e) {
    throw_error(ErrorKind::kData, "SchemaViolation", path + ": " + e.what());
  }
}

std::string dump(const Json &j, int indent = 2) {
  return j.dump(indent, ' ', false, Json::error_handler_t::replace);
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_error(ErrorKind::kConfig, "IoError", "cannot write " + path);
  out << text;
}

// Writes to --out when given, else to the output stream.
void emit(const GlobalFlags &g, std::ostream &out, const Json &j) {
  if (g.out.empty()) {
    out << dump(j) << '\n';
  } else {
    write_text(g.out, dump(j) + "\n");
  }
}

std::vector<CorpusRecord> load_corpora(const std::vector<std::string> &paths) {
  std::vector<CorpusRecord> all;
  for (const std::string &p : paths) {
    for (CorpusRecord &r : load_jsonl(p)) all.push_back(std::move(r));
  }
  return all;
}

std::unique_ptr<MediaWikiClient> make_client(const GlobalFlags &g) {
  std::shared_ptr<Transport> transport;
  if (!g.fixture.empty()) {
    transport = std::make_shared<FixtureTransport>(g.fixture);
  } else if (!g.offline) {
    transport = std::make_shared<CurlTransport>();
  }
  fs::path root = g.cache.empty() ? default_cache_root() : fs::path(g.cache);
  ClientOptions options;
  options.offline = g.offline;
  return std::make_unique<MediaWikiClient>(PageCache(root), transport, options);
}

fs::path manifest_path(const GlobalFlags &g) {
  fs::path root = g.cache.empty() ? default_cache_root() : fs::path(g.cache);
  return root / "manifest.json";
}

PipelineOptions pipeline_options(const GlobalFlags &g, const BuildFlags &b) {
  PipelineOptions o;
  o.languages = parse_languages(g.langs);
  o.from_year = g.from_year;
  o.to_year = g.to_year;
  o.plan.seed = g.seed;
  o.plan.tr_min_test = b.tr_min_test;
  o.min_count = parse_lang_counts(b.min_counts);
  o.data_root = g.data;
  o.alignment_overrides = b.overrides;
  return o;
}

// --- Subcommands ------------------------------------------------------------

void run_ingest(const GlobalFlags &g, const BuildFlags &b, std::ostream &out) {
  PipelineOptions o = pipeline_options(g, b);
  auto client = make_client(g);
  Json summary = Json::object();
  for (Language lang : o.languages) {
    LanguageIngest in = ingest_language(*client, o, lang);
    // Curated policies reached by some link target; these pages exist.
    std::set<std::string> reached;
    for (const auto &[raw, title] : in.redirect_map) {
      if (in.curation.is_policy(title)) reached.insert(title);
    }
    std::vector<std::string> policies(reached.begin(), reached.end());
    if (!policies.empty()) client->fetch_interwiki(o.source_for(lang), policies);
    size_t comments = 0;
    for (const RawDiscussion &d : in.discussions) comments += d.comments.size();
    summary[std::string(language_code(lang))] = {
        {"discussions", in.discussions.size()},
        {"comments", comments},
        {"resolved_targets", in.redirect_map.size()}};
  }
  fs::path manifest = manifest_path(g);
  fs::create_directories(manifest.parent_path());
  client->manifest().save(manifest);
  summary["requests"] = client->request_count();
  out << dump(summary) << '\n';
}

void run_build(const GlobalFlags &g, const BuildFlags &b, std::ostream &out) {
  PipelineOptions o = pipeline_options(g, b);
  fs::path manifest = manifest_path(g);
  auto client = make_client(g);
  if (fs::exists(manifest)) client->manifest() = SnapshotManifest::load(manifest);
  BuildOutput built = build_corpus(*client, o);

  fs::path dir = g.out.empty() ? fs::path("corpus") : fs::path(g.out);
  fs::create_directories(dir);
  Json summary = Json::object();
  for (Language lang : o.languages) {
    const std::string code(language_code(lang));
    std::vector<CorpusRecord> records;
    for (const CorpusRecord &r : built.records) {
      if (r.language == lang) records.push_back(r);
    }
    emit_jsonl(records, (dir / (code + ".jsonl")).string(), false);
    emit_jsonl(records, (dir / (code + ".raw.jsonl")).string(), true);
    write_text((dir / ("registry." + code + ".json")).string(),
               dump(built.registries.at(lang).to_json()) + "\n");
    const BuildResult &res = built.per_language.at(lang);
    Json discarded = Json::object();
    for (const auto &[reason, n] : res.discarded) {
      discarded[std::string(discard_reason_name(reason))] = n;
    }
    summary[code] = {{"records", records.size()},
                     {"parsed_comments", res.parsed_comments},
                     {"stance_comments", res.stance_comments},
                     {"discarded", discarded},
                     {"policies", built.registries.at(lang).canonical.size()}};
    if (b.report_unknown) {
      std::vector<std::pair<std::string, size_t>> unknown(res.unknown_votes.begin(),
                                                          res.unknown_votes.end());
      std::sort(unknown.begin(), unknown.end(), [](const auto &a, const auto &c) {
        return a.second != c.second ? a.second > c.second : a.first < c.first;
      });
      Json tally = Json::array();
      for (const auto &[vote, n] : unknown) tally.push_back({{"vote", vote}, {"count", n}});
      write_text((dir / ("unknown_votes." + code + ".json")).string(), dump(tally) + "\n");
    }
  }
  write_text((dir / "alignment.json").string(), dump(built.alignment.to_json()) + "\n");
  write_text((dir / "stats.json").string(), dump(built.stats.to_json()) + "\n");
  summary["superset_size"] = built.alignment.size();
  if (!g.offline) {
    fs::create_directories(manifest.parent_path());
    client->manifest().save(manifest);
  }
  out << dump(summary) << '\n';
}

void run_stats(const GlobalFlags &g, const StatsFlags &s, std::ostream &out) {
  std::vector<CorpusRecord> records = load_corpora(s.corpora);
  std::set<Language> wanted;
  for (Language l : parse_languages(g.langs)) wanted.insert(l);
  std::erase_if(records, [&](const CorpusRecord &r) { return !wanted.count(r.language); });
  DatasetStats stats = compute_stats(records, parse_lang_counts(s.comment_totals));
  if (!s.chart_dir.empty()) {
    fs::create_directories(s.chart_dir);
    for (const auto &[lang, ls] : stats.languages) {
      write_text((fs::path(s.chart_dir) /
                  ("policies." + std::string(language_code(lang)) + ".svg"))
                     .string(),
                 policy_chart_svg(ls, lang, s.top));
    }
  }
  emit(g, out, stats.to_json(s.top));
}

void run_align(const GlobalFlags &g, const AlignFlags &a, std::ostream &out) {
  std::vector<PolicyRegistry> registries;
  for (const std::string &path : a.registries) {
    registries.push_back(PolicyRegistry::from_json(read_json_file(path)));
  }
  InterwikiTable table;
  if (!a.links.empty()) {
    // {"<lang>": {"<title>": {"<lang>": "<title>"}}}
    Json links = read_json_file(a.links);
    for (const auto &[code, titles] : links.items()) {
      auto lang = parse_language(code);
      if (!lang) throw_error(ErrorKind::kData, "SchemaViolation", "bad language " + code);
      for (const auto &[title, targets] : titles.items()) {
        LanguageLinks ll;
        for (const auto &[tcode, ttitle] : targets.items()) {
          auto tlang = parse_language(tcode);
          if (tlang) ll[*tlang] = ttitle.get<std::string>();
        }
        table[{*lang, title}] = ll;
      }
    }
  } else if (registries.size() > 1) {
    auto client = make_client(g);
    for (const PolicyRegistry &reg : registries) {
      std::vector<std::string> titles(reg.canonical.begin(), reg.canonical.end());
      for (auto &[title, ll] : client->fetch_interwiki(WikiSource::defaults(reg.language), titles)) {
        table[{reg.language, title}] = ll;
      }
    }
  }
  AlignmentOverrides overrides;
  if (!a.overrides.empty()) overrides = AlignmentOverrides::load(a.overrides);
  emit(g, out, align(registries, table, overrides).to_json());
}

std::string policy_label(const CorpusRecord &r, bool multilingual, bool mixed) {
  if (multilingual) return std::to_string(r.policy_superset_id);
  if (mixed) return std::string(language_code(r.language)) + ":" + r.policy;
  return r.policy;
}

bool mixed_languages(const std::vector<CorpusRecord> &records) {
  std::set<Language> langs;
  for (const CorpusRecord &r : records) langs.insert(r.language);
  return langs.size() > 1;
}

std::vector<std::string> stance_labels() {
  std::vector<std::string> out;
  for (Stance s : kAllStances) out.emplace_back(stance_name(s));
  return out;
}

void run_train(const GlobalFlags &g, const TrainFlags &t, std::ostream &out) {
  if (g.task != "stance" && g.task != "policy" && g.task != "joint") {
    throw_error(ErrorKind::kConfig, "InvalidArgument", "unknown task " + g.task);
  }
  if (t.ratio.size() != 2) {
    throw_error(ErrorKind::kConfig, "InvalidArgument", "--ratio takes two integers");
  }
  std::vector<CorpusRecord> records = load_corpora(t.corpora);
  std::erase_if(records, [](const CorpusRecord &r) { return r.split != Split::kTrain; });
  if (records.empty()) {
    throw_error(ErrorKind::kData, "EmptyInput", "no training records in the corpus");
  }
  const bool mixed = mixed_languages(records);

  std::vector<std::vector<std::string>> docs;
  for (const CorpusRecord &r : records) docs.push_back(pair_tokens(r.topic, r.comment, r.language));
  TextModel model;
  model.task = g.task;
  model.multilingual = g.multilingual;
  std::set<Language> langs;
  for (const CorpusRecord &r : records) langs.insert(r.language);
  model.languages.assign(langs.begin(), langs.end());
  model.vocabulary = Vocabulary::fit(docs, t.min_df, t.max_features);

  std::vector<FeatureVector> x;
  for (const auto &doc : docs) x.push_back(model.vocabulary.featurize(doc));
  std::vector<std::string> s_labels = stance_labels();
  std::vector<size_t> s_y;
  for (const CorpusRecord &r : records) s_y.push_back(static_cast<size_t>(r.stance));
  std::set<std::string> p_set;
  for (const CorpusRecord &r : records) p_set.insert(policy_label(r, g.multilingual, mixed));
  std::vector<std::string> p_labels(p_set.begin(), p_set.end());
  std::vector<size_t> p_y;
  for (const CorpusRecord &r : records) {
    p_y.push_back(static_cast<size_t>(
        std::lower_bound(p_labels.begin(), p_labels.end(),
                         policy_label(r, g.multilingual, mixed)) -
        p_labels.begin()));
  }

  Json summary = {{"records", records.size()}, {"features", model.vocabulary.size()}};
  if (g.task == "joint") {
    MultiTaskConfig cfg;
    cfg.hidden = t.hidden;
    cfg.ratio = {t.ratio[0], t.ratio[1]};
    cfg.l2 = t.l2;
    cfg.lr = t.lr;
    cfg.epochs = t.epochs;
    cfg.batch = t.batch;
    cfg.seed = g.seed;
    if (t.freeze_after > 0) cfg.freeze_projection_after = t.freeze_after;
    model.kind = "multitask";
    model.multitask = train_multitask(x, s_y, p_y, s_labels, p_labels, cfg);
    summary["stance_updates"] = model.multitask->stance_updates;
    summary["policy_updates"] = model.multitask->policy_updates;
  } else {
    SoftmaxConfig cfg;
    cfg.l2 = t.l2;
    cfg.lr = t.lr;
    cfg.epochs = t.epochs;
    cfg.batch = t.batch;
    cfg.seed = g.seed;
    TrainHistory history;
    model.kind = "softmax";
    model.head = g.task == "stance" ? train_softmax(x, s_y, s_labels, cfg, &history)
                                    : train_softmax(x, p_y, p_labels, cfg, &history);
    summary["objective"] = history.objective;
  }
  model.save(g.out.empty() ? "model.json" : g.out);
  out << dump(summary) << '\n';
}

void run_predict(const GlobalFlags &g, const PredictFlags &p, std::ostream &out) {
  TextModel model = TextModel::load(p.model);
  std::vector<CorpusRecord> records = load_corpora(p.corpora);
  if (p.split != "all") {
    auto split = parse_split(p.split);
    if (!split) throw_error(ErrorKind::kConfig, "InvalidArgument", "unknown split " + p.split);
    std::erase_if(records, [&](const CorpusRecord &r) { return r.split != *split; });
  }
  std::ostringstream lines;
  for (const CorpusRecord &r : records) {
    FeatureVector x = model.vocabulary.featurize(pair_tokens(r.topic, r.comment, r.language));
    Json j = {{"id", r.id}};
    auto put_policy = [&](const std::string &label) {
      if (model.multilingual) {
        j["policy_superset_id"] = std::stoi(label);
      } else {
        size_t colon = label.find(':');
        bool prefixed = label.size() > 3 && label[2] == ':' && parse_language(label.substr(0, 2));
        j["policy"] = prefixed && colon == 2 ? label.substr(3) : label;
      }
    };
    if (model.kind == "multitask") {
      const MultiTaskLinearModel &m = *model.multitask;
      j["stance"] = m.stance.labels[m.predict(Task::kStance, x)];
      put_policy(m.policy.labels[m.predict(Task::kPolicy, x)]);
    } else if (model.task == "stance") {
      j["stance"] = model.head->labels[model.head->predict(x)];
    } else {
      put_policy(model.head->labels[model.head->predict(x)]);
    }
    lines << dump(j, -1) << '\n';
  }
  if (g.out.empty()) {
    out << lines.str();
  } else {
    write_text(g.out, lines.str());
  }
}

Json evaluate_task(const std::string &task, const std::vector<CorpusRecord> &gold,
                   const std::map<std::string, Json> &preds, const GlobalFlags &g,
                   const EvalFlags &e) {
  std::vector<std::string> gold_labels, pred_labels;
  const bool mixed = mixed_languages(gold);
  for (const CorpusRecord &r : gold) {
    auto it = preds.find(r.id);
    if (it == preds.end()) {
      throw_error(ErrorKind::kData, "MissingPrediction", "no prediction for record " + r.id);
    }
    const Json &p = it->second;
    if (task == "stance") {
      if (!p.contains("stance") || !p["stance"].is_string()) {
        throw_error(ErrorKind::kData, "SchemaViolation", "prediction " + r.id + " lacks a stance");
      }
      gold_labels.emplace_back(stance_name(r.stance));
      pred_labels.push_back(p["stance"].get<std::string>());
    } else if (g.multilingual) {
      if (!p.contains("policy_superset_id") || !p["policy_superset_id"].is_number_integer()) {
        throw_error(ErrorKind::kData, "SchemaViolation",
                    "prediction " + r.id + " lacks a policy_superset_id");
      }
      gold_labels.push_back(std::to_string(r.policy_superset_id));
      pred_labels.push_back(std::to_string(p["policy_superset_id"].get<int>()));
    } else {
      if (!p.contains("policy") || !p["policy"].is_string()) {
        throw_error(ErrorKind::kData, "SchemaViolation", "prediction " + r.id + " lacks a policy");
      }
      std::string prefix = mixed ? std::string(language_code(r.language)) + ":" : "";
      gold_labels.push_back(prefix + r.policy);
      pred_labels.push_back(prefix + p["policy"].get<std::string>());
    }
  }
  std::vector<std::string> labels;
  if (task == "stance") {
    labels = stance_labels();
  } else {
    std::set<std::string> all(gold_labels.begin(), gold_labels.end());
    all.insert(pred_labels.begin(), pred_labels.end());
    labels.assign(all.begin(), all.end());
  }
  std::set<Language> langs;
  for (const CorpusRecord &r : gold) langs.insert(r.language);
  std::string language = langs.size() == 1 ? std::string(language_code(*langs.begin())) : "multi";
  std::string setup = e.setup;
  if (setup.empty()) {
    setup = g.task == "joint" ? "multitask" : "single";
    if (g.multilingual) setup = "multilingual-" + setup;
  }
  EvalReport report = make_report(task, language, setup, e.model_id,
                                  static_cast<int64_t>(g.seed),
                                  confusion(gold_labels, pred_labels, labels));
  Json j = report.to_json();
  check_report(j);
  return j;
}

void run_eval(const GlobalFlags &g, const EvalFlags &e, std::ostream &out) {
  if (!e.report.empty()) {
    Json report = read_json_file(e.report);
    std::vector<std::string> problems = validate_report(report);
    if (!problems.empty()) check_report(report);  // throws with the full list
    Json verdict = {{"valid", true}, {"macro_f1", report["macro_f1"]},
                    {"accuracy", report["accuracy"]}};
    emit(g, out, verdict);
    return;
  }
  if (e.gold.empty() || e.pred.empty()) {
    throw_error(ErrorKind::kConfig, "InvalidArgument", "eval needs --gold and --pred, or --report");
  }
  std::vector<CorpusRecord> gold = load_jsonl(e.gold);
  if (!e.split.empty()) {
    auto split = parse_split(e.split);
    if (!split) throw_error(ErrorKind::kConfig, "InvalidArgument", "unknown split " + e.split);
    std::erase_if(gold, [&](const CorpusRecord &r) { return r.split != *split; });
  }
  if (gold.empty()) throw_error(ErrorKind::kData, "EmptyMatrix", "no gold records to evaluate");
  std::map<std::string, Json> preds;
  {
    std::ifstream in(e.pred, std::ios::binary);
    if (!in) throw_error(ErrorKind::kConfig, "IoError", "cannot open " + e.pred);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const Json::exception &ex) {
        throw_error(ErrorKind::kData, "SchemaViolation",
                    e.pred + ":" + std::to_string(line_no) + ": " + ex.what());
      }
      if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
        throw_error(ErrorKind::kData, "SchemaViolation",
                    e.pred + ":" + std::to_string(line_no) + ": prediction needs a string id");
      }
      preds[j["id"].get<std::string>()] = j;
    }
  }
  if (g.task == "joint") {
    emit(g, out, {{"stance", evaluate_task("stance", gold, preds, g, e)},
                  {"policy", evaluate_task("policy", gold, preds, g, e)}});
  } else if (g.task == "stance" || g.task == "policy") {
    emit(g, out, evaluate_task(g.task, gold, preds, g, e));
  } else {
    throw_error(ErrorKind::kConfig, "InvalidArgument", "unknown task " + g.task);
  }
}

void run_salient(const GlobalFlags &g, const SalientFlags &s, std::ostream &out) {
  TextModel model = TextModel::load(s.model);
  if (!model.head) {
    throw_error(ErrorKind::kConfig, "InvalidArgument", "salient terms need a single-task model");
  }
  SalientTerms terms = salient_features(*model.head, model.vocabulary, s.label, s.k);
  auto to_json = [](const std::vector<std::pair<std::string, double>> &v) {
    Json arr = Json::array();
    for (const auto &[term, w] : v) arr.push_back({{"term", term}, {"weight", w}});
    return arr;
  };
  emit(g, out, {{"label", s.label}, {"positive", to_json(terms.positive)},
                {"negative", to_json(terms.negative)}});
}

void run_lint(const GlobalFlags &g, const LintFlags &l, std::ostream &out) {
  std::vector<CorpusRecord> records = load_corpora(l.corpora);
  Json findings = Json::array();
  for (const LintFinding &f : lint_records(records)) {
    findings.push_back({{"id", f.id}, {"kind", f.kind}, {"excerpt", f.excerpt}});
  }
  emit(g, out, {{"records", records.size()}, {"findings", findings}});
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return 2;
    case ErrorKind::kData: return 3;
    case ErrorKind::kNetwork: return 4;
  }
  return 3;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Deletion-discussion stance and policy corpus toolkit", "wikistance"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML file with option values; flags win");
  app.allow_config_extras(false);

  GlobalFlags g;
  app.add_option("--lang", g.langs, "Languages (en, de, tr)")->delimiter(',');
  app.add_option("--from", g.from_year, "First archive year")->capture_default_str();
  app.add_option("--to", g.to_year, "Last archive year")->capture_default_str();
  app.add_option("--cache", g.cache, "Cache directory (default $WIKISTANCE_CACHE or ./cache)");
  app.add_option("--seed", g.seed, "Seed for splits and training")->capture_default_str();
  app.add_flag("--offline", g.offline, "Never use the network; read the cache only");
  app.add_option("--out", g.out, "Output file, or directory for build");
  app.add_flag("--multilingual", g.multilingual, "Use superset policy labels");
  app.add_option("--task", g.task, "stance, policy or joint")
      ->check(CLI::IsMember({"stance", "policy", "joint"}))
      ->capture_default_str();
  app.add_option("--fixture", g.fixture, "Serve API requests from a recorded wiki snapshot");
  app.add_option("--data", g.data, "Directory with lexicons, curation and topic files");

  BuildFlags b;
  auto add_build_flags = [&](CLI::App *sub) {
    sub->add_option("--tr-min-test", b.tr_min_test, "Minimum Turkish test split size")
        ->capture_default_str();
    sub->add_option("--min-count", b.min_counts, "Policy frequency threshold, <lang>=<n>");
    sub->add_option("--overrides", b.overrides, "Alignment overrides file");
  };
  CLI::App *ingest = app.add_subcommand("ingest", "Fetch archives, policy pages and links into the cache");
  add_build_flags(ingest);
  CLI::App *build = app.add_subcommand("build", "Parse, label, resolve, scrub, split and emit the corpus");
  add_build_flags(build);
  build->add_flag("--report-unknown", b.report_unknown, "Tally votes missing from the lexicon");

  StatsFlags s;
  CLI::App *stats = app.add_subcommand("stats", "Dataset statistics for corpus files");
  stats->add_option("--corpus", s.corpora, "Corpus JSONL files")->required();
  stats->add_option("--comment-total", s.comment_totals,
                    "Mention-rate denominator, <lang>=<n>");
  stats->add_option("--chart", s.chart_dir, "Directory for policy bar charts (SVG)");
  stats->add_option("--top", s.top, "Number of top policies")->capture_default_str();

  AlignFlags a;
  CLI::App *alignc = app.add_subcommand("align", "Build the cross-lingual policy superset");
  alignc->add_option("--registry", a.registries, "Registry JSON files")->required();
  alignc->add_option("--links", a.links, "Language-link JSON (else fetched)");
  alignc->add_option("--overrides", a.overrides, "Alignment overrides file");

  TrainFlags t;
  CLI::App *train = app.add_subcommand("train", "Train a TF-IDF linear model on the train split");
  train->add_option("--corpus", t.corpora, "Corpus JSONL files")->required();
  train->add_option("--epochs", t.epochs)->capture_default_str();
  train->add_option("--batch", t.batch)->capture_default_str();
  train->add_option("--lr", t.lr)->capture_default_str();
  train->add_option("--l2", t.l2)->capture_default_str();
  train->add_option("--min-df", t.min_df)->capture_default_str();
  train->add_option("--max-features", t.max_features, "0 keeps every term")->capture_default_str();
  train->add_option("--hidden", t.hidden, "Shared projection width (joint)")->capture_default_str();
  train->add_option("--ratio", t.ratio, "Stance:policy steps (joint)")->expected(2)->capture_default_str();
  train->add_option("--freeze-after", t.freeze_after, "Freeze the projection after N epochs (joint)");

  PredictFlags p;
  CLI::App *predict = app.add_subcommand("predict", "Predict labels for corpus records");
  predict->add_option("--model", p.model)->required();
  predict->add_option("--corpus", p.corpora)->required();
  predict->add_option("--split", p.split, "train, test, dev or all")->capture_default_str();

  EvalFlags e;
  CLI::App *evalc = app.add_subcommand("eval", "Score predictions or validate a report");
  evalc->add_option("--gold", e.gold, "Gold corpus JSONL");
  evalc->add_option("--pred", e.pred, "Predictions JSONL");
  evalc->add_option("--split", e.split, "Only score this split of the gold file");
  evalc->add_option("--report", e.report, "Validate an existing report instead");
  evalc->add_option("--setup", e.setup, "Report setup field");
  evalc->add_option("--model-id", e.model_id, "Report model_id field")->capture_default_str();

  SalientFlags sal;
  CLI::App *salient = app.add_subcommand("salient", "Most strongly weighted n-grams of a label");
  salient->add_option("--model", sal.model)->required();
  salient->add_option("--label", sal.label)->required();
  salient->add_option("--k", sal.k)->capture_default_str();

  LintFlags l;
  CLI::App *lint = app.add_subcommand("lint", "Report signature, timestamp and policy residues");
  lint->add_option("--corpus", l.corpora)->required();

  DiagnosticSink previous = set_diagnostic_sink([&err](const Json &record) {
    err << record.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
  });
  struct Restore {
    DiagnosticSink sink;
    ~Restore() { set_diagnostic_sink(std::move(sink)); }
  } restore{previous};

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp &) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError &ex) {
      if (ex.get_exit_code() == 0) {
        out << app.help();
        return 0;
      }
      throw_error(ErrorKind::kConfig, "UsageError", ex.what());
    }
    if (g.from_year > g.to_year) {
      throw_error(ErrorKind::kConfig, "InvalidRange", "--from is after --to");
    }
    parse_languages(g.langs);

    if (*ingest) run_ingest(g, b, out);
    else if (*build) run_build(g, b, out);
    else if (*stats) run_stats(g, s, out);
    else if (*alignc) run_align(g, a, out);
    else if (*train) run_train(g, t, out);
    else if (*predict) run_predict(g, p, out);
    else if (*evalc) run_eval(g, e, out);
    else if (*salient) run_salient(g, sal, out);
    else if (*lint) run_lint(g, l, out);
    return 0;
  } catch (const Error &ex) {
    err << ex.to_json().dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
    return exit_code(ex.kind());
  } catch (const fs::filesystem_error &ex) {
    err << Error(ErrorKind::kConfig, "IoError", ex.what()).to_json().dump() << '\n';
    return 2;
  } catch (const std::exception &ex) {
    err << Error(ErrorKind::kData, "InternalError", ex.what()).to_json().dump() << '\n';
    return 3;
  }
}

}  // namespace wikistance
