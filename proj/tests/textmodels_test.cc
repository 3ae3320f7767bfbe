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

#include "wikistance/textmodels.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.h"

namespace wikistance {
namespace {

using testing::TempDir;
using testing::throws_code;

using Tokens = std::vector<std::string>;

Tokens words(const std::string &text) { return tokenize(text, Language::kEn); }

FeatureVector dense(const std::vector<double> &values) {
  FeatureVector v;
  v.dim = values.size();
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) v.entries.emplace_back(static_cast<uint32_t>(i), values[i]);
  }
  return v;
}

FeatureVector random_features(std::mt19937_64 &rng, size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> values(dim);
  for (double &x : values) x = rng() % 4 ? u(rng) : 0.0;
  return dense(values);
}

double rel_error(double analytic, double numeric) {
  double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
  return std::fabs(analytic - numeric) / denom;
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Not enough sources!", Language::kEn),
            (Tokens{"not", "enough", "sources"}));
  EXPECT_TRUE(tokenize("", Language::kEn).empty());
  EXPECT_EQ(tokenize("İstanbul ile ilgili", Language::kTr).front(), "istanbul");
  EXPECT_EQ(tokenize("IRMAK", Language::kTr), (Tokens{"ırmak"}));
  EXPECT_EQ(tokenize("IRMAK", Language::kEn), (Tokens{"irmak"}));
}

TEST(Tokenize, PairsAndNgrams) {
  Tokens pair = pair_tokens("Deletion of X", "per nom", Language::kEn);
  EXPECT_EQ(pair, (Tokens{"deletion", "of", "x", "<sep>", "per", "nom"}));
  Tokens grams = ngrams(pair);
  EXPECT_NE(std::find(grams.begin(), grams.end(), "per nom"), grams.end());
  EXPECT_NE(std::find(grams.begin(), grams.end(), "of x"), grams.end());
  for (const std::string &g : grams) {
    EXPECT_EQ(g.find("<sep> "), std::string::npos);
    EXPECT_EQ(g.find(" <sep>"), std::string::npos);
  }
  EXPECT_EQ(ngrams({"a", "b", "c"}), (Tokens{"a", "b", "c", "a b", "b c"}));
}

TEST(Vocabulary, Examples) {
  Vocabulary v = Vocabulary::fit({words("delete per nom"), words("per nom keep")});
  EXPECT_TRUE(v.index("per nom").has_value());
  EXPECT_FALSE(v.index("delete").has_value());
  Vocabulary one = Vocabulary::fit({words("solo")}, 1);
  EXPECT_DOUBLE_EQ(one.idf()[*one.index("solo")], 1.0);
  EXPECT_TRUE(throws_code([] { Vocabulary::fit({words("a b"), words("c d")}); },
                          "EmptyVocabulary"));
}

TEST(Vocabulary, DenseIndicesAndMaxFeatures) {
  // df: a 3, then b and "a b" tie at 2 and "a b" sorts first.
  Vocabulary v = Vocabulary::fit({words("a b c"), words("a b"), words("a")}, 1, 2);
  EXPECT_EQ(v.terms(), (Tokens{"a", "a b"}));
  for (size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v.index(v.terms()[i]), i);
  for (double idf : v.idf()) EXPECT_GE(idf, 0.0);
}

TEST(Featurize, ZeroAndSingleTerm) {
  Vocabulary v = Vocabulary::fit({words("per nom"), words("per nom")});
  FeatureVector none = v.featurize(words("unrelated words"));
  EXPECT_TRUE(none.entries.empty());
  EXPECT_EQ(none.dim, v.size());
  FeatureVector single = v.featurize(words("per"));
  ASSERT_EQ(single.entries.size(), 1u);
  EXPECT_EQ(single.entries[0].second, 1.0);
}

// Reference weights from tests/oracle/tfidf_oracle.py.
TEST(Featurize, HandCorpusMatchesReference) {
  const std::vector<std::string> docs = {"per nom delete", "delete per nom per nom",
                                         "keep sources keep"};
  std::vector<Tokens> tokenized;
  for (const auto &d : docs) tokenized.push_back(words(d));
  Vocabulary v = Vocabulary::fit(tokenized, 1);
  struct Expected {
    size_t doc;
    const char *term;
    double weight;
  };
  const Expected expected[] = {
      {0, "delete", 0.41779577097245879},     {0, "nom", 0.41779577097245879},
      {0, "nom delete", 0.54935123102630334}, {0, "per", 0.41779577097245879},
      {0, "per nom", 0.41779577097245879},    {1, "delete", 0.24649826874780562},
      {1, "delete per", 0.32411560094845021}, {1, "nom", 0.49299653749561123},
      {1, "nom per", 0.32411560094845021},    {1, "per", 0.49299653749561123},
      {1, "per nom", 0.49299653749561123},    {2, "keep", 0.75592894601845451},
      {2, "keep sources", 0.37796447300922725}, {2, "sources", 0.37796447300922725},
      {2, "sources keep", 0.37796447300922725},
  };
  std::vector<std::map<std::string, double>> got(docs.size());
  for (size_t d = 0; d < docs.size(); ++d) {
    for (const auto &[i, w] : v.featurize(tokenized[d]).entries) got[d][v.terms()[i]] = w;
  }
  size_t count = 0;
  for (const Expected &e : expected) {
    ASSERT_TRUE(got[e.doc].count(e.term)) << e.term;
    EXPECT_NEAR(got[e.doc][e.term], e.weight, 1e-12) << e.doc << " " << e.term;
    ++count;
  }
  EXPECT_EQ(got[0].size() + got[1].size() + got[2].size(), count);
}

TEST(Properties, FeatureVectorsAreUnitOrZero) {
  std::mt19937_64 rng(5);
  const Tokens pool = {"per", "nom", "keep", "delete", "not", "enough", "sources"};
  std::vector<Tokens> docs;
  for (int i = 0; i < 50; ++i) {
    Tokens d;
    for (int j = rng() % 8; j > 0; --j) d.push_back(pool[rng() % pool.size()]);
    docs.push_back(d);
  }
  Vocabulary v = Vocabulary::fit(docs);
  for (const Tokens &d : docs) {
    FeatureVector f = v.featurize(d);
    double n = f.norm();
    EXPECT_TRUE(n == 0.0 || std::fabs(n - 1.0) < 1e-12);
    for (size_t i = 1; i < f.entries.size(); ++i) {
      EXPECT_LT(f.entries[i - 1].first, f.entries[i].first);
    }
  }
}

TEST(Softmax, FirstObjectiveIsLogClasses) {
  std::mt19937_64 rng(1);
  std::vector<FeatureVector> x;
  std::vector<size_t> y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(random_features(rng, 6));
    y.push_back(i % 5);
  }
  TrainHistory history;
  SoftmaxConfig config;
  config.epochs = 5;
  train_softmax(x, y, {"a", "b", "c", "d", "e"}, config, &history);
  ASSERT_EQ(history.objective.size(), 6u);
  EXPECT_NEAR(history.objective[0], std::log(5.0), 1e-12);
  for (size_t i = 1; i < history.objective.size(); ++i) {
    EXPECT_LE(history.objective[i], history.objective[i - 1] + 1e-6);
  }
}

TEST(Softmax, SeparableToy) {
  std::vector<FeatureVector> x;
  std::vector<size_t> y;
  for (int i = 0; i < 10; ++i) {
    const size_t label = i % 2;
    std::vector<double> f = {label == 0 ? 1.0 : 0.0, label == 1 ? 1.0 : 0.0,
                             0.1 * (i % 3)};
    x.push_back(dense(f));
    y.push_back(label);
  }
  SoftmaxHead head = train_softmax(x, y, {"neg", "pos"});
  for (size_t i = 0; i < x.size(); ++i) EXPECT_EQ(head.predict(x[i]), y[i]);
}

TEST(Softmax, DegenerateLabelsAndDeterminism) {
  std::mt19937_64 rng(2);
  std::vector<FeatureVector> x;
  for (int i = 0; i < 30; ++i) x.push_back(random_features(rng, 5));
  EXPECT_TRUE(throws_code([&] { train_softmax(x, std::vector<size_t>(30, 1), {"a", "b"}); },
                          "DegenerateLabels"));
  std::vector<size_t> y;
  for (int i = 0; i < 30; ++i) y.push_back(rng() % 3);
  SoftmaxConfig config;
  config.seed = 11;
  config.batch = 7;
  SoftmaxHead a = train_softmax(x, y, {"a", "b", "c"}, config);
  SoftmaxHead b = train_softmax(x, y, {"a", "b", "c"}, config);
  EXPECT_EQ(a.weights.data, b.weights.data);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(Softmax, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t classes = 5, dim = 8;
    SoftmaxHead head(std::vector<std::string>{"a", "b", "c", "d", "e"}, dim);
    for (double &w : head.weights.data) w = u(rng);
    for (double &b : head.bias) b = u(rng);
    std::vector<FeatureVector> x;
    std::vector<size_t> y;
    for (int i = 0; i < 12; ++i) {
      x.push_back(random_features(rng, dim));
      y.push_back(rng() % classes);
    }
    const double l2 = 0.01, eps = 1e-6;
    SoftmaxGradient g = softmax_gradient(head, x, y, l2);
    double worst = 0.0;
    for (size_t k = 0; k < head.weights.data.size(); ++k) {
      SoftmaxHead plus = head, minus = head;
      plus.weights.data[k] += eps;
      minus.weights.data[k] -= eps;
      double numeric = (softmax_objective(plus, x, y, l2) -
                        softmax_objective(minus, x, y, l2)) / (2 * eps);
      worst = std::max(worst, rel_error(g.weights.data[k], numeric));
    }
    for (size_t c = 0; c < classes; ++c) {
      SoftmaxHead plus = head, minus = head;
      plus.bias[c] += eps;
      minus.bias[c] -= eps;
      double numeric = (softmax_objective(plus, x, y, l2) -
                        softmax_objective(minus, x, y, l2)) / (2 * eps);
      worst = std::max(worst, rel_error(g.bias[c], numeric));
    }
    EXPECT_LT(worst, 1e-4) << "trial " << trial;
  }
}

TEST(MultiTask, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t dim = 7;
    MultiTaskConfig config;
    config.hidden = 4;
    config.seed = trial;
    MultiTaskLinearModel m =
        init_multitask(dim, {"comment", "delete", "keep", "merge"}, {"p0", "p1", "p2"}, config);
    for (double &w : m.projection.data) w = u(rng);
    for (SoftmaxHead *h : {&m.stance, &m.policy}) {
      for (double &w : h->weights.data) w = u(rng);
      for (double &b : h->bias) b = u(rng);
    }
    std::vector<FeatureVector> x;
    std::vector<size_t> ys, yp;
    for (int i = 0; i < 10; ++i) {
      x.push_back(random_features(rng, dim));
      ys.push_back(rng() % 4);
      yp.push_back(rng() % 3);
    }
    const double l2 = 0.01, eps = 1e-6;
    double worst = 0.0;
    for (Task task : {Task::kStance, Task::kPolicy}) {
      const std::vector<size_t> &y = task == Task::kStance ? ys : yp;
      MultiTaskGradient g = multitask_gradient(m, task, x, y, l2);
      auto numeric = [&](auto &&poke) {
        MultiTaskLinearModel plus = m, minus = m;
        poke(plus, eps);
        poke(minus, -eps);
        return (multitask_objective(plus, task, x, y, l2) -
                multitask_objective(minus, task, x, y, l2)) / (2 * eps);
      };
      for (size_t k = 0; k < m.projection.data.size(); ++k) {
        double n = numeric([&](MultiTaskLinearModel &mm, double d) { mm.projection.data[k] += d; });
        worst = std::max(worst, rel_error(g.projection.data[k], n));
      }
      auto head_of = [task](MultiTaskLinearModel &mm) -> SoftmaxHead & {
        return task == Task::kStance ? mm.stance : mm.policy;
      };
      for (size_t k = 0; k < head_of(m).weights.data.size(); ++k) {
        double n = numeric([&](MultiTaskLinearModel &mm, double d) {
          head_of(mm).weights.data[k] += d;
        });
        worst = std::max(worst, rel_error(g.head_weights.data[k], n));
      }
      for (size_t c = 0; c < head_of(m).bias.size(); ++c) {
        double n = numeric([&](MultiTaskLinearModel &mm, double d) { head_of(mm).bias[c] += d; });
        worst = std::max(worst, rel_error(g.head_bias[c], n));
      }
    }
    EXPECT_LT(worst, 1e-4) << "trial " << trial;
  }
}

TEST(MultiTask, Schedule) {
  std::string pattern;
  for (size_t k = 1; k <= 8; ++k) pattern += is_stance_step(k, {3, 1}) ? 'S' : 'P';
  EXPECT_EQ(pattern, "SSSPSSSP");
  pattern.clear();
  for (size_t k = 1; k <= 6; ++k) pattern += is_stance_step(k, {1, 1}) ? 'S' : 'P';
  EXPECT_EQ(pattern, "SPSPSP");
  size_t stance = 0;
  for (size_t k = 1; k <= 1000; ++k) stance += is_stance_step(k, {3, 1});
  EXPECT_EQ(stance, 750u);
}

TEST(Properties, ScheduleWindowsAreExactlyThreeToOne) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    size_t start = 1 + rng() % 1000, k = 1 + rng() % 50;
    size_t stance = 0;
    for (size_t s = start; s < start + 4 * k; ++s) stance += is_stance_step(s, {3, 1});
    EXPECT_EQ(stance, 3 * k);
  }
}

TEST(MultiTask, TrainingCountsAndSharing) {
  std::mt19937_64 rng(4);
  std::vector<FeatureVector> x;
  std::vector<size_t> ys, yp;
  for (int i = 0; i < 64; ++i) {
    x.push_back(random_features(rng, 10));
    ys.push_back(i % 4);
    yp.push_back(i % 2);
  }
  MultiTaskConfig config;
  config.hidden = 8;
  config.batch = 4;
  config.epochs = 250;  // 16 steps per epoch, 4000 steps in total
  MultiTaskLinearModel m = train_multitask(x, ys, yp, {"comment", "delete", "keep", "merge"},
                                           {"p0", "p1"}, config);
  EXPECT_EQ(m.stance_updates, 3000u);
  EXPECT_EQ(m.policy_updates, 1000u);
  EXPECT_EQ(m.projection.rows, 10u);
  EXPECT_EQ(m.projection.cols, 8u);
  EXPECT_EQ(m.stance.dim(), 8u);
  EXPECT_EQ(m.policy.dim(), 8u);
  MultiTaskLinearModel again = train_multitask(x, ys, yp, {"comment", "delete", "keep", "merge"},
                                               {"p0", "p1"}, config);
  EXPECT_EQ(m.projection.data, again.projection.data);
}

TEST(MultiTask, FrozenProjectionStaysFixed) {
  std::mt19937_64 rng(6);
  std::vector<FeatureVector> x;
  std::vector<size_t> ys, yp;
  for (int i = 0; i < 20; ++i) {
    x.push_back(random_features(rng, 5));
    ys.push_back(i % 4);
    yp.push_back(i % 3);
  }
  MultiTaskConfig config;
  config.hidden = 3;
  config.epochs = 4;
  config.freeze_projection_after = 0;
  MultiTaskLinearModel init = init_multitask(5, {"a", "b", "c", "d"}, {"x", "y", "z"}, config);
  MultiTaskLinearModel m =
      train_multitask(x, ys, yp, {"a", "b", "c", "d"}, {"x", "y", "z"}, config);
  EXPECT_EQ(m.projection.data, init.projection.data);
  for (double w : init.projection.data) EXPECT_LE(std::fabs(w), 0.05);
}

TEST(Predict, TieBreakAndDimension) {
  SoftmaxHead zero(std::vector<std::string>{"a", "b", "c"}, 4);
  EXPECT_EQ(zero.predict(dense({1, 0, 0, 0})), 0u);
  SoftmaxHead favour(std::vector<std::string>{"a", "b", "c"}, 4);
  favour.weights.at(2, 1) = 3.0;
  EXPECT_EQ(favour.predict(dense({0, 1, 0, 0})), 2u);
  EXPECT_TRUE(throws_code([&] { zero.predict(dense({1, 0})); }, "DimensionMismatch"));
}

TEST(Properties, ProbabilitiesAreDistributions) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 3.0);
  SoftmaxHead head(std::vector<std::string>{"a", "b", "c", "d"}, 9);
  for (double &w : head.weights.data) w = n(rng);
  for (double &b : head.bias) b = n(rng);
  for (int i = 0; i < 100; ++i) {
    auto p = head.probabilities(random_features(rng, 9));
    double sum = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Properties, ArgmaxIsScaleInvariant) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    SoftmaxHead head(std::vector<std::string>{"a", "b", "c"}, 6);
    for (double &w : head.weights.data) w = n(rng);
    for (double &b : head.bias) b = n(rng);
    FeatureVector x = random_features(rng, 6);
    const size_t base = head.predict(x);
    for (double c : {0.5, 2.0, 10.0}) {
      SoftmaxHead scaled = head;
      for (double &w : scaled.weights.data) w *= c;
      for (double &b : scaled.bias) b *= c;
      EXPECT_EQ(scaled.predict(x), base);
    }
  }
}

TEST(Baselines, RandomFrequencies) {
  auto draws = baseline_random(4, 4000, 99);
  std::vector<size_t> counts(4, 0);
  for (size_t d : draws) ++counts.at(d);
  for (size_t c : counts) EXPECT_NEAR(c / 4000.0, 0.25, 0.02);
  EXPECT_EQ(draws, baseline_random(4, 4000, 99));
  for (size_t d : baseline_random(1, 50, 3)) EXPECT_EQ(d, 0u);
}

TEST(Baselines, Majority) {
  std::vector<size_t> stance;
  stance.insert(stance.end(), 30974, 0);
  stance.insert(stance.end(), 279063, 1);
  stance.insert(stance.end(), 108273, 2);
  stance.insert(stance.end(), 19460, 3);
  EXPECT_EQ(majority_label(stance, 4), 1u);
  EXPECT_EQ(majority_label({0, 1, 1, 0}, 2), 0u);
  EXPECT_TRUE(throws_code([] { majority_label({}, 2); }, "EmptyInput"));
}

TEST(Salient, ZeroHeadOrdersByTerm) {
  Vocabulary v = Vocabulary::fit({words("b a c"), words("c b a")});
  SoftmaxHead head(std::vector<std::string>{"delete", "keep"}, v.size());
  SalientTerms s = salient_features(head, v, "keep", 3);
  ASSERT_EQ(s.positive.size(), 3u);
  EXPECT_EQ(s.positive[0].first, "a");
  EXPECT_EQ(s.positive[1].first, "b");
  EXPECT_EQ(s.positive[2].first, "b a");
  for (const auto &[term, w] : s.positive) EXPECT_EQ(w, 0.0);
  EXPECT_TRUE(throws_code([&] { salient_features(head, v, "merge", 3); }, "UnknownLabel"));
}

TEST(Salient, RanksByWeight) {
  Vocabulary v = Vocabulary::fit({words("x y z"), words("x y z")});
  SoftmaxHead head(std::vector<std::string>{"delete", "keep"}, v.size());
  head.weights.at(0, *v.index("y")) = 2.0;
  head.weights.at(0, *v.index("x y")) = -1.0;
  SalientTerms s = salient_features(head, v, "delete", 1);
  EXPECT_EQ(s.positive[0].first, "y");
  EXPECT_EQ(s.negative[0].first, "x y");
}

TEST(Salient, LearnsCueTerms) {
  std::vector<Tokens> docs;
  std::vector<size_t> y;
  const std::vector<std::string> del = {"not enough coverage", "fails the guideline",
                                        "not enough sources found"};
  const std::vector<std::string> keep = {"clearly passes the guideline",
                                         "easily passes with coverage", "clearly passes"};
  for (int i = 0; i < 60; ++i) {
    docs.push_back(words(del[i % 3]));
    y.push_back(0);
    docs.push_back(words(keep[i % 3]));
    y.push_back(1);
  }
  Vocabulary v = Vocabulary::fit(docs);
  std::vector<FeatureVector> x;
  for (const Tokens &d : docs) x.push_back(v.featurize(d));
  SoftmaxHead head = train_softmax(x, y, {"delete", "keep"});
  auto contains = [](const SalientTerms &s, const std::string &term) {
    for (const auto &[t, w] : s.positive) {
      if (t == term) return true;
    }
    return false;
  };
  EXPECT_TRUE(contains(salient_features(head, v, "delete", 5), "not enough"));
  EXPECT_TRUE(contains(salient_features(head, v, "keep", 5), "clearly passes"));
}

TEST(Model, JsonRoundTrip) {
  TempDir dir;
  std::vector<Tokens> docs = {words("a b c"), words("a b d"), words("c d")};
  TextModel model;
  model.kind = "softmax";
  model.task = "stance";
  model.languages = {Language::kEn, Language::kDe};
  model.vocabulary = Vocabulary::fit(docs, 1);
  SoftmaxHead head(std::vector<std::string>{"comment", "delete", "keep", "merge"},
                   model.vocabulary.size());
  head.weights.at(1, 2) = 0.125;
  head.bias[3] = -0.5;
  model.head = head;
  model.save(dir / "m.json");
  TextModel back = TextModel::load(dir / "m.json");
  EXPECT_EQ(back.to_json(), model.to_json());
  EXPECT_EQ(back.vocabulary.idf(), model.vocabulary.idf());

  MultiTaskConfig config;
  config.hidden = 2;
  TextModel mt = model;
  mt.kind = "multitask";
  mt.task = "joint";
  mt.head.reset();
  mt.multitask = init_multitask(model.vocabulary.size(), {"comment", "delete", "keep", "merge"},
                                {"p"}, config);
  EXPECT_EQ(TextModel::from_json(mt.to_json()).to_json(), mt.to_json());

  Json wrong = model.to_json();
  wrong["version"] = 99;
  EXPECT_ANY_THROW(TextModel::from_json(wrong));
}

}  // namespace
}  // namespace wikistance
