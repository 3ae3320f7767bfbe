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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "wikistance/text.h"

namespace wikistance {

namespace {

// Portable uniform integer in [0, n): std::uniform_int_distribution is
// implementation-defined, this is not.
uint64_t uniform_below(std::mt19937_64 &rng, uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

double uniform_unit(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<size_t> permutation(std::mt19937_64 &rng, size_t n) {
  std::vector<size_t> p(n);
  for (size_t i = 0; i < n; ++i) p[i] = i;
  for (size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform_below(rng, i)]);
  return p;
}

void softmax_inplace(std::vector<double> &v) {
  double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double &x : v) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (double &x : v) x /= sum;
}

// -log softmax(v)[y], computed stably.
double cross_entropy(const std::vector<double> &logits, size_t y) {
  double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - mx);
  return std::log(sum) + mx - logits[y];
}

size_t argmax(const std::vector<double> &v) {
  size_t best = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double squared_norm(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

void check_labels(const std::vector<size_t> &y, size_t num_labels) {
  std::set<size_t> distinct(y.begin(), y.end());
  if (!distinct.empty() && *distinct.rbegin() >= num_labels) {
    throw_error(ErrorKind::kData, "UnknownLabel", "label index out of range");
  }
  if (distinct.size() < 2) {
    throw_error(ErrorKind::kData, "DegenerateLabels",
                "training needs at least two distinct labels");
  }
}

void check_dim(const FeatureVector &x, size_t dim) {
  if (x.dim != dim) {
    throw_error(ErrorKind::kData, "DimensionMismatch",
                "feature dimension " + std::to_string(x.dim) +
                    " does not match model dimension " + std::to_string(dim));
  }
}

// Logits of a head applied to a dense input.
std::vector<double> dense_logits(const SoftmaxHead &head,
                                 const std::vector<double> &z) {
  std::vector<double> out(head.bias);
  for (size_t c = 0; c < out.size(); ++c) {
    const double *row = &head.weights.data[c * head.weights.cols];
    double s = 0.0;
    for (size_t k = 0; k < z.size(); ++k) s += row[k] * z[k];
    out[c] += s;
  }
  return out;
}

Json matrix_to_json(const Matrix &m) {
  return Json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const Json &j) {
  Matrix m;
  m.rows = j.at("rows").get<size_t>();
  m.cols = j.at("cols").get<size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) {
    throw std::invalid_argument("matrix size mismatch");
  }
  return m;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, Language lang) {
  std::vector<std::string> out;
  for (const std::string &w : split_words(text)) out.push_back(to_lower(w, lang));
  return out;
}

std::vector<std::string> pair_tokens(std::string_view topic,
                                     std::string_view comment, Language lang) {
  std::vector<std::string> out = tokenize(topic, lang);
  out.emplace_back(kSeparatorToken);
  for (std::string &t : tokenize(comment, lang)) out.push_back(std::move(t));
  return out;
}

std::vector<std::string> ngrams(const std::vector<std::string> &tokens) {
  std::vector<std::string> out(tokens);
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i] == kSeparatorToken || tokens[i + 1] == kSeparatorToken) continue;
    out.push_back(tokens[i] + " " + tokens[i + 1]);
  }
  return out;
}

double FeatureVector::norm() const {
  double s = 0.0;
  for (const auto &[i, v] : entries) s += v * v;
  return std::sqrt(s);
}

// --- Vocabulary -------------------------------------------------------------

Vocabulary Vocabulary::fit(const std::vector<std::vector<std::string>> &docs,
                           size_t min_df, size_t max_features) {
  std::map<std::string, size_t> df;
  for (const auto &doc : docs) {
    std::set<std::string> seen;
    for (std::string &g : ngrams(doc)) seen.insert(std::move(g));
    for (const std::string &g : seen) ++df[g];
  }
  std::vector<std::pair<std::string, size_t>> kept;
  for (auto &[term, n] : df) {
    if (n >= min_df) kept.emplace_back(term, n);
  }
  if (max_features > 0 && kept.size() > max_features) {
    std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    kept.resize(max_features);
    std::sort(kept.begin(), kept.end());
  }
  if (kept.empty()) {
    throw_error(ErrorKind::kData, "EmptyVocabulary",
                "no n-gram reaches document frequency " + std::to_string(min_df));
  }
  Vocabulary v;
  v.num_docs_ = docs.size();
  v.min_df_ = min_df;
  for (auto &[term, n] : kept) {
    v.terms_.push_back(term);
    v.df_.push_back(n);
  }
  v.finish();
  return v;
}

void Vocabulary::finish() {
  idf_.resize(terms_.size());
  index_.clear();
  for (size_t i = 0; i < terms_.size(); ++i) {
    idf_[i] = std::log((1.0 + num_docs_) / (1.0 + df_[i])) + 1.0;
    index_[terms_[i]] = static_cast<uint32_t>(i);
  }
}

std::optional<uint32_t> Vocabulary::index(const std::string &term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FeatureVector Vocabulary::featurize(const std::vector<std::string> &tokens) const {
  std::map<uint32_t, double> tf;
  for (const std::string &g : ngrams(tokens)) {
    if (auto i = index(g)) tf[*i] += 1.0;
  }
  FeatureVector v;
  v.dim = size();
  double norm = 0.0;
  for (const auto &[i, n] : tf) {
    double w = n * idf_[i];
    v.entries.emplace_back(i, w);
    norm += w * w;
  }
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (auto &e : v.entries) e.second /= norm;
  }
  return v;
}

Json Vocabulary::to_json() const {
  return Json{{"num_docs", num_docs_},
              {"min_df", min_df_},
              {"terms", terms_},
              {"df", df_}};
}

Vocabulary Vocabulary::from_json(const Json &j) {
  Vocabulary v;
  v.num_docs_ = j.at("num_docs").get<size_t>();
  v.min_df_ = j.at("min_df").get<size_t>();
  v.terms_ = j.at("terms").get<std::vector<std::string>>();
  v.df_ = j.at("df").get<std::vector<size_t>>();
  if (v.terms_.size() != v.df_.size()) {
    throw std::invalid_argument("vocabulary terms/df length mismatch");
  }
  v.finish();
  return v;
}

// --- Softmax head -----------------------------------------------------------

SoftmaxHead::SoftmaxHead(std::vector<std::string> label_order, size_t dim)
    : labels(std::move(label_order)),
      weights(labels.size(), dim),
      bias(labels.size(), 0.0) {}

std::vector<double> SoftmaxHead::logits(const FeatureVector &x) const {
  check_dim(x, dim());
  std::vector<double> out(bias);
  for (size_t c = 0; c < out.size(); ++c) {
    const double *row = &weights.data[c * weights.cols];
    for (const auto &[j, v] : x.entries) out[c] += row[j] * v;
  }
  return out;
}

std::vector<double> SoftmaxHead::probabilities(const FeatureVector &x) const {
  std::vector<double> p = logits(x);
  softmax_inplace(p);
  return p;
}

size_t SoftmaxHead::predict(const FeatureVector &x) const {
  return argmax(logits(x));
}

Json SoftmaxHead::to_json() const {
  return Json{{"labels", labels},
              {"weights", matrix_to_json(weights)},
              {"bias", bias}};
}

SoftmaxHead SoftmaxHead::from_json(const Json &j) {
  SoftmaxHead h;
  h.labels = j.at("labels").get<std::vector<std::string>>();
  h.weights = matrix_from_json(j.at("weights"));
  h.bias = j.at("bias").get<std::vector<double>>();
  if (h.weights.rows != h.labels.size() || h.bias.size() != h.labels.size()) {
    throw std::invalid_argument("head shape does not match its labels");
  }
  return h;
}

double softmax_objective(const SoftmaxHead &head,
                         const std::vector<FeatureVector> &x,
                         const std::vector<size_t> &y, double l2) {
  double loss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) loss += cross_entropy(head.logits(x[i]), y[i]);
  if (!x.empty()) loss /= static_cast<double>(x.size());
  return loss + 0.5 * l2 * squared_norm(head.weights.data);
}

SoftmaxGradient softmax_gradient(const SoftmaxHead &head,
                                 const std::vector<FeatureVector> &x,
                                 const std::vector<size_t> &y, double l2) {
  const size_t classes = head.labels.size();
  SoftmaxGradient g{Matrix(classes, head.dim()), std::vector<double>(classes, 0.0)};
  const double inv_n = x.empty() ? 0.0 : 1.0 / static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    std::vector<double> p = head.probabilities(x[i]);
    p[y[i]] -= 1.0;
    for (size_t c = 0; c < classes; ++c) {
      g.bias[c] += p[c] * inv_n;
      for (const auto &[j, v] : x[i].entries) g.weights.at(c, j) += p[c] * v * inv_n;
    }
  }
  for (size_t k = 0; k < g.weights.data.size(); ++k) {
    g.weights.data[k] += l2 * head.weights.data[k];
  }
  return g;
}

SoftmaxHead train_softmax(const std::vector<FeatureVector> &x,
                          const std::vector<size_t> &y,
                          std::vector<std::string> labels,
                          const SoftmaxConfig &config, TrainHistory *history) {
  if (x.size() != y.size()) {
    throw_error(ErrorKind::kData, "LengthMismatch",
                "features and labels differ in length");
  }
  check_labels(y, labels.size());
  const size_t dim = x.front().dim;
  for (const FeatureVector &v : x) check_dim(v, dim);
  const size_t classes = labels.size();
  SoftmaxHead head(std::move(labels), dim);
  std::mt19937_64 rng(config.seed);
  const size_t batch = std::max<size_t>(config.batch, 1);

  double lr = config.lr;
  double prev = softmax_objective(head, x, y, config.l2);
  if (history) {
    history->objective = {prev};
    history->learning_rate = {lr};
  }

  // Weights are kept as scale · stored so the per-step L2 decay is O(1).
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const std::vector<size_t> order = permutation(rng, x.size());
    const SoftmaxHead start = head;
    for (int attempt = 0;; ++attempt) {
      double scale = 1.0;
      std::vector<double> p(classes);
      for (size_t b = 0; b < order.size(); b += batch) {
        const size_t e = std::min(order.size(), b + batch);
        const double inv = 1.0 / static_cast<double>(e - b);
        Matrix residual(e - b, classes);
        for (size_t i = b; i < e; ++i) {
          const FeatureVector &xi = x[order[i]];
          for (size_t c = 0; c < classes; ++c) {
            const double *row = &head.weights.data[c * dim];
            double s = 0.0;
            for (const auto &[j, v] : xi.entries) s += row[j] * v;
            p[c] = scale * s + head.bias[c];
          }
          softmax_inplace(p);
          p[y[order[i]]] -= 1.0;
          for (size_t c = 0; c < classes; ++c) residual.at(i - b, c) = p[c];
        }
        const double new_scale = scale * (1.0 - lr * config.l2);
        for (size_t i = b; i < e; ++i) {
          const FeatureVector &xi = x[order[i]];
          for (size_t c = 0; c < classes; ++c) {
            const double r = residual.at(i - b, c) * inv;
            if (r == 0.0) continue;
            double *row = &head.weights.data[c * dim];
            for (const auto &[j, v] : xi.entries) row[j] -= lr * r * v / new_scale;
            head.bias[c] -= lr * r;
          }
        }
        scale = new_scale;
        if (scale < 1e-6) {
          for (double &w : head.weights.data) w *= scale;
          scale = 1.0;
        }
      }
      for (double &w : head.weights.data) w *= scale;

      const double now = softmax_objective(head, x, y, config.l2);
      if (now <= prev || attempt >= 30) {
        if (now > prev) {
          head = start;  // no step size helps; keep the previous weights
        } else {
          prev = now;
        }
        break;
      }
      head = start;
      lr *= 0.5;
    }
    if (history) {
      history->objective.push_back(prev);
      history->learning_rate.push_back(lr);
    }
  }
  return head;
}

// --- Multi-task model -------------------------------------------------------

bool is_stance_step(size_t step, std::pair<size_t, size_t> ratio) {
  if (step == 0 || ratio.first + ratio.second == 0) {
    throw_error(ErrorKind::kConfig, "InvalidArgument",
                "steps are 1-based and the ratio must be positive");
  }
  return (step - 1) % (ratio.first + ratio.second) < ratio.first;
}

std::vector<double> MultiTaskLinearModel::hidden(const FeatureVector &x) const {
  check_dim(x, dim());
  const size_t h = projection.cols;
  std::vector<double> z(h, 0.0);
  for (const auto &[j, v] : x.entries) {
    const double *row = &projection.data[j * h];
    for (size_t k = 0; k < h; ++k) z[k] += v * row[k];
  }
  return z;
}

size_t MultiTaskLinearModel::predict(Task task, const FeatureVector &x) const {
  const SoftmaxHead &head = task == Task::kStance ? stance : policy;
  return argmax(dense_logits(head, hidden(x)));
}

Json MultiTaskLinearModel::to_json() const {
  return Json{{"projection", matrix_to_json(projection)},
              {"stance", stance.to_json()},
              {"policy", policy.to_json()},
              {"ratio", {ratio.first, ratio.second}},
              {"stance_updates", stance_updates},
              {"policy_updates", policy_updates}};
}

MultiTaskLinearModel MultiTaskLinearModel::from_json(const Json &j) {
  MultiTaskLinearModel m;
  m.projection = matrix_from_json(j.at("projection"));
  m.stance = SoftmaxHead::from_json(j.at("stance"));
  m.policy = SoftmaxHead::from_json(j.at("policy"));
  m.ratio = {j.at("ratio").at(0).get<size_t>(), j.at("ratio").at(1).get<size_t>()};
  m.stance_updates = j.at("stance_updates").get<size_t>();
  m.policy_updates = j.at("policy_updates").get<size_t>();
  if (m.stance.dim() != m.projection.cols || m.policy.dim() != m.projection.cols) {
    throw std::invalid_argument("head width does not match projection");
  }
  return m;
}

double multitask_objective(const MultiTaskLinearModel &model, Task task,
                           const std::vector<FeatureVector> &x,
                           const std::vector<size_t> &y, double l2) {
  const SoftmaxHead &head = task == Task::kStance ? model.stance : model.policy;
  double loss = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    loss += cross_entropy(dense_logits(head, model.hidden(x[i])), y[i]);
  }
  if (!x.empty()) loss /= static_cast<double>(x.size());
  return loss + 0.5 * l2 *
                    (squared_norm(model.projection.data) +
                     squared_norm(head.weights.data));
}

MultiTaskGradient multitask_gradient(const MultiTaskLinearModel &model,
                                     Task task,
                                     const std::vector<FeatureVector> &x,
                                     const std::vector<size_t> &y, double l2) {
  const SoftmaxHead &head = task == Task::kStance ? model.stance : model.policy;
  const size_t classes = head.labels.size();
  const size_t h = model.projection.cols;
  MultiTaskGradient g{Matrix(model.projection.rows, h), Matrix(classes, h),
                      std::vector<double>(classes, 0.0)};
  const double inv_n = x.empty() ? 0.0 : 1.0 / static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    std::vector<double> z = model.hidden(x[i]);
    std::vector<double> p = dense_logits(head, z);
    softmax_inplace(p);
    p[y[i]] -= 1.0;
    std::vector<double> dz(h, 0.0);
    for (size_t c = 0; c < classes; ++c) {
      g.head_bias[c] += p[c] * inv_n;
      for (size_t k = 0; k < h; ++k) {
        g.head_weights.at(c, k) += p[c] * z[k] * inv_n;
        dz[k] += head.weights.at(c, k) * p[c];
      }
    }
    for (const auto &[j, v] : x[i].entries) {
      for (size_t k = 0; k < h; ++k) g.projection.at(j, k) += v * dz[k] * inv_n;
    }
  }
  for (size_t k = 0; k < g.projection.data.size(); ++k) {
    g.projection.data[k] += l2 * model.projection.data[k];
  }
  for (size_t k = 0; k < g.head_weights.data.size(); ++k) {
    g.head_weights.data[k] += l2 * head.weights.data[k];
  }
  return g;
}

MultiTaskLinearModel init_multitask(size_t dim,
                                    std::vector<std::string> stance_labels,
                                    std::vector<std::string> policy_labels,
                                    const MultiTaskConfig &config) {
  MultiTaskLinearModel m;
  m.ratio = config.ratio;
  m.projection = Matrix(dim, config.hidden);
  std::mt19937_64 rng(config.seed);
  for (double &w : m.projection.data) w = (uniform_unit(rng) * 2.0 - 1.0) * 0.05;
  m.stance = SoftmaxHead(std::move(stance_labels), config.hidden);
  m.policy = SoftmaxHead(std::move(policy_labels), config.hidden);
  return m;
}

MultiTaskLinearModel train_multitask(const std::vector<FeatureVector> &x,
                                     const std::vector<size_t> &stance_y,
                                     const std::vector<size_t> &policy_y,
                                     std::vector<std::string> stance_labels,
                                     std::vector<std::string> policy_labels,
                                     const MultiTaskConfig &config) {
  if (x.size() != stance_y.size() || x.size() != policy_y.size()) {
    throw_error(ErrorKind::kData, "LengthMismatch",
                "features and labels differ in length");
  }
  if (config.ratio.first == 0 && config.ratio.second == 0) {
    throw_error(ErrorKind::kConfig, "InvalidArgument", "loss ratio must be positive");
  }
  check_labels(stance_y, stance_labels.size());
  check_labels(policy_y, policy_labels.size());
  const size_t dim = x.front().dim;
  for (const FeatureVector &v : x) check_dim(v, dim);

  MultiTaskLinearModel m = init_multitask(dim, std::move(stance_labels),
                                          std::move(policy_labels), config);
  const size_t h = config.hidden;
  const size_t batch = std::max<size_t>(config.batch, 1);
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  const double lr = config.lr;
  size_t step = 0;
  double scale = 1.0;  // projection = scale · stored

  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const bool frozen =
        config.freeze_projection_after && epoch > *config.freeze_projection_after;
    const std::vector<size_t> order = permutation(rng, x.size());
    for (size_t b = 0; b < order.size(); b += batch) {
      const size_t e = std::min(order.size(), b + batch);
      const double inv = 1.0 / static_cast<double>(e - b);
      ++step;
      const bool stance_step = is_stance_step(step, config.ratio);
      SoftmaxHead &head = stance_step ? m.stance : m.policy;
      const std::vector<size_t> &y = stance_step ? stance_y : policy_y;
      (stance_step ? m.stance_updates : m.policy_updates)++;
      const size_t classes = head.labels.size();

      Matrix grad_w(classes, h);
      std::vector<double> grad_b(classes, 0.0);
      std::vector<std::vector<double>> dz(e - b, std::vector<double>(h, 0.0));
      for (size_t i = b; i < e; ++i) {
        const FeatureVector &xi = x[order[i]];
        std::vector<double> z(h, 0.0);
        for (const auto &[j, v] : xi.entries) {
          const double *row = &m.projection.data[j * h];
          for (size_t k = 0; k < h; ++k) z[k] += v * row[k];
        }
        for (double &zk : z) zk *= scale;
        std::vector<double> p = dense_logits(head, z);
        softmax_inplace(p);
        p[y[order[i]]] -= 1.0;
        for (size_t c = 0; c < classes; ++c) {
          const double r = p[c] * inv;
          grad_b[c] += r;
          for (size_t k = 0; k < h; ++k) {
            grad_w.at(c, k) += r * z[k];
            dz[i - b][k] += head.weights.at(c, k) * r;
          }
        }
      }
      if (!frozen) {
        const double new_scale = scale * (1.0 - lr * config.l2);
        for (size_t i = b; i < e; ++i) {
          for (const auto &[j, v] : x[order[i]].entries) {
            double *row = &m.projection.data[j * h];
            for (size_t k = 0; k < h; ++k) row[k] -= lr * v * dz[i - b][k] / new_scale;
          }
        }
        scale = new_scale;
        if (scale < 1e-6) {
          for (double &w : m.projection.data) w *= scale;
          scale = 1.0;
        }
      }
      for (size_t k = 0; k < head.weights.data.size(); ++k) {
        head.weights.data[k] -= lr * (grad_w.data[k] + config.l2 * head.weights.data[k]);
      }
      for (size_t c = 0; c < classes; ++c) head.bias[c] -= lr * grad_b[c];
    }
  }
  for (double &w : m.projection.data) w *= scale;
  return m;
}

// --- Baselines --------------------------------------------------------------

std::vector<size_t> baseline_random(size_t num_labels, size_t n, uint64_t seed) {
  if (num_labels == 0) {
    throw_error(ErrorKind::kConfig, "InvalidArgument", "empty label set");
  }
  std::mt19937_64 rng(seed);
  std::vector<size_t> out(n);
  for (size_t &v : out) v = static_cast<size_t>(uniform_below(rng, num_labels));
  return out;
}

size_t majority_label(const std::vector<size_t> &labels, size_t num_labels) {
  if (labels.empty()) {
    throw_error(ErrorKind::kData, "EmptyInput", "majority of an empty label list");
  }
  std::vector<size_t> counts(num_labels, 0);
  for (size_t l : labels) {
    if (l >= num_labels) {
      throw_error(ErrorKind::kData, "UnknownLabel", "label index out of range");
    }
    ++counts[l];
  }
  return static_cast<size_t>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
}

SalientTerms salient_features(const SoftmaxHead &head, const Vocabulary &vocab,
                              const std::string &label, size_t k) {
  auto it = std::find(head.labels.begin(), head.labels.end(), label);
  if (it == head.labels.end()) {
    throw_error(ErrorKind::kData, "UnknownLabel", "no label '" + label + "'");
  }
  if (vocab.size() != head.dim()) {
    throw_error(ErrorKind::kData, "DimensionMismatch",
                "vocabulary does not match the model");
  }
  const size_t c = static_cast<size_t>(it - head.labels.begin());
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(vocab.size());
  for (size_t j = 0; j < vocab.size(); ++j) {
    scored.emplace_back(vocab.terms()[j], head.weights.at(c, j));
  }
  SalientTerms out;
  auto desc = [](const auto &a, const auto &b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  auto asc = [](const auto &a, const auto &b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  };
  const size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + n, scored.end(), desc);
  out.positive.assign(scored.begin(), scored.begin() + n);
  std::partial_sort(scored.begin(), scored.begin() + n, scored.end(), asc);
  out.negative.assign(scored.begin(), scored.begin() + n);
  return out;
}

// --- Container --------------------------------------------------------------

Json TextModel::to_json() const {
  Json langs = Json::array();
  for (Language l : languages) langs.push_back(language_code(l));
  Json j = {{"format", "wikistance-model"},
            {"version", kVersion},
            {"kind", kind},
            {"task", task},
            {"languages", langs},
            {"multilingual", multilingual},
            {"vocabulary", vocabulary.to_json()}};
  if (head) j["head"] = head->to_json();
  if (multitask) j["multitask"] = multitask->to_json();
  return j;
}

TextModel TextModel::from_json(const Json &j) {
  TextModel m;
  try {
    if (j.at("format") != "wikistance-model") {
      throw std::invalid_argument("not a model file");
    }
    if (j.at("version").get<int>() != kVersion) {
      throw std::invalid_argument("unsupported model version " +
                                  j.at("version").dump());
    }
    m.kind = j.at("kind").get<std::string>();
    m.task = j.at("task").get<std::string>();
    for (const Json &code : j.at("languages")) {
      auto lang = parse_language(code.get<std::string>());
      if (!lang) throw std::invalid_argument("bad language");
      m.languages.push_back(*lang);
    }
    m.multilingual = j.at("multilingual").get<bool>();
    m.vocabulary = Vocabulary::from_json(j.at("vocabulary"));
    if (j.contains("head")) m.head = SoftmaxHead::from_json(j.at("head"));
    if (j.contains("multitask")) {
      m.multitask = MultiTaskLinearModel::from_json(j.at("multitask"));
    }
    if (m.kind == "softmax" ? !m.head : !m.multitask) {
      throw std::invalid_argument("model parameters missing for kind " + m.kind);
    }
  } catch (const Error &) {
    throw;
  } catch (const std::exception &e) {
    throw_error(ErrorKind::kData, "SchemaViolation",
                std::string("bad model file: ") + e.what());
  }
  return m;
}

void TextModel::save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_error(ErrorKind::kConfig, "IoError", "cannot write " + path);
  out << to_json().dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
  if (!out) throw_error(ErrorKind::kConfig, "IoError", "write failed: " + path);
}

TextModel TextModel::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_error(ErrorKind::kConfig, "IoError", "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception &e) {
    throw_error(ErrorKind::kData, "SchemaViolation",
                path + ": " + std::string(e.what()));
  }
  return from_json(j);
}

}  // namespace wikistance
