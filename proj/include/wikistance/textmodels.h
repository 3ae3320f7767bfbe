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

// Linear text classifiers over TF-IDF n-gram features: a softmax head, a
// multi-task model with a shared linear projection, and the random and
// majority baselines.

#ifndef WIKISTANCE_TEXTMODELS_H_
#define WIKISTANCE_TEXTMODELS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wikistance/common.h"

namespace wikistance {

inline constexpr std::string_view kSeparatorToken = "<sep>";

// Word segmentation plus language-aware lowercasing; punctuation dropped.
std::vector<std::string> tokenize(std::string_view text, Language lang);

// tokens(topic) + <sep> + tokens(comment).
std::vector<std::string> pair_tokens(std::string_view topic,
                                     std::string_view comment, Language lang);

// Unigrams then bigrams ("a b"). Bigrams never cross the separator.
std::vector<std::string> ngrams(const std::vector<std::string> &tokens);

// Sparse vector with strictly increasing indices.
struct FeatureVector {
  size_t dim = 0;
  std::vector<std::pair<uint32_t, double>> entries;

  double norm() const;
};

class Vocabulary {
 public:
  // Uni- and bigrams with document frequency >= min_df. With max_features
  // > 0, only the most frequent terms are kept (ties by term). Throws
  // EmptyVocabulary when nothing survives.
  static Vocabulary fit(const std::vector<std::vector<std::string>> &docs,
                        size_t min_df = 2, size_t max_features = 0);

  size_t size() const { return terms_.size(); }
  size_t num_docs() const { return num_docs_; }
  const std::vector<std::string> &terms() const { return terms_; }
  const std::vector<size_t> &document_frequency() const { return df_; }
  const std::vector<double> &idf() const { return idf_; }
  std::optional<uint32_t> index(const std::string &term) const;

  // tf·idf over the document's n-grams, L2-normalized. Unknown terms are
  // ignored.
  FeatureVector featurize(const std::vector<std::string> &tokens) const;

  Json to_json() const;
  static Vocabulary from_json(const Json &j);

 private:
  void finish();

  size_t num_docs_ = 0;
  size_t min_df_ = 2;
  std::vector<std::string> terms_;
  std::vector<size_t> df_;
  std::vector<double> idf_;
  std::map<std::string, uint32_t> index_;
};

// Row-major dense matrix.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double &at(size_t r, size_t c) { return data[r * cols + c]; }
  double at(size_t r, size_t c) const { return data[r * cols + c]; }
};

struct SoftmaxConfig {
  double l2 = 1e-4;
  double lr = 0.1;
  size_t epochs = 50;
  size_t batch = 64;
  uint64_t seed = 0;
};

struct SoftmaxHead {
  std::vector<std::string> labels;
  Matrix weights;  // labels × dim
  std::vector<double> bias;

  SoftmaxHead() = default;
  SoftmaxHead(std::vector<std::string> label_order, size_t dim);

  size_t dim() const { return weights.cols; }
  // Throws DimensionMismatch if x.dim differs from dim().
  std::vector<double> logits(const FeatureVector &x) const;
  std::vector<double> probabilities(const FeatureVector &x) const;
  // Argmax; ties go to the lowest label index.
  size_t predict(const FeatureVector &x) const;

  Json to_json() const;
  static SoftmaxHead from_json(const Json &j);
};

// Mean cross-entropy plus (l2/2)·‖W‖². The bias is not regularized.
double softmax_objective(const SoftmaxHead &head,
                         const std::vector<FeatureVector> &x,
                         const std::vector<size_t> &y, double l2);

struct SoftmaxGradient {
  Matrix weights;
  std::vector<double> bias;
};
SoftmaxGradient softmax_gradient(const SoftmaxHead &head,
                                 const std::vector<FeatureVector> &x,
                                 const std::vector<size_t> &y, double l2);

// Full-data objective before training and after each epoch. An epoch whose
// objective would rise is retried with half the step size, so the history
// is non-increasing.
struct TrainHistory {
  std::vector<double> objective;
  std::vector<double> learning_rate;
};

// Mini-batch SGD from zero weights. Deterministic for a given seed. Throws
// DegenerateLabels unless at least two labels occur in y.
SoftmaxHead train_softmax(const std::vector<FeatureVector> &x,
                          const std::vector<size_t> &y,
                          std::vector<std::string> labels,
                          const SoftmaxConfig &config = {},
                          TrainHistory *history = nullptr);

enum class Task { kStance, kPolicy };

// Step k (1-based) trains the stance head iff (k-1) mod (s+p) < s.
bool is_stance_step(size_t step, std::pair<size_t, size_t> ratio);

struct MultiTaskConfig {
  size_t hidden = 256;
  std::pair<size_t, size_t> ratio = {3, 1};
  double l2 = 1e-4;
  double lr = 0.1;
  size_t epochs = 50;
  size_t batch = 64;
  uint64_t seed = 0;
  // Projection is held fixed once this many epochs have run.
  std::optional<size_t> freeze_projection_after;
};

// Hard parameter sharing: both heads read the same hidden vector
// z_k = Σ_j x_j · projection(j, k).
struct MultiTaskLinearModel {
  Matrix projection;  // dim × hidden
  SoftmaxHead stance;  // over hidden units
  SoftmaxHead policy;
  std::pair<size_t, size_t> ratio = {3, 1};
  size_t stance_updates = 0;
  size_t policy_updates = 0;

  size_t dim() const { return projection.rows; }
  std::vector<double> hidden(const FeatureVector &x) const;
  size_t predict(Task task, const FeatureVector &x) const;

  Json to_json() const;
  static MultiTaskLinearModel from_json(const Json &j);
};

// Objective of one task: mean cross-entropy + (l2/2)(‖projection‖² +
// ‖head weights‖²).
double multitask_objective(const MultiTaskLinearModel &model, Task task,
                           const std::vector<FeatureVector> &x,
                           const std::vector<size_t> &y, double l2);

struct MultiTaskGradient {
  Matrix projection;
  Matrix head_weights;
  std::vector<double> head_bias;
};
MultiTaskGradient multitask_gradient(const MultiTaskLinearModel &model,
                                     Task task,
                                     const std::vector<FeatureVector> &x,
                                     const std::vector<size_t> &y, double l2);

// Randomly initialized projection (uniform ±0.05) and zero heads.
MultiTaskLinearModel init_multitask(size_t dim,
                                    std::vector<std::string> stance_labels,
                                    std::vector<std::string> policy_labels,
                                    const MultiTaskConfig &config);

MultiTaskLinearModel train_multitask(const std::vector<FeatureVector> &x,
                                     const std::vector<size_t> &stance_y,
                                     const std::vector<size_t> &policy_y,
                                     std::vector<std::string> stance_labels,
                                     std::vector<std::string> policy_labels,
                                     const MultiTaskConfig &config = {});

// Uniform over [0, num_labels) drawn with mt19937_64 and rejection sampling.
std::vector<size_t> baseline_random(size_t num_labels, size_t n, uint64_t seed);

// Most frequent label; ties go to the lowest index. Throws EmptyInput.
size_t majority_label(const std::vector<size_t> &labels, size_t num_labels);

struct SalientTerms {
  std::vector<std::pair<std::string, double>> positive;
  std::vector<std::pair<std::string, double>> negative;
};

// Terms ranked by the label's weight: top-k descending and bottom-k
// ascending, ties by term. Throws UnknownLabel.
SalientTerms salient_features(const SoftmaxHead &head, const Vocabulary &vocab,
                              const std::string &label, size_t k);

// Serialized model: vocabulary plus either a softmax head per task or a
// multi-task model.
struct TextModel {
  static constexpr int kVersion = 1;

  std::string kind;  // "softmax" or "multitask"
  std::string task;  // "stance", "policy" or "joint"
  std::vector<Language> languages;
  bool multilingual = false;
  Vocabulary vocabulary;
  std::optional<SoftmaxHead> head;
  std::optional<MultiTaskLinearModel> multitask;

  Json to_json() const;
  static TextModel from_json(const Json &j);
  void save(const std::string &path) const;
  static TextModel load(const std::string &path);
};

}  // namespace wikistance

#endif  // WIKISTANCE_TEXTMODELS_H_
