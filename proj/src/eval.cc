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

#include "wikistance/eval.h"

#include <cmath>
#include <set>

namespace wikistance {

namespace {

constexpr double kMetricTolerance = 1e-9;

const std::set<std::string> kTasks = {"stance", "policy"};
const std::set<std::string> kLanguages = {"en", "de", "tr", "multi"};
const std::set<std::string> kSetups = {"single", "multitask",
                                       "multilingual-single",
                                       "multilingual-multitask"};
const std::set<std::string> kStanceLabels = {"comment", "delete", "keep",
                                             "merge"};

void require_nonempty(const ConfusionMatrix &cm) {
  if (cm.labels.empty() || cm.total() == 0) {
    throw_error(ErrorKind::kData, "EmptyMatrix", "confusion matrix is empty");
  }
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> label_order)
    : labels(std::move(label_order)),
      counts(labels.size(), std::vector<uint64_t>(labels.size(), 0)) {}

uint64_t ConfusionMatrix::total() const {
  uint64_t n = 0;
  for (const auto &row : counts) {
    for (uint64_t c : row) n += c;
  }
  return n;
}

uint64_t ConfusionMatrix::row_sum(size_t gold) const {
  uint64_t n = 0;
  for (uint64_t c : counts[gold]) n += c;
  return n;
}

uint64_t ConfusionMatrix::column_sum(size_t predicted) const {
  uint64_t n = 0;
  for (const auto &row : counts) n += row[predicted];
  return n;
}

Json ConfusionMatrix::to_json() const {
  return Json{{"labels", labels}, {"counts", counts}};
}

ConfusionMatrix ConfusionMatrix::from_json(const Json &j) {
  ConfusionMatrix cm;
  try {
    cm.labels = j.at("labels").get<std::vector<std::string>>();
    cm.counts = j.at("counts").get<std::vector<std::vector<uint64_t>>>();
  } catch (const Json::exception &e) {
    throw_error(ErrorKind::kData, "SchemaViolation",
                std::string("bad confusion matrix: ") + e.what());
  }
  bool square = cm.counts.size() == cm.labels.size();
  for (const auto &row : cm.counts) square = square && row.size() == cm.labels.size();
  if (!square) {
    throw_error(ErrorKind::kData, "SchemaViolation",
                "confusion matrix must be square over its labels");
  }
  return cm;
}

ConfusionMatrix confusion(const std::vector<size_t> &gold,
                          const std::vector<size_t> &predicted,
                          const std::vector<std::string> &labels) {
  if (gold.size() != predicted.size()) {
    throw_error(ErrorKind::kData, "LengthMismatch",
                "gold has " + std::to_string(gold.size()) +
                    " items, predictions " + std::to_string(predicted.size()));
  }
  ConfusionMatrix cm(labels);
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= labels.size() || predicted[i] >= labels.size()) {
      throw_error(ErrorKind::kData, "UnknownLabel",
                  "label index out of range at item " + std::to_string(i));
    }
    ++cm.counts[gold[i]][predicted[i]];
  }
  return cm;
}

ConfusionMatrix confusion(const std::vector<std::string> &gold,
                          const std::vector<std::string> &predicted,
                          const std::vector<std::string> &labels) {
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;
  auto lookup = [&](const std::string &label) {
    auto it = index.find(label);
    if (it == index.end()) {
      throw_error(ErrorKind::kData, "UnknownLabel",
                  "label '" + label + "' is not in the registry");
    }
    return it->second;
  };
  if (gold.size() != predicted.size()) {
    throw_error(ErrorKind::kData, "LengthMismatch",
                "gold has " + std::to_string(gold.size()) +
                    " items, predictions " + std::to_string(predicted.size()));
  }
  std::vector<size_t> g, p;
  g.reserve(gold.size());
  p.reserve(gold.size());
  for (size_t i = 0; i < gold.size(); ++i) {
    g.push_back(lookup(gold[i]));
    p.push_back(lookup(predicted[i]));
  }
  return confusion(g, p, labels);
}

std::vector<double> per_label_f1(const ConfusionMatrix &cm) {
  std::vector<double> f1(cm.labels.size(), 0.0);
  for (size_t i = 0; i < cm.labels.size(); ++i) {
    const double tp = static_cast<double>(cm.counts[i][i]);
    const double gold = static_cast<double>(cm.row_sum(i));
    const double pred = static_cast<double>(cm.column_sum(i));
    if (gold == 0 || pred == 0) continue;
    const double precision = tp / pred;
    const double recall = tp / gold;
    if (precision + recall > 0) {
      f1[i] = 2 * precision * recall / (precision + recall);
    }
  }
  return f1;
}

std::map<std::string, double> per_label_f1_map(const ConfusionMatrix &cm) {
  std::map<std::string, double> out;
  std::vector<double> f1 = per_label_f1(cm);
  for (size_t i = 0; i < f1.size(); ++i) out[cm.labels[i]] = f1[i];
  return out;
}

double macro_f1(const ConfusionMatrix &cm) {
  require_nonempty(cm);
  double sum = 0.0;
  for (double f : per_label_f1(cm)) sum += f;
  return sum / static_cast<double>(cm.labels.size());
}

double accuracy(const ConfusionMatrix &cm) {
  require_nonempty(cm);
  uint64_t trace = 0;
  for (size_t i = 0; i < cm.labels.size(); ++i) trace += cm.counts[i][i];
  return static_cast<double>(trace) / static_cast<double>(cm.total());
}

Json EvalReport::to_json() const {
  return Json{{"schema_version", kSchemaVersion},
              {"task", task},
              {"language", language},
              {"setup", setup},
              {"model_id", model_id},
              {"seed", seed},
              {"accuracy", accuracy},
              {"macro_f1", macro_f1},
              {"per_label_f1", per_label_f1},
              {"confusion", confusion.to_json()}};
}

EvalReport EvalReport::from_json(const Json &j) {
  check_report(j);
  EvalReport r;
  r.task = j.at("task").get<std::string>();
  r.language = j.at("language").get<std::string>();
  r.setup = j.at("setup").get<std::string>();
  r.model_id = j.at("model_id").get<std::string>();
  r.seed = j.at("seed").get<int64_t>();
  r.accuracy = j.at("accuracy").get<double>();
  r.macro_f1 = j.at("macro_f1").get<double>();
  r.per_label_f1 = j.at("per_label_f1").get<std::map<std::string, double>>();
  r.confusion = ConfusionMatrix::from_json(j.at("confusion"));
  return r;
}

EvalReport make_report(std::string task, std::string language,
                       std::string setup, std::string model_id, int64_t seed,
                       ConfusionMatrix cm) {
  EvalReport r;
  r.task = std::move(task);
  r.language = std::move(language);
  r.setup = std::move(setup);
  r.model_id = std::move(model_id);
  r.seed = seed;
  r.accuracy = accuracy(cm);
  r.macro_f1 = macro_f1(cm);
  r.per_label_f1 = per_label_f1_map(cm);
  r.confusion = std::move(cm);
  return r;
}

std::vector<std::string> validate_report(const Json &j) {
  std::vector<std::string> errors;
  if (!j.is_object()) return {"report is not a JSON object"};

  static const std::set<std::string> kKeys = {
      "schema_version", "task",     "language",     "setup",    "model_id",
      "seed",           "accuracy", "macro_f1", "per_label_f1", "confusion"};
  for (const auto &[key, value] : j.items()) {
    if (!kKeys.count(key)) errors.push_back("unknown field '" + key + "'");
  }
  for (const std::string &key : kKeys) {
    if (!j.contains(key)) errors.push_back("missing field '" + key + "'");
  }
  if (!errors.empty()) return errors;

  if (!j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int64_t>() != EvalReport::kSchemaVersion) {
    errors.push_back("schema_version must be 1");
  }
  auto check_enum = [&](const char *key, const std::set<std::string> &allowed) {
    if (!j[key].is_string() || !allowed.count(j[key].get<std::string>())) {
      errors.push_back(std::string("field '") + key + "' has an invalid value");
    }
  };
  check_enum("task", kTasks);
  check_enum("language", kLanguages);
  check_enum("setup", kSetups);
  if (!j["model_id"].is_string()) errors.push_back("model_id must be a string");
  if (!j["seed"].is_number_integer()) errors.push_back("seed must be an integer");
  if (!j["accuracy"].is_number()) errors.push_back("accuracy must be a number");
  if (!j["macro_f1"].is_number()) errors.push_back("macro_f1 must be a number");
  if (!j["per_label_f1"].is_object()) {
    errors.push_back("per_label_f1 must be an object");
  } else {
    for (const auto &[label, v] : j["per_label_f1"].items()) {
      if (!v.is_number() || v.get<double>() < 0 || v.get<double>() > 1) {
        errors.push_back("per_label_f1['" + label + "'] must be in [0, 1]");
      }
    }
  }
  if (!errors.empty()) return errors;

  ConfusionMatrix cm;
  try {
    cm = ConfusionMatrix::from_json(j["confusion"]);
  } catch (const Error &e) {
    errors.push_back(e.what());
    return errors;
  }
  if (cm.total() == 0) {
    errors.push_back("confusion matrix is empty");
    return errors;
  }
  std::set<std::string> matrix_labels(cm.labels.begin(), cm.labels.end());
  if (matrix_labels.size() != cm.labels.size()) {
    errors.push_back("confusion labels are not unique");
  }
  std::set<std::string> f1_labels;
  for (const auto &[label, v] : j["per_label_f1"].items()) f1_labels.insert(label);
  if (f1_labels != matrix_labels) {
    errors.push_back("per_label_f1 labels differ from the confusion labels");
  }
  if (j["task"] == "stance" && matrix_labels != kStanceLabels) {
    errors.push_back("stance reports must cover exactly comment, delete, keep, merge");
  }
  if (!errors.empty()) return errors;

  const auto f1 = per_label_f1_map(cm);
  for (const auto &[label, value] : f1) {
    if (std::fabs(j["per_label_f1"][label].get<double>() - value) > kMetricTolerance) {
      errors.push_back("per_label_f1['" + label + "'] disagrees with the matrix");
    }
  }
  if (std::fabs(j["macro_f1"].get<double>() - macro_f1(cm)) > kMetricTolerance) {
    errors.push_back("macro_f1 is not the mean of the per-label F1 scores");
  }
  if (std::fabs(j["accuracy"].get<double>() - accuracy(cm)) > kMetricTolerance) {
    errors.push_back("accuracy disagrees with the matrix");
  }
  return errors;
}

void check_report(const Json &report) {
  std::vector<std::string> errors = validate_report(report);
  if (errors.empty()) return;
  std::string message = "invalid evaluation report:";
  for (const std::string &e : errors) message += " " + e + ";";
  message.pop_back();
  throw_error(ErrorKind::kData, "SchemaViolation", message);
}

}  // namespace wikistance
