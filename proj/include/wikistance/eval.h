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

#ifndef WIKISTANCE_EVAL_H_
#define WIKISTANCE_EVAL_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wikistance/common.h"

namespace wikistance {

// Rows are gold labels, columns predictions.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<uint64_t>> counts;

  explicit ConfusionMatrix(std::vector<std::string> label_order = {});

  uint64_t total() const;
  uint64_t row_sum(size_t gold) const;
  uint64_t column_sum(size_t predicted) const;

  Json to_json() const;
  static ConfusionMatrix from_json(const Json &j);
};

// Throws LengthMismatch or UnknownLabel.
ConfusionMatrix confusion(const std::vector<std::string> &gold,
                          const std::vector<std::string> &predicted,
                          const std::vector<std::string> &labels);
ConfusionMatrix confusion(const std::vector<size_t> &gold,
                          const std::vector<size_t> &predicted,
                          const std::vector<std::string> &labels);

// F1 per label in label order; 0 whenever precision or recall is undefined.
std::vector<double> per_label_f1(const ConfusionMatrix &cm);
std::map<std::string, double> per_label_f1_map(const ConfusionMatrix &cm);

// Both throw EmptyMatrix when the matrix holds no instances.
double macro_f1(const ConfusionMatrix &cm);
double accuracy(const ConfusionMatrix &cm);

struct EvalReport {
  static constexpr int kSchemaVersion = 1;

  std::string task;      // stance | policy
  std::string language;  // en | de | tr | multi
  std::string setup;     // single | multitask | multilingual-single |
                         // multilingual-multitask
  std::string model_id;
  int64_t seed = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::map<std::string, double> per_label_f1;
  ConfusionMatrix confusion;

  Json to_json() const;
  static EvalReport from_json(const Json &j);  // validates first
};

// Fills every metric from the matrix.
EvalReport make_report(std::string task, std::string language,
                       std::string setup, std::string model_id, int64_t seed,
                       ConfusionMatrix cm);

// Schema problems, each a human-readable sentence; empty when valid. The
// metrics are recomputed from the embedded matrix and must agree to 1e-9.
std::vector<std::string> validate_report(const Json &report);

// Throws SchemaViolation listing every problem.
void check_report(const Json &report);

}  // namespace wikistance

#endif  // WIKISTANCE_EVAL_H_
