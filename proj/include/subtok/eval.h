// Copyright 2026 The subtok Authors
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

#ifndef SUBTOK_EVAL_H_
#define SUBTOK_EVAL_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace subtok {

// Rows are gold classes, columns predicted classes.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes = 0)
      : num_classes_(num_classes),
        counts_(static_cast<size_t>(num_classes) * num_classes, 0) {}

  int num_classes() const { return num_classes_; }
  int64_t& at(int gold, int pred) { return counts_[Index(gold, pred)]; }
  int64_t at(int gold, int pred) const { return counts_[Index(gold, pred)]; }
  int64_t total() const;

  std::vector<std::vector<int64_t>> ToRows() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  size_t Index(int gold, int pred) const {
    return static_cast<size_t>(gold) * num_classes_ + pred;
  }

  int num_classes_;
  std::vector<int64_t> counts_;
};

// Throws std::invalid_argument on length mismatch, empty input or an id
// outside [0, num_classes).
ConfusionMatrix ComputeConfusion(std::span<const int> gold,
                                 std::span<const int> pred, int num_classes);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int64_t support = 0;
};

// 0/0 evaluates to 0 for precision, recall and F1 alike.
std::vector<ClassMetrics> PerClassF1(const ConfusionMatrix& confusion);

// (1/N) sum_i n_i F_i, with N the sum of supports.
double WeightedF1(std::span<const ClassMetrics> per_class);
// (1/C) sum_i F_i over every class, zero-support ones included.
double MacroF1(std::span<const ClassMetrics> per_class);

struct EvalReport {
  ConfusionMatrix confusion;
  std::vector<ClassMetrics> per_class;
  double weighted_f1 = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;

  static EvalReport FromPredictions(std::span<const int> gold,
                                    std::span<const int> pred, int num_classes);
  static EvalReport FromConfusion(ConfusionMatrix confusion);

  nlohmann::json ToJson(const std::vector<std::string>& labels) const;
  void Print(std::ostream& out, const std::vector<std::string>& labels) const;
};

// Cross-validation aggregate. Standard deviations are population (divide by
// the number of splits).
struct CvSummary {
  std::vector<double> split_weighted_f1;
  std::vector<double> split_macro_f1;
  double mean_weighted_f1 = 0.0;
  double std_weighted_f1 = 0.0;
  double mean_macro_f1 = 0.0;
  double std_macro_f1 = 0.0;

  nlohmann::json ToJson() const;
  // One column per split; the best split is starred.
  void Print(std::ostream& out) const;
};

// Throws std::invalid_argument when reports is empty.
CvSummary SummarizeCv(std::span<const EvalReport> reports);

}  // namespace subtok

#endif  // SUBTOK_EVAL_H_
