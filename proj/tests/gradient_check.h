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

#ifndef SUBTOK_TESTS_GRADIENT_CHECK_H_
#define SUBTOK_TESTS_GRADIENT_CHECK_H_

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.h"
#include "subtok/model.h"

namespace subtok::testing {

// A random small model with non-trivial weights, one input and one label.
struct GradientCase {
  ClassifierModel model;
  FeatureVector features;
  int label = 0;
};

inline GradientCase RandomGradientCase(uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto between = [&gen](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen);
  };
  const int vocab = between(2, 8);
  const int dim = between(2, 8);
  const int classes = between(2, 5);
  std::vector<std::string> words;
  for (int i = 0; i < vocab; ++i) words.push_back("w" + std::to_string(i));
  std::vector<std::string> labels;
  for (int c = 0; c < classes; ++c) labels.push_back("c" + std::to_string(c));
  FeatureConfig config;
  config.buckets = 0;
  GradientCase out;
  out.model = ClassifierModel::Init(
      FeatureSpace(words, std::vector<int64_t>(vocab, 1), config), dim, labels, seed);
  std::uniform_real_distribution<float> weight(-1.0f, 1.0f);
  for (int64_t r = 0; r < out.model.input_rows(); ++r) {
    for (float& w : out.model.input_row(r)) w = weight(gen);
  }
  for (int c = 0; c < classes; ++c) {
    for (float& w : out.model.output_row(c)) w = weight(gen);
  }
  const int length = between(1, 6);
  for (int i = 0; i < length; ++i) out.features.push_back(between(0, vocab - 1));
  out.label = between(0, classes - 1);
  return out;
}

// |a - n| / max(|a| + |n|, floor): relative, with an absolute floor for
// parameters whose gradient is essentially zero.
inline double RelativeError(double analytic, double numeric, double floor = 1e-5) {
  return std::abs(analytic - numeric) /
         std::max(std::abs(analytic) + std::abs(numeric), floor);
}

// Largest relative error between the library's analytic gradient and
// central finite differences of the double-precision reference loss, over
// every output weight and every input weight touched by the example.
inline double MaxGradientError(const GradientCase& c, double eps = 1e-5) {
  const ClassifierModel& m = c.model;
  const int dim = m.dim();
  std::vector<std::vector<double>> output(m.num_classes());
  for (int k = 0; k < m.num_classes(); ++k) {
    output[k].assign(m.output_row(k).begin(), m.output_row(k).end());
  }
  std::map<int32_t, std::vector<double>> input;
  std::map<int32_t, int> multiplicity;
  for (int32_t id : c.features) {
    input[id].assign(m.input_row(id).begin(), m.input_row(id).end());
    ++multiplicity[id];
  }
  auto loss = [&] {
    std::vector<std::vector<double>> rows;
    for (int32_t id : c.features) rows.push_back(input[id]);
    return oracle::Loss(output, rows, c.label);
  };

  const ExampleGradient g = ComputeExampleGradient(m, c.features, c.label);
  double worst = 0.0;
  for (int k = 0; k < m.num_classes(); ++k) {
    for (int j = 0; j < dim; ++j) {
      const double saved = output[k][j];
      output[k][j] = saved + eps;
      const double up = loss();
      output[k][j] = saved - eps;
      const double down = loss();
      output[k][j] = saved;
      const double analytic = g.output_grad[k] * g.hidden[j];
      worst = std::max(worst, RelativeError(analytic, (up - down) / (2 * eps)));
    }
  }
  const double n = static_cast<double>(c.features.size());
  for (auto& [id, row] : input) {
    for (int j = 0; j < dim; ++j) {
      const double saved = row[j];
      row[j] = saved + eps;
      const double up = loss();
      row[j] = saved - eps;
      const double down = loss();
      row[j] = saved;
      const double analytic = g.hidden_grad[j] * multiplicity[id] / n;
      worst = std::max(worst, RelativeError(analytic, (up - down) / (2 * eps)));
    }
  }
  return worst;
}

}  // namespace subtok::testing

#endif  // SUBTOK_TESTS_GRADIENT_CHECK_H_
