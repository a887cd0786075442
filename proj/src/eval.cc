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

#include "subtok/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace subtok {

namespace {

double SafeRatio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

std::string Fixed(double v, int precision = 4) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

void MeanStd(const std::vector<double>& values, double* mean, double* stddev) {
  const double n = static_cast<double>(values.size());
  *mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - *mean) * (v - *mean);
  *stddev = std::sqrt(ss / n);
}

}  // namespace

int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), int64_t{0});
}

std::vector<std::vector<int64_t>> ConfusionMatrix::ToRows() const {
  std::vector<std::vector<int64_t>> rows(num_classes_);
  for (int g = 0; g < num_classes_; ++g) {
    rows[g].assign(counts_.begin() + static_cast<ptrdiff_t>(Index(g, 0)),
                   counts_.begin() + static_cast<ptrdiff_t>(Index(g, 0) + num_classes_));
  }
  return rows;
}

ConfusionMatrix ComputeConfusion(std::span<const int> gold,
                                 std::span<const int> pred, int num_classes) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("gold and predicted lengths differ");
  }
  if (gold.empty()) throw std::invalid_argument("no predictions to score");
  if (num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
  ConfusionMatrix confusion(num_classes);
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || gold[i] >= num_classes || pred[i] < 0 || pred[i] >= num_classes) {
      throw std::invalid_argument("class id out of range at position " + std::to_string(i));
    }
    ++confusion.at(gold[i], pred[i]);
  }
  return confusion;
}

std::vector<ClassMetrics> PerClassF1(const ConfusionMatrix& confusion) {
  const int c = confusion.num_classes();
  std::vector<ClassMetrics> metrics(c);
  for (int i = 0; i < c; ++i) {
    int64_t tp = confusion.at(i, i);
    int64_t predicted = 0;
    int64_t support = 0;
    for (int j = 0; j < c; ++j) {
      predicted += confusion.at(j, i);
      support += confusion.at(i, j);
    }
    ClassMetrics& m = metrics[i];
    m.support = support;
    m.precision = SafeRatio(static_cast<double>(tp), static_cast<double>(predicted));
    m.recall = SafeRatio(static_cast<double>(tp), static_cast<double>(support));
    m.f1 = SafeRatio(2.0 * m.precision * m.recall, m.precision + m.recall);
  }
  return metrics;
}

double WeightedF1(std::span<const ClassMetrics> per_class) {
  // Equal supports reduce to the plain mean; returning it keeps the two
  // aggregates bit-identical in that case.
  if (!per_class.empty() && per_class.front().support > 0 &&
      std::all_of(per_class.begin(), per_class.end(), [&](const ClassMetrics& m) {
        return m.support == per_class.front().support;
      })) {
    return MacroF1(per_class);
  }
  double total = 0.0;
  double weighted = 0.0;
  for (const ClassMetrics& m : per_class) {
    total += static_cast<double>(m.support);
    weighted += static_cast<double>(m.support) * m.f1;
  }
  return SafeRatio(weighted, total);
}

double MacroF1(std::span<const ClassMetrics> per_class) {
  if (per_class.empty()) return 0.0;
  double sum = 0.0;
  for (const ClassMetrics& m : per_class) sum += m.f1;
  return sum / static_cast<double>(per_class.size());
}

EvalReport EvalReport::FromConfusion(ConfusionMatrix confusion) {
  EvalReport report;
  report.per_class = PerClassF1(confusion);
  report.weighted_f1 = WeightedF1(report.per_class);
  report.macro_f1 = MacroF1(report.per_class);
  int64_t correct = 0;
  for (int i = 0; i < confusion.num_classes(); ++i) correct += confusion.at(i, i);
  report.accuracy = SafeRatio(static_cast<double>(correct),
                              static_cast<double>(confusion.total()));
  report.confusion = std::move(confusion);
  return report;
}

EvalReport EvalReport::FromPredictions(std::span<const int> gold,
                                       std::span<const int> pred, int num_classes) {
  return FromConfusion(ComputeConfusion(gold, pred, num_classes));
}

nlohmann::json EvalReport::ToJson(const std::vector<std::string>& labels) const {
  nlohmann::json classes = nlohmann::json::array();
  for (size_t i = 0; i < per_class.size(); ++i) {
    classes.push_back({{"label", i < labels.size() ? labels[i] : std::to_string(i)},
                       {"precision", per_class[i].precision},
                       {"recall", per_class[i].recall},
                       {"f1", per_class[i].f1},
                       {"support", per_class[i].support}});
  }
  return {{"per_class", classes},
          {"weighted_f1", weighted_f1},
          {"macro_f1", macro_f1},
          {"accuracy", accuracy},
          {"confusion", confusion.ToRows()}};
}

void EvalReport::Print(std::ostream& out, const std::vector<std::string>& labels) const {
  size_t width = 8;
  for (const auto& l : labels) width = std::max(width, l.size() + 2);
  auto pad = [&](const std::string& s) {
    return s + std::string(width > s.size() ? width - s.size() : 1, ' ');
  };
  out << pad("class") << "precision  recall     f1         support\n";
  for (size_t i = 0; i < per_class.size(); ++i) {
    const ClassMetrics& m = per_class[i];
    out << pad(i < labels.size() ? labels[i] : std::to_string(i)) << Fixed(m.precision)
        << "     " << Fixed(m.recall) << "     " << Fixed(m.f1) << "     " << m.support
        << "\n";
  }
  out << "accuracy     " << Fixed(accuracy) << "\n"
      << "weighted F1  " << Fixed(weighted_f1) << "\n"
      << "macro F1     " << Fixed(macro_f1) << "\n"
      << "confusion (rows gold, cols predicted):\n";
  for (const auto& row : confusion.ToRows()) {
    out << " ";
    for (int64_t v : row) out << " " << v;
    out << "\n";
  }
}

CvSummary SummarizeCv(std::span<const EvalReport> reports) {
  if (reports.empty()) throw std::invalid_argument("no split reports to aggregate");
  CvSummary summary;
  for (const EvalReport& r : reports) {
    summary.split_weighted_f1.push_back(r.weighted_f1);
    summary.split_macro_f1.push_back(r.macro_f1);
  }
  MeanStd(summary.split_weighted_f1, &summary.mean_weighted_f1, &summary.std_weighted_f1);
  MeanStd(summary.split_macro_f1, &summary.mean_macro_f1, &summary.std_macro_f1);
  return summary;
}

nlohmann::json CvSummary::ToJson() const {
  return {{"split_weighted_f1", split_weighted_f1},
          {"split_macro_f1", split_macro_f1},
          {"mean_weighted_f1", mean_weighted_f1},
          {"std_weighted_f1", std_weighted_f1},
          {"mean_macro_f1", mean_macro_f1},
          {"std_macro_f1", std_macro_f1}};
}

void CvSummary::Print(std::ostream& out) const {
  auto row = [&out](const char* name, const std::vector<double>& values, double mean,
                    double stddev) {
    const size_t best = static_cast<size_t>(
        std::max_element(values.begin(), values.end()) - values.begin());
    out << name;
    for (size_t i = 0; i < values.size(); ++i) {
      out << "  " << Fixed(100.0 * values[i], 1) << (i == best ? "*" : " ");
    }
    out << "  mean " << Fixed(100.0 * mean, 2) << "  std " << Fixed(100.0 * stddev, 2) << "\n";
  };
  out << "split       ";
  for (size_t i = 0; i < split_weighted_f1.size(); ++i) {
    out << "  " << i << std::string(5, ' ');
  }
  out << "\n";
  row("weighted F1", split_weighted_f1, mean_weighted_f1, std_weighted_f1);
  row("macro F1   ", split_macro_f1, mean_macro_f1, std_macro_f1);
}

}  // namespace subtok
