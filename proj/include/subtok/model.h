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

#ifndef SUBTOK_MODEL_H_
#define SUBTOK_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "subtok/features.h"

namespace subtok {

struct TrainConfig {
  double lr = 0.5;
  int epochs = 5;
  int dim = 100;
  uint64_t seed = 0;

  void Validate() const;
};

struct Prediction {
  int label = 0;
  double probability = 0.0;
};

// fastText-style linear classifier: the document vector is the mean of the
// input embedding rows of its features, scored by a softmax output layer
// with no bias. Parameters are stored as float; dot products accumulate in
// double.
class ClassifierModel {
 public:
  ClassifierModel() = default;

  // Input rows ~ U(-1/dim, 1/dim) from the seeded generator; output = 0.
  static ClassifierModel Init(FeatureSpace space, int dim,
                              std::vector<std::string> labels, uint64_t seed);

  int dim() const { return dim_; }
  int num_classes() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const FeatureSpace& space() const { return space_; }
  uint64_t seed() const { return seed_; }

  std::span<float> input_row(int64_t id) {
    return {input_.data() + id * dim_, static_cast<size_t>(dim_)};
  }
  std::span<const float> input_row(int64_t id) const {
    return {input_.data() + id * dim_, static_cast<size_t>(dim_)};
  }
  std::span<float> output_row(int c) {
    return {output_.data() + static_cast<int64_t>(c) * dim_, static_cast<size_t>(dim_)};
  }
  std::span<const float> output_row(int c) const {
    return {output_.data() + static_cast<int64_t>(c) * dim_, static_cast<size_t>(dim_)};
  }
  int64_t input_rows() const { return dim_ == 0 ? 0 : static_cast<int64_t>(input_.size()) / dim_; }

  // Mean of the feature rows; zero vector for an empty feature list.
  std::vector<double> Hidden(std::span<const int32_t> features) const;
  std::vector<double> Logits(std::span<const int32_t> features) const;
  std::vector<double> Forward(std::span<const int32_t> features) const;
  // Argmax of Forward, lowest class id on ties.
  Prediction Predict(std::span<const int32_t> features) const;

  // word2vec text format: header `count dim`, then `word v1 ... v_dim`.
  // Overwrites the rows of in-vocabulary words and returns how many rows
  // were written. Hash bucket rows are never touched.
  int64_t LoadPretrainedEmbeddings(const std::filesystem::path& path);
  int64_t LoadPretrainedEmbeddings(std::istream& in);

  // Free-form metadata persisted alongside the parameters.
  const nlohmann::json& annotations() const { return annotations_; }
  void set_annotations(nlohmann::json annotations) { annotations_ = std::move(annotations); }

  // `STXT`, version byte 1, uint32 LE metadata length, JSON metadata, then
  // input and output matrices row-major as little-endian float32.
  void Save(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  static ClassifierModel Load(std::istream& in);
  static ClassifierModel Load(const std::filesystem::path& path);

 private:
  int dim_ = 0;
  std::vector<std::string> labels_;
  FeatureSpace space_;
  uint64_t seed_ = 0;
  std::vector<float> input_;
  std::vector<float> output_;
  nlohmann::json annotations_ = nlohmann::json::object();
};

// Numerically stable softmax.
std::vector<double> Softmax(std::span<const double> logits);

// Forward pass and cross-entropy gradients for a single example.
struct ExampleGradient {
  std::vector<double> hidden;       // h
  std::vector<double> probs;        // softmax(W h)
  std::vector<double> output_grad;  // dL/dz = p - onehot(label)
  std::vector<double> hidden_grad;  // dL/dh = W^T (p - onehot(label))
  double loss = 0.0;                // -log p[label]
};

ExampleGradient ComputeExampleGradient(const ClassifierModel& model,
                                       std::span<const int32_t> features,
                                       int label);

// One SGD update. Output rows move by -lr * dL/dz * h; every feature
// occurrence moves its input row by -lr * dL/dh / |features|. Returns the
// pre-update loss. Empty feature lists are a no-op returning NaN.
double SgdStep(ClassifierModel& model, std::span<const int32_t> features,
               int label, double lr);

struct TrainStats {
  std::vector<double> epoch_loss;  // Mean loss over updated examples.
  int64_t skipped = 0;             // Empty documents, summed over epochs.
};

// Per-example SGD with lr decaying linearly to 0 over epochs * N examples;
// example order is reshuffled every epoch from config.seed. doc_ids, when
// given, name documents in diagnostics. Throws std::runtime_error on a
// non-finite loss.
TrainStats Train(ClassifierModel& model,
                 const std::vector<FeatureVector>& features,
                 const std::vector<int>& labels, const TrainConfig& config,
                 std::span<const int64_t> doc_ids = {});

}  // namespace subtok

#endif  // SUBTOK_MODEL_H_
