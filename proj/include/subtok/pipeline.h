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

#ifndef SUBTOK_PIPELINE_H_
#define SUBTOK_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "subtok/corpus.h"
#include "subtok/encoder.h"
#include "subtok/eval.h"
#include "subtok/features.h"
#include "subtok/model.h"

namespace subtok {

// Everything a run needs. Paths left empty are unused.
struct RunConfig {
  std::string data;
  Strategy strategy = Strategy::kWord;
  std::string merges;  // BPE merges file.
  std::string vocab;   // Wordpiece vocabulary file.
  int num_merges = 30000;
  FeatureConfig features;
  TrainConfig train;
  int k = 5;
  std::string pretrained;
  bool tweet_mode = false;
  bool has_header = false;
  std::string model;
  std::string out;
  std::string report_json;
  std::string splits_out;
  std::string vocab_out;

  // Applies keys present in a JSON config object. Unknown keys throw.
  void ApplyJson(const nlohmann::json& config);
  // The settings that affect results, for reports.
  nlohmann::json ToJson() const;
};

// An error tagged with the pipeline stage that raised it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Runs fn, rethrowing any std::exception as a StageError for `stage`.
template <typename Fn>
auto RunStage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

// Word-type frequencies for BPE training. Sentinels are not counted.
WordCounts CountWords(const std::vector<std::string>& normalized_texts);

// A trained classifier with the tokenization it was trained with.
class TextClassifier {
 public:
  TextClassifier(DocumentEncoder encoder, ClassifierModel model, bool tweet_mode);

  const DocumentEncoder& encoder() const { return encoder_; }
  const ClassifierModel& model() const { return model_; }
  bool tweet_mode() const { return tweet_mode_; }

  // Raw text in; normalized, encoded and featurized here.
  FeatureVector Featurize(std::string_view raw_text) const;
  // Already-normalized text.
  FeatureVector FeaturizeNormalized(std::string_view text) const;
  Prediction Predict(std::string_view raw_text) const;

  // The tokenizer travels inside the model file's metadata.
  void Save(const std::filesystem::path& path) const;
  static TextClassifier Load(const std::filesystem::path& path);

 private:
  DocumentEncoder encoder_;
  ClassifierModel model_;
  bool tweet_mode_;
};

// What a fold was built from, reported before training starts.
struct FoldArtifacts {
  int fold = -1;
  std::span<const int64_t> train_ids;
  std::span<const int64_t> test_ids;
  const BpeModel* bpe = nullptr;  // Set when BPE was trained for the fold.
  const FeatureSpace* space = nullptr;
};
using FoldObserver = std::function<void(const FoldArtifacts&)>;

struct FitResult {
  std::unique_ptr<TextClassifier> classifier;
  TrainStats stats;
};

// Builds the tokenizer (training BPE on the given documents when the
// strategy asks for it and no merges file is configured), the feature space
// and the model, all from train_ids only.
FitResult FitClassifier(const LabeledDataset& dataset,
                        std::span<const int64_t> train_ids, const RunConfig& config,
                        const FoldObserver& observer = {},
                        std::span<const int64_t> test_ids = {}, int fold = -1);

struct CvResult {
  SplitSpec splits;
  std::vector<EvalReport> reports;
  std::vector<TrainStats> stats;
  CvSummary summary;

  nlohmann::json ToJson(const LabeledDataset& dataset, const RunConfig& config) const;
};

// Stratified k-fold. BPE models and feature spaces are rebuilt from each
// fold's training portion.
CvResult RunCrossValidation(const LabeledDataset& dataset, const RunConfig& config,
                            const FoldObserver& observer = {});

// Subcommand bodies. Human-readable output goes to `log`.
void CmdTrainBpe(const RunConfig& config, std::ostream& log);
void CmdEncode(const RunConfig& config, std::ostream& log);
void CmdTrain(const RunConfig& config, std::ostream& log);
void CmdPredict(const RunConfig& config, std::ostream& out, std::ostream& log);
void CmdEvaluate(const RunConfig& config, std::ostream& out, std::ostream& log);
void CmdCv(const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace subtok

#endif  // SUBTOK_PIPELINE_H_
