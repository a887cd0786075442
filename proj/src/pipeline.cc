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

#include "subtok/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "subtok/tokenize.h"

namespace subtok {

namespace {

std::string_view TextField(std::string_view line) {
  return line.substr(0, line.find('\t'));
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw std::runtime_error("read error on " + path);
  return lines;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void Require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

// Loads whatever fixed resource the strategy needs. A BPE strategy without a
// merges file yields nullptr: the caller trains one.
std::shared_ptr<const BpeModel> LoadMerges(const RunConfig& config) {
  if (config.merges.empty()) return nullptr;
  return std::make_shared<const BpeModel>(BpeModel::Load(config.merges));
}

std::shared_ptr<const WordpieceVocab> LoadWordpiece(const RunConfig& config) {
  Require(!config.vocab.empty(), "wordpiece strategy requires --vocab");
  return std::make_shared<const WordpieceVocab>(WordpieceVocab::Load(config.vocab));
}

DocumentEncoder FixedEncoder(const RunConfig& config) {
  switch (config.strategy) {
    case Strategy::kWord:
      return DocumentEncoder::Word();
    case Strategy::kBpe: {
      Require(!config.merges.empty(), "bpe strategy requires --merges");
      return DocumentEncoder::Bpe(LoadMerges(config));
    }
    case Strategy::kWordpiece:
      return DocumentEncoder::Wordpiece(LoadWordpiece(config));
  }
  return DocumentEncoder::Word();
}

nlohmann::json EncoderToJson(const DocumentEncoder& encoder) {
  nlohmann::json j = {{"strategy", StrategyName(encoder.strategy())}};
  if (const BpeModel* bpe = encoder.bpe()) {
    nlohmann::json merges = nlohmann::json::array();
    for (const MergePair& m : bpe->merges()) merges.push_back({m.left, m.right});
    j["merges"] = std::move(merges);
  }
  if (const WordpieceVocab* vocab = encoder.wordpiece()) {
    j["tokens"] = vocab->tokens();
    j["max_word_chars"] = vocab->max_word_chars();
  }
  return j;
}

DocumentEncoder EncoderFromJson(const nlohmann::json& j) {
  switch (ParseStrategy(j.at("strategy").get<std::string>())) {
    case Strategy::kWord:
      return DocumentEncoder::Word();
    case Strategy::kBpe: {
      std::vector<MergePair> merges;
      for (const auto& m : j.at("merges")) {
        merges.push_back({m.at(0).get<std::string>(), m.at(1).get<std::string>()});
      }
      return DocumentEncoder::Bpe(std::make_shared<const BpeModel>(std::move(merges)));
    }
    case Strategy::kWordpiece:
      return DocumentEncoder::Wordpiece(std::make_shared<const WordpieceVocab>(
          j.at("tokens").get<std::vector<std::string>>(),
          j.at("max_word_chars").get<size_t>()));
  }
  return DocumentEncoder::Word();
}

std::string FormatProbability(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", p);
  return buf;
}

std::vector<int64_t> Complement(size_t n, std::span<const int64_t> sorted_ids) {
  std::vector<int64_t> out;
  out.reserve(n - sorted_ids.size());
  size_t j = 0;
  for (int64_t id = 0; id < static_cast<int64_t>(n); ++id) {
    if (j < sorted_ids.size() && sorted_ids[j] == id) {
      ++j;
    } else {
      out.push_back(id);
    }
  }
  return out;
}

}  // namespace

void RunConfig::ApplyJson(const nlohmann::json& config) {
  Require(config.is_object(), "config file must hold a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (key == "data") data = value.get<std::string>();
    else if (key == "strategy") strategy = ParseStrategy(value.get<std::string>());
    else if (key == "merges") merges = value.get<std::string>();
    else if (key == "vocab") vocab = value.get<std::string>();
    else if (key == "num_merges") num_merges = value.get<int>();
    else if (key == "word_ngrams") features.word_ngrams = value.get<int>();
    else if (key == "minn") features.minn = value.get<int>();
    else if (key == "maxn") features.maxn = value.get<int>();
    else if (key == "buckets") features.buckets = value.get<int64_t>();
    else if (key == "min_count") features.min_count = value.get<int64_t>();
    else if (key == "lr") train.lr = value.get<double>();
    else if (key == "epochs") train.epochs = value.get<int>();
    else if (key == "dim") train.dim = value.get<int>();
    else if (key == "seed") train.seed = value.get<uint64_t>();
    else if (key == "k") k = value.get<int>();
    else if (key == "pretrained") pretrained = value.get<std::string>();
    else if (key == "tweet_mode") tweet_mode = value.get<bool>();
    else if (key == "has_header") has_header = value.get<bool>();
    else if (key == "model") model = value.get<std::string>();
    else if (key == "out") out = value.get<std::string>();
    else if (key == "report_json") report_json = value.get<std::string>();
    else if (key == "splits_out") splits_out = value.get<std::string>();
    else if (key == "vocab_out") vocab_out = value.get<std::string>();
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

nlohmann::json RunConfig::ToJson() const {
  return {{"data", data},
          {"strategy", StrategyName(strategy)},
          {"merges", merges},
          {"vocab", vocab},
          {"num_merges", num_merges},
          {"word_ngrams", features.word_ngrams},
          {"minn", features.minn},
          {"maxn", features.maxn},
          {"buckets", features.buckets},
          {"min_count", features.min_count},
          {"lr", train.lr},
          {"epochs", train.epochs},
          {"dim", train.dim},
          {"seed", train.seed},
          {"k", k},
          {"pretrained", pretrained},
          {"tweet_mode", tweet_mode},
          {"has_header", has_header}};
}

WordCounts CountWords(const std::vector<std::string>& normalized_texts) {
  WordCounts counts;
  for (const std::string& text : normalized_texts) {
    for (std::string& word : WordTokenize(text)) {
      if (!IsSentinel(word)) ++counts[std::move(word)];
    }
  }
  return counts;
}

TextClassifier::TextClassifier(DocumentEncoder encoder, ClassifierModel model,
                               bool tweet_mode)
    : encoder_(std::move(encoder)), model_(std::move(model)), tweet_mode_(tweet_mode) {}

FeatureVector TextClassifier::FeaturizeNormalized(std::string_view text) const {
  return model_.space().Featurize(encoder_.Encode(text));
}

FeatureVector TextClassifier::Featurize(std::string_view raw_text) const {
  return FeaturizeNormalized(NormalizeText(raw_text, tweet_mode_));
}

Prediction TextClassifier::Predict(std::string_view raw_text) const {
  return model_.Predict(Featurize(raw_text));
}

void TextClassifier::Save(const std::filesystem::path& path) const {
  ClassifierModel copy = model_;
  copy.set_annotations({{"tokenizer", EncoderToJson(encoder_)}, {"tweet_mode", tweet_mode_}});
  copy.Save(path);
}

TextClassifier TextClassifier::Load(const std::filesystem::path& path) {
  ClassifierModel model = ClassifierModel::Load(path);
  const nlohmann::json& ann = model.annotations();
  if (!ann.contains("tokenizer")) {
    throw std::runtime_error(path.string() + ": model carries no tokenizer metadata");
  }
  DocumentEncoder encoder = EncoderFromJson(ann.at("tokenizer"));
  const bool tweet_mode = ann.value("tweet_mode", false);
  return TextClassifier(std::move(encoder), std::move(model), tweet_mode);
}

FitResult FitClassifier(const LabeledDataset& dataset,
                        std::span<const int64_t> train_ids, const RunConfig& config,
                        const FoldObserver& observer, std::span<const int64_t> test_ids,
                        int fold) {
  Require(!train_ids.empty(), "no training documents");
  const std::string prefix = fold >= 0 ? "fold " + std::to_string(fold) + ": " : "";
  const auto& docs = dataset.documents();

  std::vector<std::string> texts;
  texts.reserve(train_ids.size());
  for (int64_t id : train_ids) texts.push_back(docs[id].text);

  std::shared_ptr<const BpeModel> trained_bpe;
  DocumentEncoder encoder = RunStage(prefix + "tokenizer", [&] {
    if (config.strategy == Strategy::kBpe && config.merges.empty()) {
      trained_bpe = std::make_shared<const BpeModel>(
          TrainBpe(CountWords(texts), config.num_merges));
      return DocumentEncoder::Bpe(trained_bpe);
    }
    return FixedEncoder(config);
  });

  std::vector<TokenStream> tokens;
  FeatureSpace space = RunStage(prefix + "features", [&] {
    tokens.reserve(texts.size());
    for (const std::string& text : texts) tokens.push_back(encoder.Encode(text));
    return FeatureSpace::Build(tokens, config.features);
  });

  if (observer) {
    FoldArtifacts artifacts;
    artifacts.fold = fold;
    artifacts.train_ids = train_ids;
    artifacts.test_ids = test_ids;
    artifacts.bpe = trained_bpe.get();
    artifacts.space = &space;
    observer(artifacts);
  }

  std::vector<FeatureVector> features;
  std::vector<int> labels;
  features.reserve(tokens.size());
  labels.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    features.push_back(space.Featurize(tokens[i]));
    labels.push_back(docs[train_ids[i]].label);
  }
  tokens.clear();

  FitResult result;
  ClassifierModel model = RunStage(prefix + "model init", [&] {
    ClassifierModel m =
        ClassifierModel::Init(std::move(space), config.train.dim, dataset.labels(), config.train.seed);
    if (!config.pretrained.empty()) m.LoadPretrainedEmbeddings(config.pretrained);
    return m;
  });
  result.stats = RunStage(prefix + "train", [&] {
    return Train(model, features, labels, config.train, train_ids);
  });
  result.classifier =
      std::make_unique<TextClassifier>(std::move(encoder), std::move(model), config.tweet_mode);
  return result;
}

CvResult RunCrossValidation(const LabeledDataset& dataset, const RunConfig& config,
                            const FoldObserver& observer) {
  RunStage("config", [&] {
    Require(dataset.num_classes() >= 2, "cross-validation needs at least 2 classes");
    Require(!(config.strategy == Strategy::kBpe && !config.merges.empty()),
            "cv retrains BPE on every training fold; do not pass --merges");
    config.train.Validate();
    config.features.Validate();
  });
  CvResult result;
  result.splits = RunStage("split", [&] {
    return StratifiedKFold(dataset, config.k, config.train.seed);
  });

  for (int fold = 0; fold < config.k; ++fold) {
    const std::vector<int64_t>& test_ids = result.splits.folds[fold];
    const std::vector<int64_t> train_ids = Complement(dataset.size(), test_ids);
    FitResult fit = FitClassifier(dataset, train_ids, config, observer, test_ids, fold);

    EvalReport report = RunStage("fold " + std::to_string(fold) + ": evaluate", [&] {
      std::vector<int> gold;
      std::vector<int> pred;
      for (int64_t id : test_ids) {
        const Document& doc = dataset.documents()[id];
        gold.push_back(doc.label);
        pred.push_back(fit.classifier->model().Predict(
                                         fit.classifier->FeaturizeNormalized(doc.text))
                           .label);
      }
      return EvalReport::FromPredictions(gold, pred, static_cast<int>(dataset.num_classes()));
    });
    result.reports.push_back(std::move(report));
    result.stats.push_back(std::move(fit.stats));
  }
  result.summary = SummarizeCv(result.reports);
  return result;
}

nlohmann::json CvResult::ToJson(const LabeledDataset& dataset, const RunConfig& config) const {
  nlohmann::json splits_json = nlohmann::json::array();
  for (size_t f = 0; f < reports.size(); ++f) {
    splits_json.push_back({{"fold", f},
                           {"train_size", dataset.size() - splits.folds[f].size()},
                           {"test_size", splits.folds[f].size()},
                           {"epoch_loss", stats[f].epoch_loss},
                           {"report", reports[f].ToJson(dataset.labels())}});
  }
  return {{"config", config.ToJson()},
          {"labels", dataset.labels()},
          {"num_documents", dataset.size()},
          {"splits", splits_json},
          {"summary", summary.ToJson()}};
}

void CmdTrainBpe(const RunConfig& config, std::ostream& log) {
  Require(!config.data.empty(), "train-bpe requires --data");
  Require(!config.out.empty(), "train-bpe requires --out");
  Require(config.num_merges >= 0, "--num-merges must be >= 0");
  std::vector<std::string> texts = RunStage("read corpus", [&] {
    std::vector<std::string> lines = ReadLines(config.data);
    std::vector<std::string> normalized;
    for (size_t i = 0; i < lines.size(); ++i) {
      if (i == 0 && config.has_header) continue;
      normalized.push_back(NormalizeText(TextField(lines[i]), config.tweet_mode));
    }
    return normalized;
  });
  BpeModel model = RunStage("train-bpe", [&] {
    return TrainBpe(CountWords(texts), config.num_merges);
  });
  RunStage("write merges", [&] { model.Save(config.out); });
  log << "learned " << model.num_merges() << " merges -> " << config.out << "\n";
}

void CmdEncode(const RunConfig& config, std::ostream& log) {
  Require(!config.data.empty(), "encode requires --data");
  Require(!config.out.empty(), "encode requires --out");
  const DocumentEncoder encoder = RunStage("load tokenizer", [&] { return FixedEncoder(config); });
  const std::vector<std::string> lines = RunStage("read input", [&] { return ReadLines(config.data); });
  RunStage("encode", [&] {
    std::ofstream out = OpenOutput(config.out);
    for (const std::string& line : lines) {
      const TokenStream tokens = encoder.Encode(NormalizeText(line, config.tweet_mode));
      for (size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out << ' ';
        out << tokens[i];
      }
      out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + config.out);
  });
  log << "encoded " << lines.size() << " lines -> " << config.out << "\n";
}

void CmdTrain(const RunConfig& config, std::ostream& log) {
  Require(!config.data.empty(), "train requires --data");
  Require(!config.out.empty(), "train requires --out (model path)");
  RunStage("config", [&] {
    config.train.Validate();
    config.features.Validate();
  });
  const LabeledDataset dataset = RunStage("load dataset", [&] {
    return LoadDataset(config.data, {config.has_header, config.tweet_mode});
  });
  std::vector<int64_t> ids(dataset.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int64_t>(i);
  FitResult fit = FitClassifier(dataset, ids, config);
  for (size_t e = 0; e < fit.stats.epoch_loss.size(); ++e) {
    log << "epoch " << e + 1 << " loss " << fit.stats.epoch_loss[e] << "\n";
  }
  RunStage("save model", [&] { fit.classifier->Save(config.out); });
  if (!config.vocab_out.empty()) {
    RunStage("export vocab", [&] {
      std::ofstream out = OpenOutput(config.vocab_out);
      fit.classifier->model().space().ExportVocab(out);
    });
  }
  log << "model -> " << config.out << "\n";
}

void CmdPredict(const RunConfig& config, std::ostream& out, std::ostream& log) {
  Require(!config.model.empty(), "predict requires --model");
  Require(!config.data.empty(), "predict requires --data");
  const TextClassifier classifier =
      RunStage("load model", [&] { return TextClassifier::Load(config.model); });
  const std::vector<std::string> lines = RunStage("read input", [&] { return ReadLines(config.data); });
  RunStage("predict", [&] {
    std::ofstream file;
    if (!config.out.empty()) file = OpenOutput(config.out);
    std::ostream& sink = config.out.empty() ? out : file;
    const auto& labels = classifier.model().labels();
    for (size_t i = 0; i < lines.size(); ++i) {
      if (i == 0 && config.has_header) continue;
      const Prediction p = classifier.Predict(TextField(lines[i]));
      sink << labels[p.label] << '\t' << FormatProbability(p.probability) << '\n';
    }
    if (!sink) throw std::runtime_error("write failed");
  });
  if (!config.out.empty()) log << "predictions -> " << config.out << "\n";
}

void CmdEvaluate(const RunConfig& config, std::ostream& out, std::ostream& log) {
  Require(!config.model.empty(), "evaluate requires --model");
  Require(!config.data.empty(), "evaluate requires --data");
  const TextClassifier classifier =
      RunStage("load model", [&] { return TextClassifier::Load(config.model); });
  const LabeledDataset dataset = RunStage("load dataset", [&] {
    return LoadDataset(config.data, {config.has_header, classifier.tweet_mode()});
  });
  const auto& labels = classifier.model().labels();
  EvalReport report = RunStage("evaluate", [&] {
    std::vector<int> gold;
    std::vector<int> pred;
    for (const Document& doc : dataset.documents()) {
      const std::string& name = dataset.labels()[doc.label];
      const auto it = std::find(labels.begin(), labels.end(), name);
      if (it == labels.end()) {
        throw std::runtime_error("document " + std::to_string(doc.id) + ": label '" + name +
                                 "' unknown to the model");
      }
      gold.push_back(static_cast<int>(it - labels.begin()));
      pred.push_back(classifier.model().Predict(classifier.FeaturizeNormalized(doc.text)).label);
    }
    return EvalReport::FromPredictions(gold, pred, static_cast<int>(labels.size()));
  });
  report.Print(out, labels);
  if (!config.report_json.empty()) {
    RunStage("write report", [&] {
      std::ofstream file = OpenOutput(config.report_json);
      file << report.ToJson(labels).dump(2) << '\n';
    });
    log << "report -> " << config.report_json << "\n";
  }
}

void CmdCv(const RunConfig& config, std::ostream& out, std::ostream& log) {
  Require(!config.data.empty(), "cv requires --data");
  const LabeledDataset dataset = RunStage("load dataset", [&] {
    return LoadDataset(config.data, {config.has_header, config.tweet_mode});
  });
  RunStage("config", [&] {
    Require(config.k >= 2, "--k must be >= 2");
    Require(static_cast<size_t>(config.k) <= dataset.size(),
            "--k=" + std::to_string(config.k) + " exceeds the " +
                std::to_string(dataset.size()) + " documents");
  });
  const CvResult result = RunCrossValidation(dataset, config, [&log](const FoldArtifacts& a) {
    log << "fold " << a.fold << ": train " << a.train_ids.size() << " test "
        << a.test_ids.size() << " vocab " << a.space->vocab_size() << "\n";
  });
  for (size_t f = 0; f < result.reports.size(); ++f) {
    out << "== split " << f << " ==\n";
    result.reports[f].Print(out, dataset.labels());
  }
  out << "== summary ==\n";
  result.summary.Print(out);
  if (!config.report_json.empty()) {
    RunStage("write report", [&] {
      std::ofstream file = OpenOutput(config.report_json);
      file << result.ToJson(dataset, config).dump(2) << '\n';
    });
  }
  if (!config.splits_out.empty()) {
    RunStage("write splits", [&] {
      std::ofstream file = OpenOutput(config.splits_out);
      WriteSplits(result.splits, file);
    });
  }
}

}  // namespace subtok
