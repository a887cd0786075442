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

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subtok/pipeline.h"

namespace {

// Flag values land here first; only flags actually given on the command
// line are copied over the config file's values.
struct FlagValues {
  std::string config_file;
  std::string data, strategy, merges, vocab, pretrained, model, out, report_json,
      splits_out, vocab_out;
  int num_merges = 0, word_ngrams = 0, minn = 0, maxn = 0, epochs = 0, dim = 0, k = 0;
  int64_t buckets = 0, min_count = 0;
  double lr = 0.0;
  uint64_t seed = 0;
  bool tweet_mode = false, has_header = false;
};

struct Binding {
  CLI::Option* option;
  std::function<void(subtok::RunConfig&)> apply;
};

class Subcommand {
 public:
  Subcommand(CLI::App& app, const std::string& name, const std::string& help)
      : app_(app.add_subcommand(name, help)) {}

  CLI::App* app() const { return app_; }

  template <typename T>
  Subcommand& Flag(const std::string& name, T* target, const std::string& help,
                   std::function<void(subtok::RunConfig&)> apply) {
    bindings_.push_back({app_->add_option(name, *target, help), std::move(apply)});
    return *this;
  }
  Subcommand& Switch(const std::string& name, bool* target, const std::string& help,
                     std::function<void(subtok::RunConfig&)> apply) {
    bindings_.push_back({app_->add_flag(name, *target, help), std::move(apply)});
    return *this;
  }

  void Apply(subtok::RunConfig& config) const {
    for (const Binding& b : bindings_) {
      if (b.option->count() > 0) b.apply(config);
    }
  }

 private:
  CLI::App* app_;
  std::vector<Binding> bindings_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subtok: subword tokenization and fastText-style text classification"};
  app.require_subcommand(1);
  FlagValues v;

  auto data = [&](Subcommand& s, const std::string& help) {
    s.Flag("--data", &v.data, help, [&](subtok::RunConfig& c) { c.data = v.data; });
  };
  auto common = [&](Subcommand& s) {
    s.app()->add_option("--config", v.config_file, "JSON config file; flags override it");
    s.Switch("--tweet-mode", &v.tweet_mode, "Replace URLs and @-mentions with <url>/<user>",
             [&](subtok::RunConfig& c) { c.tweet_mode = v.tweet_mode; });
    s.Switch("--has-header", &v.has_header, "Skip the first input line",
             [&](subtok::RunConfig& c) { c.has_header = v.has_header; });
  };
  auto strategy = [&](Subcommand& s) {
    s.Flag("--strategy", &v.strategy, "word | bpe | wordpiece",
           [&](subtok::RunConfig& c) { c.strategy = subtok::ParseStrategy(v.strategy); });
    s.Flag("--merges", &v.merges, "BPE merges file",
           [&](subtok::RunConfig& c) { c.merges = v.merges; });
    s.Flag("--vocab", &v.vocab, "Wordpiece vocabulary file",
           [&](subtok::RunConfig& c) { c.vocab = v.vocab; });
  };
  auto training = [&](Subcommand& s) {
    s.Flag("--num-merges", &v.num_merges, "Merges when BPE is trained on the fly (30000)",
           [&](subtok::RunConfig& c) { c.num_merges = v.num_merges; });
    s.Flag("--word-ngrams", &v.word_ngrams, "1 = unigrams, 2 = add hashed bigrams",
           [&](subtok::RunConfig& c) { c.features.word_ngrams = v.word_ngrams; });
    s.Flag("--minn", &v.minn, "Shortest subword n-gram (0 = off)",
           [&](subtok::RunConfig& c) { c.features.minn = v.minn; });
    s.Flag("--maxn", &v.maxn, "Longest subword n-gram (0 = off)",
           [&](subtok::RunConfig& c) { c.features.maxn = v.maxn; });
    s.Flag("--lr", &v.lr, "Initial learning rate (0.5)",
           [&](subtok::RunConfig& c) { c.train.lr = v.lr; });
    s.Flag("--epochs", &v.epochs, "Training epochs (5)",
           [&](subtok::RunConfig& c) { c.train.epochs = v.epochs; });
    s.Flag("--dim", &v.dim, "Embedding dimension (100)",
           [&](subtok::RunConfig& c) { c.train.dim = v.dim; });
    s.Flag("--buckets", &v.buckets, "Hash buckets for bigrams/subwords (2000000)",
           [&](subtok::RunConfig& c) { c.features.buckets = v.buckets; });
    s.Flag("--min-count", &v.min_count, "Minimum word count (1)",
           [&](subtok::RunConfig& c) { c.features.min_count = v.min_count; });
    s.Flag("--seed", &v.seed, "Seed for splits, initialization and shuffling (0)",
           [&](subtok::RunConfig& c) { c.train.seed = v.seed; });
    s.Flag("--pretrained", &v.pretrained, "word2vec text embeddings",
           [&](subtok::RunConfig& c) { c.pretrained = v.pretrained; });
  };
  auto out = [&](Subcommand& s, const std::string& help) {
    s.Flag("--out", &v.out, help, [&](subtok::RunConfig& c) { c.out = v.out; });
  };
  auto model = [&](Subcommand& s) {
    s.Flag("--model", &v.model, "Model file",
           [&](subtok::RunConfig& c) { c.model = v.model; });
  };
  auto report = [&](Subcommand& s) {
    s.Flag("--report-json", &v.report_json, "Write the report as JSON",
           [&](subtok::RunConfig& c) { c.report_json = v.report_json; });
  };

  Subcommand train_bpe(app, "train-bpe", "Learn BPE merges from a corpus");
  data(train_bpe, "Corpus: one document per line (text before a TAB is used)");
  common(train_bpe);
  train_bpe.Flag("--num-merges", &v.num_merges, "Merge operations (30000)",
                 [&](subtok::RunConfig& c) { c.num_merges = v.num_merges; });
  out(train_bpe, "Merges file to write");

  Subcommand encode(app, "encode", "Tokenize one document per line");
  data(encode, "Input text, one document per line");
  common(encode);
  strategy(encode);
  out(encode, "Tokenized output");

  Subcommand train(app, "train", "Train a classifier on a TSV dataset");
  data(train, "Training TSV (text<TAB>label)");
  common(train);
  strategy(train);
  training(train);
  out(train, "Model file to write");
  train.Flag("--vocab-out", &v.vocab_out, "Export the word vocabulary as TSV",
             [&](subtok::RunConfig& c) { c.vocab_out = v.vocab_out; });

  Subcommand predict(app, "predict", "Predict one label per input line");
  data(predict, "Input text, one document per line (text before a TAB is used)");
  common(predict);
  model(predict);
  out(predict, "Predictions file (default: stdout)");

  Subcommand evaluate(app, "evaluate", "Score a model on a gold TSV dataset");
  data(evaluate, "Gold TSV (text<TAB>label)");
  common(evaluate);
  model(evaluate);
  report(evaluate);

  Subcommand cv(app, "cv", "Stratified k-fold cross-validation");
  data(cv, "Dataset TSV (text<TAB>label)");
  common(cv);
  strategy(cv);
  training(cv);
  cv.Flag("--k", &v.k, "Number of folds (5)", [&](subtok::RunConfig& c) { c.k = v.k; });
  report(cv);
  cv.Flag("--splits-out", &v.splits_out, "Write the fold assignment",
          [&](subtok::RunConfig& c) { c.splits_out = v.splits_out; });

  CLI11_PARSE(app, argc, argv);

  const std::vector<const Subcommand*> all = {&train_bpe, &encode, &train, &predict,
                                              &evaluate, &cv};
  const Subcommand* chosen = nullptr;
  for (const Subcommand* s : all) {
    if (s->app()->parsed()) chosen = s;
  }

  subtok::RunConfig config;
  try {
    subtok::RunStage("config", [&] {
      if (!v.config_file.empty()) {
        std::ifstream in(v.config_file);
        if (!in) throw std::runtime_error("cannot open " + v.config_file);
        config.ApplyJson(nlohmann::json::parse(in));
      }
      chosen->Apply(config);
    });
    const std::string name = chosen->app()->get_name();
    if (name == "train-bpe") {
      subtok::CmdTrainBpe(config, std::cerr);
    } else if (name == "encode") {
      subtok::CmdEncode(config, std::cerr);
    } else if (name == "train") {
      subtok::CmdTrain(config, std::cerr);
    } else if (name == "predict") {
      subtok::CmdPredict(config, std::cout, std::cerr);
    } else if (name == "evaluate") {
      subtok::CmdEvaluate(config, std::cout, std::cerr);
    } else if (name == "cv") {
      subtok::CmdCv(config, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
