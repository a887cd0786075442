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

#include "subtok/model.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "subtok/rng.h"

namespace subtok {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'X', 'T'};
constexpr uint8_t kVersion = 1;

void WriteU32(std::ostream& out, uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                         static_cast<char>((v >> 16) & 0xFF),
                         static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes, 4);
}

uint32_t ReadU32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw std::runtime_error("model file truncated");
  }
  return static_cast<uint32_t>(bytes[0]) | (static_cast<uint32_t>(bytes[1]) << 8) |
         (static_cast<uint32_t>(bytes[2]) << 16) | (static_cast<uint32_t>(bytes[3]) << 24);
}

void WriteFloats(std::ostream& out, const std::vector<float>& values) {
  std::vector<char> buffer;
  constexpr size_t kChunk = 1 << 16;
  buffer.reserve(kChunk * 4);
  for (size_t start = 0; start < values.size(); start += kChunk) {
    buffer.clear();
    const size_t end = std::min(values.size(), start + kChunk);
    for (size_t i = start; i < end; ++i) {
      const uint32_t bits = std::bit_cast<uint32_t>(values[i]);
      buffer.push_back(static_cast<char>(bits & 0xFF));
      buffer.push_back(static_cast<char>((bits >> 8) & 0xFF));
      buffer.push_back(static_cast<char>((bits >> 16) & 0xFF));
      buffer.push_back(static_cast<char>((bits >> 24) & 0xFF));
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  }
}

void ReadFloats(std::istream& in, std::vector<float>& values) {
  std::vector<unsigned char> buffer;
  constexpr size_t kChunk = 1 << 16;
  for (size_t start = 0; start < values.size(); start += kChunk) {
    const size_t end = std::min(values.size(), start + kChunk);
    buffer.resize((end - start) * 4);
    if (!in.read(reinterpret_cast<char*>(buffer.data()),
                 static_cast<std::streamsize>(buffer.size()))) {
      throw std::runtime_error("model file truncated");
    }
    for (size_t i = start; i < end; ++i) {
      const unsigned char* b = &buffer[(i - start) * 4];
      const uint32_t bits = static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
                            (static_cast<uint32_t>(b[2]) << 16) |
                            (static_cast<uint32_t>(b[3]) << 24);
      values[i] = std::bit_cast<float>(bits);
    }
  }
}

bool AllFinite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw std::invalid_argument("lr must be > 0");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
}

ClassifierModel ClassifierModel::Init(FeatureSpace space, int dim,
                                      std::vector<std::string> labels,
                                      uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (labels.size() < 2) throw std::invalid_argument("need at least 2 labels");
  ClassifierModel model;
  model.dim_ = dim;
  model.labels_ = std::move(labels);
  model.space_ = std::move(space);
  model.seed_ = seed;
  model.input_.resize(static_cast<size_t>(model.space_.total_size()) * dim);
  model.output_.assign(model.labels_.size() * dim, 0.0f);
  Rng rng(seed);
  const double bound = 1.0 / dim;
  for (float& w : model.input_) w = static_cast<float>(rng.Uniform(-bound, bound));
  return model;
}

std::vector<double> ClassifierModel::Hidden(std::span<const int32_t> features) const {
  std::vector<double> hidden(dim_, 0.0);
  if (features.empty()) return hidden;
  for (int32_t id : features) {
    std::span<const float> row = input_row(id);
    for (int j = 0; j < dim_; ++j) hidden[j] += row[j];
  }
  const double scale = 1.0 / static_cast<double>(features.size());
  for (double& h : hidden) h *= scale;
  return hidden;
}

namespace {

std::vector<double> OutputLogits(const ClassifierModel& model,
                                 std::span<const double> hidden) {
  std::vector<double> logits(model.num_classes(), 0.0);
  for (int c = 0; c < model.num_classes(); ++c) {
    std::span<const float> row = model.output_row(c);
    double z = 0.0;
    for (int j = 0; j < model.dim(); ++j) z += static_cast<double>(row[j]) * hidden[j];
    logits[c] = z;
  }
  return logits;
}

}  // namespace

std::vector<double> ClassifierModel::Logits(std::span<const int32_t> features) const {
  const std::vector<double> hidden = Hidden(features);
  return OutputLogits(*this, hidden);
}

std::vector<double> ClassifierModel::Forward(std::span<const int32_t> features) const {
  const std::vector<double> logits = Logits(features);
  return Softmax(logits);
}

Prediction ClassifierModel::Predict(std::span<const int32_t> features) const {
  const std::vector<double> probs = Forward(features);
  Prediction best;
  best.label = 0;
  best.probability = probs[0];
  for (size_t c = 1; c < probs.size(); ++c) {
    if (probs[c] > best.probability) {
      best.label = static_cast<int>(c);
      best.probability = probs[c];
    }
  }
  return best;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> probs(logits.size());
  if (logits.empty()) return probs;
  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

ExampleGradient ComputeExampleGradient(const ClassifierModel& model,
                                       std::span<const int32_t> features,
                                       int label) {
  ExampleGradient grad;
  grad.hidden = model.Hidden(features);
  const std::vector<double> logits = OutputLogits(model, grad.hidden);
  grad.probs = Softmax(logits);

  const double max = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - max);
  grad.loss = std::log(sum) - (logits[label] - max);

  grad.output_grad = grad.probs;
  grad.output_grad[label] -= 1.0;

  grad.hidden_grad.assign(model.dim(), 0.0);
  for (int c = 0; c < model.num_classes(); ++c) {
    std::span<const float> row = model.output_row(c);
    const double g = grad.output_grad[c];
    for (int j = 0; j < model.dim(); ++j) grad.hidden_grad[j] += g * row[j];
  }
  return grad;
}

double SgdStep(ClassifierModel& model, std::span<const int32_t> features,
               int label, double lr) {
  if (features.empty()) return std::nan("");
  const ExampleGradient grad = ComputeExampleGradient(model, features, label);
  if (!std::isfinite(grad.loss) || !AllFinite(grad.hidden_grad) ||
      !AllFinite(grad.output_grad)) {
    return std::numeric_limits<double>::infinity();
  }
  const int dim = model.dim();
  for (int c = 0; c < model.num_classes(); ++c) {
    std::span<float> row = model.output_row(c);
    const double step = lr * grad.output_grad[c];
    for (int j = 0; j < dim; ++j) {
      row[j] = static_cast<float>(row[j] - step * grad.hidden[j]);
    }
  }
  const double scale = lr / static_cast<double>(features.size());
  for (int32_t id : features) {
    std::span<float> row = model.input_row(id);
    for (int j = 0; j < dim; ++j) {
      row[j] = static_cast<float>(row[j] - scale * grad.hidden_grad[j]);
    }
  }
  return grad.loss;
}

TrainStats Train(ClassifierModel& model,
                 const std::vector<FeatureVector>& features,
                 const std::vector<int>& labels, const TrainConfig& config,
                 std::span<const int64_t> doc_ids) {
  config.Validate();
  if (features.empty()) throw std::invalid_argument("no training documents");
  if (features.size() != labels.size()) {
    throw std::invalid_argument("features/labels size mismatch");
  }
  if (!doc_ids.empty() && doc_ids.size() != features.size()) {
    throw std::invalid_argument("doc_ids size mismatch");
  }
  for (int label : labels) {
    if (label < 0 || label >= model.num_classes()) {
      throw std::invalid_argument("label id " + std::to_string(label) +
                                  " outside the model's label set");
    }
  }

  TrainStats stats;
  const size_t n = features.size();
  const double total = static_cast<double>(config.epochs) * static_cast<double>(n);
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  // Initialization draws from `seed`; the shuffle stream is kept separate.
  Rng rng(config.seed + 1);
  int64_t processed = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(std::span<size_t>(order), rng);
    double loss_sum = 0.0;
    int64_t updated = 0;
    for (size_t index : order) {
      const double lr = config.lr * (1.0 - static_cast<double>(processed) / total);
      ++processed;
      if (features[index].empty()) {
        ++stats.skipped;
        continue;
      }
      const double loss = SgdStep(model, features[index], labels[index], lr);
      if (!std::isfinite(loss)) {
        const int64_t doc = doc_ids.empty() ? static_cast<int64_t>(index) : doc_ids[index];
        throw std::runtime_error("non-finite loss at document " + std::to_string(doc) +
                                 " (epoch " + std::to_string(epoch + 1) + ")");
      }
      loss_sum += loss;
      ++updated;
    }
    stats.epoch_loss.push_back(updated > 0 ? loss_sum / static_cast<double>(updated) : 0.0);
  }
  return stats;
}

int64_t ClassifierModel::LoadPretrainedEmbeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("embeddings: empty file");
  int64_t declared_count = 0;
  int declared_dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> declared_count >> declared_dim)) {
      throw std::runtime_error("embeddings line 1: expected header '<count> <dim>'");
    }
  }
  if (declared_dim != dim_) {
    throw std::runtime_error("embeddings: dimension " + std::to_string(declared_dim) +
                             " does not match model dimension " + std::to_string(dim_));
  }

  std::unordered_set<int32_t> written;
  std::vector<float> values(dim_);
  int64_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(' ') == std::string::npos) continue;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end && *p == ' ') ++p;
    const char* word_end = std::find(p, end, ' ');
    const std::string word(p, word_end);
    p = word_end;
    int parsed = 0;
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      if (parsed == dim_) {
        parsed = dim_ + 1;
        break;
      }
      float v = 0.0f;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || (next != end && *next != ' ') || !std::isfinite(v)) {
        throw std::runtime_error("embeddings line " + std::to_string(line_number) +
                                 ": bad number");
      }
      values[parsed++] = v;
      p = next;
    }
    if (parsed != dim_) {
      throw std::runtime_error("embeddings line " + std::to_string(line_number) +
                               ": expected " + std::to_string(dim_) + " values");
    }
    const int32_t id = space_.WordId(word);
    if (id < 0) continue;
    std::copy(values.begin(), values.end(), input_row(id).begin());
    written.insert(id);
  }
  return static_cast<int64_t>(written.size());
}

int64_t ClassifierModel::LoadPretrainedEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open embeddings " + path.string());
  return LoadPretrainedEmbeddings(in);
}

void ClassifierModel::Save(std::ostream& out) const {
  const FeatureConfig& fc = space_.config();
  nlohmann::json meta = {
      {"d", dim_},
      {"C", labels_.size()},
      {"V", space_.vocab_size()},
      {"B", space_.bucket_count()},
      {"labels", labels_},
      {"features",
       {{"min_count", fc.min_count},
        {"buckets", fc.buckets},
        {"word_ngrams", fc.word_ngrams},
        {"minn", fc.minn},
        {"maxn", fc.maxn}}},
      {"words", space_.words()},
      {"word_counts", space_.counts()},
      {"seed", seed_},
      {"annotations", annotations_},
  };
  const std::string blob = meta.dump();
  out.write(kMagic, 4);
  out.put(static_cast<char>(kVersion));
  WriteU32(out, static_cast<uint32_t>(blob.size()));
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  WriteFloats(out, input_);
  WriteFloats(out, output_);
}

void ClassifierModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model " + path.string());
  Save(out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ClassifierModel ClassifierModel::Load(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw std::runtime_error("not a model file (bad magic)");
  }
  const int version = in.get();
  if (version == std::char_traits<char>::eof()) throw std::runtime_error("model file truncated");
  if (version != kVersion) {
    throw std::runtime_error("unsupported model version " + std::to_string(version));
  }
  const uint32_t length = ReadU32(in);
  std::string blob(length, '\0');
  if (!in.read(blob.data(), length)) throw std::runtime_error("model file truncated");

  ClassifierModel model;
  try {
    const nlohmann::json meta = nlohmann::json::parse(blob);
    FeatureConfig fc;
    const auto& f = meta.at("features");
    fc.min_count = f.at("min_count").get<int64_t>();
    fc.buckets = f.at("buckets").get<int64_t>();
    fc.word_ngrams = f.at("word_ngrams").get<int>();
    fc.minn = f.at("minn").get<int>();
    fc.maxn = f.at("maxn").get<int>();
    model.dim_ = meta.at("d").get<int>();
    model.labels_ = meta.at("labels").get<std::vector<std::string>>();
    model.seed_ = meta.at("seed").get<uint64_t>();
    model.space_ = FeatureSpace(meta.at("words").get<std::vector<std::string>>(),
                                meta.at("word_counts").get<std::vector<int64_t>>(), fc);
    model.annotations_ = meta.value("annotations", nlohmann::json::object());
    if (model.dim_ < 1 || model.labels_.size() < 2 ||
        meta.at("C").get<size_t>() != model.labels_.size() ||
        meta.at("V").get<int64_t>() != model.space_.vocab_size() ||
        meta.at("B").get<int64_t>() != model.space_.bucket_count()) {
      throw std::runtime_error("inconsistent dimensions");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model metadata: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("model metadata: ") + e.what());
  }
  model.input_.resize(static_cast<size_t>(model.space_.total_size()) * model.dim_);
  model.output_.resize(model.labels_.size() * model.dim_);
  ReadFloats(in, model.input_);
  ReadFloats(in, model.output_);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("model file has trailing data");
  }
  return model;
}

ClassifierModel ClassifierModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model " + path.string());
  return Load(in);
}

}  // namespace subtok
