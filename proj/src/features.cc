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

#include "subtok/features.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "subtok/bpe.h"
#include "subtok/wordpiece.h"

namespace subtok {

void FeatureConfig::Validate() const {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  if (word_ngrams != 1 && word_ngrams != 2) {
    throw std::invalid_argument("word_ngrams must be 1 or 2");
  }
  if (!(minn == 0 && maxn == 0) && (minn < 1 || maxn < minn)) {
    throw std::invalid_argument("subword range must satisfy 1 <= minn <= maxn");
  }
  if (buckets < 0) throw std::invalid_argument("buckets must be >= 0");
  if (hashed_features() && buckets < 1) {
    throw std::invalid_argument(
        "bigram or subword features need at least one hash bucket");
  }
}

uint32_t Fnv1a32(std::string_view s) {
  uint32_t h = 2166136261u;
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 16777619u;
  }
  return h;
}

int64_t HashBucket(std::string_view s, int64_t vocab_size, int64_t buckets) {
  if (buckets < 1) throw std::invalid_argument("bucket count must be >= 1");
  return vocab_size + static_cast<int64_t>(Fnv1a32(s) % static_cast<uint64_t>(buckets));
}

bool SkipsSubwords(std::string_view token) {
  return IsSentinel(token) || token == kUnkToken ||
         token.find(kBpeMarker) != std::string_view::npos ||
         token.find(kContinuationMarker) != std::string_view::npos;
}

FeatureSpace::FeatureSpace(std::vector<std::string> words,
                           std::vector<int64_t> counts,
                           const FeatureConfig& config)
    : config_(config), words_(std::move(words)), counts_(std::move(counts)) {
  config_.Validate();
  if (counts_.size() != words_.size()) {
    throw std::invalid_argument("feature space: words/counts size mismatch");
  }
  if (total_size() > std::numeric_limits<int32_t>::max()) {
    throw std::invalid_argument("feature space exceeds 2^31 ids");
  }
  ids_.reserve(words_.size());
  for (size_t i = 0; i < words_.size(); ++i) {
    if (!ids_.emplace(words_[i], static_cast<int32_t>(i)).second) {
      throw std::invalid_argument("feature space: duplicate word '" +
                                  words_[i] + "'");
    }
  }
}

FeatureSpace FeatureSpace::Build(const std::vector<TokenStream>& documents,
                                 const FeatureConfig& config) {
  config.Validate();
  std::unordered_map<std::string, int64_t> counts;
  for (const TokenStream& doc : documents) {
    for (const std::string& token : doc) ++counts[token];
  }
  std::vector<std::pair<std::string, int64_t>> kept;
  for (auto& [token, count] : counts) {
    if (count >= config.min_count) kept.emplace_back(token, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> words;
  std::vector<int64_t> word_counts;
  words.reserve(kept.size());
  word_counts.reserve(kept.size());
  for (auto& [token, count] : kept) {
    words.push_back(std::move(token));
    word_counts.push_back(count);
  }
  FeatureConfig effective = config;
  if (!effective.hashed_features()) effective.buckets = 0;
  return FeatureSpace(std::move(words), std::move(word_counts), effective);
}

int32_t FeatureSpace::WordId(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? -1 : it->second;
}

FeatureVector FeatureSpace::Featurize(const TokenStream& tokens) const {
  FeatureVector ids;
  ids.reserve(tokens.size() * (config_.subwords() ? 16 : 2));
  const int64_t vocab = vocab_size();
  for (const std::string& token : tokens) {
    const int32_t id = WordId(token);
    if (id >= 0) ids.push_back(id);
    if (config_.subwords() && !SkipsSubwords(token)) {
      for (const std::string& sub :
           ExtractSubwordNgrams(token, config_.minn, config_.maxn)) {
        ids.push_back(static_cast<int32_t>(HashBucket(sub, vocab, config_.buckets)));
      }
    }
  }
  if (config_.word_ngrams == 2) {
    for (const std::string& bigram : WordNgrams(tokens, 2)) {
      ids.push_back(static_cast<int32_t>(HashBucket(bigram, vocab, config_.buckets)));
    }
  }
  return ids;
}

void FeatureSpace::ExportVocab(std::ostream& out) const {
  for (size_t i = 0; i < words_.size(); ++i) {
    out << words_[i] << '\t' << i << '\t' << counts_[i] << '\n';
  }
}

}  // namespace subtok
