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

#ifndef SUBTOK_FEATURES_H_
#define SUBTOK_FEATURES_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subtok/tokenize.h"

namespace subtok {

// Feature ids with repetition. Word ids come first in [0, V), hashed bigram
// and subword ids follow in [V, V + B).
using FeatureVector = std::vector<int32_t>;

struct FeatureConfig {
  int64_t min_count = 1;
  int64_t buckets = 2'000'000;
  int word_ngrams = 1;  // 1 or 2.
  int minn = 0;         // minn = maxn = 0 disables subwords.
  int maxn = 0;

  bool subwords() const { return maxn > 0; }
  bool hashed_features() const { return subwords() || word_ngrams > 1; }
  // Throws std::invalid_argument on an inconsistent configuration.
  void Validate() const;
};

// 32-bit FNV-1a over the bytes of s.
uint32_t Fnv1a32(std::string_view s);

// vocab_size + (FNV-1a(s) mod buckets). Throws when buckets < 1.
int64_t HashBucket(std::string_view s, int64_t vocab_size, int64_t buckets);

class FeatureSpace {
 public:
  FeatureSpace() = default;
  // words in id order with their training counts.
  FeatureSpace(std::vector<std::string> words, std::vector<int64_t> counts,
               const FeatureConfig& config);

  // Counts tokens over the training documents and keeps those seen at least
  // min_count times, ordered by descending count, then lexicographically.
  // The bucket space collapses to 0 when no hashed features are configured.
  static FeatureSpace Build(const std::vector<TokenStream>& documents,
                            const FeatureConfig& config);

  // -1 for out-of-vocabulary tokens.
  int32_t WordId(const std::string& token) const;

  FeatureVector Featurize(const TokenStream& tokens) const;

  const FeatureConfig& config() const { return config_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<int64_t>& counts() const { return counts_; }
  int64_t vocab_size() const { return static_cast<int64_t>(words_.size()); }
  int64_t bucket_count() const { return config_.buckets; }
  int64_t total_size() const { return vocab_size() + bucket_count(); }

  // TSV rows `token<TAB>id<TAB>count`, in id order.
  void ExportVocab(std::ostream& out) const;

 private:
  FeatureConfig config_;
  std::vector<std::string> words_;
  std::vector<int64_t> counts_;
  std::unordered_map<std::string, int32_t> ids_;
};

// True for tokens that never get subword features: sentinels, [UNK], and
// pieces carrying BPE or wordpiece markers.
bool SkipsSubwords(std::string_view token);

}  // namespace subtok

#endif  // SUBTOK_FEATURES_H_
