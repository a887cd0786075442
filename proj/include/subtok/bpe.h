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

#ifndef SUBTOK_BPE_H_
#define SUBTOK_BPE_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "subtok/tokenize.h"

namespace subtok {

struct MergePair {
  std::string left;
  std::string right;

  auto operator<=>(const MergePair&) const = default;
};

// Word type -> frequency. Ordered so that training is independent of
// insertion order.
using WordCounts = std::map<std::string, int64_t>;

inline constexpr std::string_view kBpeMarker = "@@";

// An ordered list of learned merges. Immutable once built; encoding is
// const and safe to share across threads.
class BpeModel {
 public:
  BpeModel() = default;
  // Throws std::invalid_argument on a duplicate or empty-sided merge.
  explicit BpeModel(std::vector<MergePair> merges);

  const std::vector<MergePair>& merges() const { return merges_; }
  size_t num_merges() const { return merges_.size(); }

  // Every symbol the merges can produce: the characters of each merge side
  // plus each merged symbol.
  const std::unordered_set<std::string>& vocab() const { return vocab_; }

  // Raw symbols, no markers. Equivalent to applying every merge in training
  // order, each one left to right over the whole word.
  std::vector<std::string> Segment(std::string_view word) const;

  // Symbols with "@@" appended to all but the last.
  TokenStream Encode(std::string_view word) const;

  // Header `#bpe v1 merges=<n>` then `left right` per line.
  void Save(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  static BpeModel Load(std::istream& in);
  static BpeModel Load(const std::filesystem::path& path);

 private:
  struct PairHash {
    size_t operator()(const MergePair& p) const;
  };

  std::vector<MergePair> merges_;
  std::unordered_map<MergePair, int32_t, PairHash> ranks_;
  std::unordered_set<std::string> vocab_;
};

// Learns up to num_merges merges. Each round merges the adjacent symbol pair
// with the highest frequency-weighted count; ties go to the lexicographically
// smallest (left, right). Stops early once no pair occurs at least twice.
// A pair that was already recorded is never selected again.
BpeModel TrainBpe(const WordCounts& corpus, int num_merges);

// Strips "@@" markers and concatenates.
std::string JoinBpePieces(const TokenStream& pieces);

}  // namespace subtok

#endif  // SUBTOK_BPE_H_
