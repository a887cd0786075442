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

#include "subtok/bpe.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

#include "subtok/utf8.h"

namespace subtok {

namespace {

bool IsValidSymbol(std::string_view s) {
  return !s.empty() && s.find_first_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

size_t BpeModel::PairHash::operator()(const MergePair& p) const {
  const size_t h1 = std::hash<std::string>{}(p.left);
  const size_t h2 = std::hash<std::string>{}(p.right);
  return h1 ^ (h2 + 0x9E3779B97F4A7C15ULL + (h1 << 6) + (h1 >> 2));
}

BpeModel::BpeModel(std::vector<MergePair> merges) : merges_(std::move(merges)) {
  ranks_.reserve(merges_.size());
  for (size_t i = 0; i < merges_.size(); ++i) {
    const MergePair& m = merges_[i];
    if (!IsValidSymbol(m.left) || !IsValidSymbol(m.right)) {
      throw std::invalid_argument("merge " + std::to_string(i) +
                                  ": symbols must be non-empty, no whitespace");
    }
    if (!ranks_.emplace(m, static_cast<int32_t>(i)).second) {
      throw std::invalid_argument("duplicate merge '" + m.left + " " +
                                  m.right + "'");
    }
    for (const std::string* side : {&m.left, &m.right}) {
      for (std::string& ch : utf8::Chars(*side)) vocab_.insert(std::move(ch));
    }
    vocab_.insert(m.left + m.right);
  }
}

std::vector<std::string> BpeModel::Segment(std::string_view word) const {
  std::vector<std::string> symbols = utf8::Chars(word);
  int32_t next_rank = 0;
  MergePair probe;
  while (symbols.size() > 1) {
    int32_t best = std::numeric_limits<int32_t>::max();
    for (size_t i = 0; i + 1 < symbols.size(); ++i) {
      probe.left = symbols[i];
      probe.right = symbols[i + 1];
      auto it = ranks_.find(probe);
      if (it != ranks_.end() && it->second >= next_rank && it->second < best) {
        best = it->second;
      }
    }
    if (best == std::numeric_limits<int32_t>::max()) break;

    const MergePair& merge = merges_[best];
    std::vector<std::string> merged;
    merged.reserve(symbols.size());
    for (size_t i = 0; i < symbols.size(); ++i) {
      if (i + 1 < symbols.size() && symbols[i] == merge.left &&
          symbols[i + 1] == merge.right) {
        merged.push_back(symbols[i] + symbols[i + 1]);
        ++i;
      } else {
        merged.push_back(std::move(symbols[i]));
      }
    }
    symbols = std::move(merged);
    next_rank = best + 1;
  }
  return symbols;
}

TokenStream BpeModel::Encode(std::string_view word) const {
  TokenStream pieces = Segment(word);
  for (size_t i = 0; i + 1 < pieces.size(); ++i) pieces[i].append(kBpeMarker);
  return pieces;
}

void BpeModel::Save(std::ostream& out) const {
  out << "#bpe v1 merges=" << merges_.size() << "\n";
  for (const MergePair& m : merges_) out << m.left << ' ' << m.right << "\n";
}

void BpeModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  Save(out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

BpeModel BpeModel::Load(std::istream& in) {
  std::string line;
  constexpr std::string_view kHeader = "#bpe v1 merges=";
  if (!std::getline(in, line) || !line.starts_with(kHeader)) {
    throw std::runtime_error("merges file: missing '#bpe v1' header");
  }
  size_t expected = 0;
  try {
    expected = std::stoul(line.substr(kHeader.size()));
  } catch (const std::exception&) {
    throw std::runtime_error("merges file: bad merge count in header");
  }
  std::vector<MergePair> merges;
  merges.reserve(expected);
  size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    const size_t space = line.find(' ');
    if (space == std::string::npos || line.find(' ', space + 1) != std::string::npos) {
      throw std::runtime_error("merges file line " + std::to_string(line_number) +
                               ": expected 'left right'");
    }
    merges.push_back({line.substr(0, space), line.substr(space + 1)});
  }
  if (merges.size() != expected) {
    throw std::runtime_error("merges file: header says " +
                             std::to_string(expected) + " merges, found " +
                             std::to_string(merges.size()));
  }
  return BpeModel(std::move(merges));
}

BpeModel BpeModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open merges file " + path.string());
  return Load(in);
}

std::string JoinBpePieces(const TokenStream& pieces) {
  std::string word;
  for (size_t i = 0; i < pieces.size(); ++i) {
    std::string_view piece = pieces[i];
    if (i + 1 < pieces.size() && piece.ends_with(kBpeMarker)) {
      piece.remove_suffix(kBpeMarker.size());
    }
    word.append(piece);
  }
  return word;
}

namespace {

// Incremental trainer over interned symbols. Pair statistics are updated
// only for the words that contain the merged pair.
class BpeTrainer {
 public:
  explicit BpeTrainer(const WordCounts& corpus)
      : queue_(CandidateOrder{&symbols_}) {
    for (const auto& [word, freq] : corpus) {
      if (freq <= 0) continue;
      std::vector<uint32_t> seq;
      for (const std::string& ch : utf8::Chars(word)) seq.push_back(Intern(ch));
      const uint32_t index = static_cast<uint32_t>(words_.size());
      words_.push_back(std::move(seq));
      freqs_.push_back(freq);
      const auto& w = words_.back();
      for (size_t i = 0; i + 1 < w.size(); ++i) {
        const uint64_t key = Key(w[i], w[i + 1]);
        counts_[key] += freq;
        where_[key].push_back(index);
      }
    }
    for (const auto& [key, count] : counts_) {
      queue_.insert({count, Left(key), Right(key)});
    }
  }

  std::vector<MergePair> Run(int num_merges) {
    std::vector<MergePair> merges;
    while (static_cast<int>(merges.size()) < num_merges) {
      auto best = queue_.begin();
      while (best != queue_.end() && recorded_.contains(Key(best->left, best->right))) {
        ++best;
      }
      if (best == queue_.end() || best->count < 2) break;
      const uint32_t left = best->left;
      const uint32_t right = best->right;
      merges.push_back({symbols_[left], symbols_[right]});
      recorded_.insert(Key(left, right));
      Merge(left, right);
    }
    return merges;
  }

 private:
  struct Candidate {
    int64_t count;
    uint32_t left;
    uint32_t right;
  };

  struct CandidateOrder {
    const std::vector<std::string>* symbols;
    bool operator()(const Candidate& a, const Candidate& b) const {
      if (a.count != b.count) return a.count > b.count;
      if (a.left != b.left) return (*symbols)[a.left] < (*symbols)[b.left];
      if (a.right != b.right) return (*symbols)[a.right] < (*symbols)[b.right];
      return false;
    }
  };

  static uint64_t Key(uint32_t left, uint32_t right) {
    return (static_cast<uint64_t>(left) << 32) | right;
  }
  static uint32_t Left(uint64_t key) { return static_cast<uint32_t>(key >> 32); }
  static uint32_t Right(uint64_t key) { return static_cast<uint32_t>(key); }

  uint32_t Intern(const std::string& symbol) {
    auto [it, inserted] =
        ids_.emplace(symbol, static_cast<uint32_t>(symbols_.size()));
    if (inserted) symbols_.push_back(symbol);
    return it->second;
  }

  void Merge(uint32_t left, uint32_t right) {
    const uint32_t merged = Intern(symbols_[left] + symbols_[right]);
    std::vector<uint32_t> affected = std::move(where_[Key(left, right)]);
    where_.erase(Key(left, right));
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());

    std::unordered_map<uint64_t, int64_t> deltas;
    for (uint32_t index : affected) {
      std::vector<uint32_t>& seq = words_[index];
      const int64_t freq = freqs_[index];
      std::vector<uint32_t> out;
      out.reserve(seq.size());
      bool changed = false;
      for (size_t i = 0; i < seq.size(); ++i) {
        if (i + 1 < seq.size() && seq[i] == left && seq[i + 1] == right) {
          out.push_back(merged);
          ++i;
          changed = true;
        } else {
          out.push_back(seq[i]);
        }
      }
      if (!changed) continue;
      for (size_t i = 0; i + 1 < seq.size(); ++i) {
        deltas[Key(seq[i], seq[i + 1])] -= freq;
      }
      for (size_t i = 0; i + 1 < out.size(); ++i) {
        const uint64_t key = Key(out[i], out[i + 1]);
        deltas[key] += freq;
        if (out[i] == merged || out[i + 1] == merged) where_[key].push_back(index);
      }
      seq = std::move(out);
    }

    for (const auto& [key, delta] : deltas) {
      if (delta == 0) continue;
      int64_t& count = counts_[key];
      if (count > 0) queue_.erase({count, Left(key), Right(key)});
      count += delta;
      if (count > 0) {
        queue_.insert({count, Left(key), Right(key)});
      } else {
        counts_.erase(key);
      }
    }
  }

  std::vector<std::string> symbols_;
  std::unordered_map<std::string, uint32_t> ids_;
  std::vector<std::vector<uint32_t>> words_;
  std::vector<int64_t> freqs_;
  std::unordered_map<uint64_t, int64_t> counts_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> where_;
  std::unordered_set<uint64_t> recorded_;
  std::set<Candidate, CandidateOrder> queue_;
};

}  // namespace

BpeModel TrainBpe(const WordCounts& corpus, int num_merges) {
  if (corpus.empty()) throw std::invalid_argument("empty BPE training corpus");
  if (num_merges < 0) throw std::invalid_argument("num_merges must be >= 0");
  for (const auto& [word, freq] : corpus) {
    if (!IsValidSymbol(word)) {
      throw std::invalid_argument("BPE corpus word must be non-empty without "
                                  "whitespace: '" + word + "'");
    }
  }
  BpeTrainer trainer(corpus);
  return BpeModel(trainer.Run(num_merges));
}

}  // namespace subtok
