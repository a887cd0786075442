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

#ifndef SUBTOK_WORDPIECE_H_
#define SUBTOK_WORDPIECE_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subtok/tokenize.h"

namespace subtok {

inline constexpr std::string_view kContinuationMarker = "##";
inline constexpr std::string_view kUnkToken = "[UNK]";

// A fixed wordpiece inventory, typically BERT's vocab.txt. Line index is the
// token id.
class WordpieceVocab {
 public:
  static constexpr size_t kDefaultMaxWordChars = 100;

  // Throws std::invalid_argument when empty, missing [UNK], or a token is
  // duplicated or empty.
  explicit WordpieceVocab(std::vector<std::string> tokens,
                          size_t max_word_chars = kDefaultMaxWordChars);

  static WordpieceVocab Load(std::istream& in,
                             size_t max_word_chars = kDefaultMaxWordChars);
  static WordpieceVocab Load(const std::filesystem::path& path,
                             size_t max_word_chars = kDefaultMaxWordChars);

  bool Contains(const std::string& token) const { return ids_.contains(token); }
  // -1 when absent.
  int TokenId(const std::string& token) const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  size_t size() const { return tokens_.size(); }
  size_t max_word_chars() const { return max_word_chars_; }

  // Greedy longest-match-first. Non-initial pieces are looked up and emitted
  // with the "##" prefix. Returns exactly {"[UNK]"} when some position has
  // no match or the word is longer than max_word_chars scalars.
  TokenStream Encode(std::string_view word) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
  size_t max_word_chars_;
};

// Strips continuation markers and concatenates.
std::string JoinWordpieces(const TokenStream& pieces);

}  // namespace subtok

#endif  // SUBTOK_WORDPIECE_H_
