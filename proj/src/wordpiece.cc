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

#include "subtok/wordpiece.h"

#include <fstream>
#include <istream>
#include <stdexcept>

#include "subtok/utf8.h"

namespace subtok {

WordpieceVocab::WordpieceVocab(std::vector<std::string> tokens,
                               size_t max_word_chars)
    : tokens_(std::move(tokens)), max_word_chars_(max_word_chars) {
  if (tokens_.empty()) throw std::invalid_argument("wordpiece vocab is empty");
  ids_.reserve(tokens_.size());
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) {
      throw std::invalid_argument("wordpiece vocab: empty token at line " +
                                  std::to_string(i + 1));
    }
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw std::invalid_argument("wordpiece vocab: duplicate token '" +
                                  tokens_[i] + "'");
    }
  }
  if (!ids_.contains(std::string(kUnkToken))) {
    throw std::invalid_argument("wordpiece vocab: missing [UNK]");
  }
}

WordpieceVocab WordpieceVocab::Load(std::istream& in, size_t max_word_chars) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return WordpieceVocab(std::move(tokens), max_word_chars);
}

WordpieceVocab WordpieceVocab::Load(const std::filesystem::path& path,
                                    size_t max_word_chars) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open vocab file " + path.string());
  return Load(in, max_word_chars);
}

int WordpieceVocab::TokenId(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? -1 : it->second;
}

TokenStream WordpieceVocab::Encode(std::string_view word) const {
  const std::vector<size_t> offsets = utf8::Boundaries(word);
  const size_t chars = offsets.size() - 1;
  if (chars > max_word_chars_) return {std::string(kUnkToken)};

  TokenStream pieces;
  size_t start = 0;
  std::string candidate;
  while (start < chars) {
    size_t end = chars;
    bool found = false;
    while (end > start) {
      candidate.clear();
      if (start > 0) candidate.append(kContinuationMarker);
      candidate.append(word.substr(offsets[start], offsets[end] - offsets[start]));
      if (ids_.contains(candidate)) {
        found = true;
        break;
      }
      --end;
    }
    if (!found) return {std::string(kUnkToken)};
    pieces.push_back(candidate);
    start = end;
  }
  return pieces;
}

std::string JoinWordpieces(const TokenStream& pieces) {
  std::string word;
  for (size_t i = 0; i < pieces.size(); ++i) {
    std::string_view piece = pieces[i];
    if (i > 0 && piece.starts_with(kContinuationMarker)) {
      piece.remove_prefix(kContinuationMarker.size());
    }
    word.append(piece);
  }
  return word;
}

}  // namespace subtok
