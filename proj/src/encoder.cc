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

#include "subtok/encoder.h"

#include <stdexcept>

namespace subtok {

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kWord:
      return "word";
    case Strategy::kBpe:
      return "bpe";
    case Strategy::kWordpiece:
      return "wordpiece";
  }
  return "word";
}

Strategy ParseStrategy(std::string_view name) {
  if (name == "word") return Strategy::kWord;
  if (name == "bpe") return Strategy::kBpe;
  if (name == "wordpiece") return Strategy::kWordpiece;
  throw std::invalid_argument("unknown strategy '" + std::string(name) +
                              "' (expected word, bpe or wordpiece)");
}

DocumentEncoder DocumentEncoder::Word() { return DocumentEncoder(); }

DocumentEncoder DocumentEncoder::Bpe(std::shared_ptr<const BpeModel> model) {
  if (!model) throw std::invalid_argument("bpe strategy requires a BPE model");
  DocumentEncoder encoder;
  encoder.strategy_ = Strategy::kBpe;
  encoder.bpe_ = std::move(model);
  return encoder;
}

DocumentEncoder DocumentEncoder::Wordpiece(
    std::shared_ptr<const WordpieceVocab> vocab) {
  if (!vocab) {
    throw std::invalid_argument("wordpiece strategy requires a vocabulary");
  }
  DocumentEncoder encoder;
  encoder.strategy_ = Strategy::kWordpiece;
  encoder.wordpiece_ = std::move(vocab);
  return encoder;
}

TokenStream DocumentEncoder::Encode(std::string_view normalized_text) const {
  TokenStream words = WordTokenize(normalized_text);
  if (strategy_ == Strategy::kWord) return words;

  TokenStream out;
  out.reserve(words.size() * 2);
  for (std::string& word : words) {
    if (IsSentinel(word)) {
      out.push_back(std::move(word));
      continue;
    }
    TokenStream pieces = strategy_ == Strategy::kBpe ? bpe_->Encode(word)
                                                     : wordpiece_->Encode(word);
    for (std::string& piece : pieces) out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace subtok
