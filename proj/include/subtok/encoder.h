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

#ifndef SUBTOK_ENCODER_H_
#define SUBTOK_ENCODER_H_

#include <memory>
#include <string>
#include <string_view>

#include "subtok/bpe.h"
#include "subtok/tokenize.h"
#include "subtok/wordpiece.h"

namespace subtok {

enum class Strategy { kWord, kBpe, kWordpiece };

std::string_view StrategyName(Strategy strategy);
// Accepts "word", "bpe" and "wordpiece".
Strategy ParseStrategy(std::string_view name);

// Document-level tokenization: word tokenization followed by an optional
// per-word subword split. Every piece is emitted as a standalone token.
// Sentinels pass through untouched.
class DocumentEncoder {
 public:
  static DocumentEncoder Word();
  static DocumentEncoder Bpe(std::shared_ptr<const BpeModel> model);
  static DocumentEncoder Wordpiece(std::shared_ptr<const WordpieceVocab> vocab);

  Strategy strategy() const { return strategy_; }
  const BpeModel* bpe() const { return bpe_.get(); }
  const WordpieceVocab* wordpiece() const { return wordpiece_.get(); }

  TokenStream Encode(std::string_view normalized_text) const;

 private:
  DocumentEncoder() = default;

  Strategy strategy_ = Strategy::kWord;
  std::shared_ptr<const BpeModel> bpe_;
  std::shared_ptr<const WordpieceVocab> wordpiece_;
};

}  // namespace subtok

#endif  // SUBTOK_ENCODER_H_
