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

#ifndef SUBTOK_TOKENIZE_H_
#define SUBTOK_TOKENIZE_H_

#include <string>
#include <string_view>
#include <vector>

namespace subtok {

// Ordered tokens; no token is empty.
using TokenStream = std::vector<std::string>;

// Splits normalized text on whitespace, then breaks every punctuation or
// symbol character (general categories P* and S*) out as its own token.
// The `<url>` and `<user>` sentinels are kept whole.
TokenStream WordTokenize(std::string_view text);

bool IsSentinel(std::string_view token);

// Contiguous n-grams joined by a single space. Empty when tokens.size() < n.
TokenStream WordNgrams(const TokenStream& tokens, int n);

// All substrings, by Unicode scalar, of `<word>` with length in [nmin, nmax].
// Ordered by length, then by position.
TokenStream ExtractSubwordNgrams(std::string_view word, int nmin, int nmax);

}  // namespace subtok

#endif  // SUBTOK_TOKENIZE_H_
