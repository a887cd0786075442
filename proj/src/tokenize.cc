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

#include "subtok/tokenize.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <stdexcept>

#include "subtok/corpus.h"
#include "subtok/utf8.h"

namespace subtok {

namespace {

bool IsSplitChar(UChar32 c) {
  return (U_GET_GC_MASK(c) & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

void Flush(std::string& current, TokenStream& out) {
  if (!current.empty()) {
    out.push_back(std::move(current));
    current.clear();
  }
}

}  // namespace

bool IsSentinel(std::string_view token) {
  return token == kUrlToken || token == kUserToken;
}

TokenStream WordTokenize(std::string_view text) {
  TokenStream out;
  std::string current;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const std::string_view rest = text.substr(static_cast<size_t>(i));
    if (rest.starts_with(kUrlToken) || rest.starts_with(kUserToken)) {
      const size_t n = rest.starts_with(kUrlToken) ? kUrlToken.size()
                                                   : kUserToken.size();
      Flush(current, out);
      out.emplace_back(rest.substr(0, n));
      i += static_cast<int32_t>(n);
      continue;
    }
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    const std::string_view ch = text.substr(start, i - start);
    if (c >= 0 && u_isUWhiteSpace(c)) {
      Flush(current, out);
    } else if (c >= 0 && IsSplitChar(c)) {
      Flush(current, out);
      out.emplace_back(ch);
    } else {
      current.append(ch);
    }
  }
  Flush(current, out);
  return out;
}

TokenStream WordNgrams(const TokenStream& tokens, int n) {
  if (n < 1) throw std::invalid_argument("n-gram order must be >= 1");
  TokenStream out;
  const size_t order = static_cast<size_t>(n);
  if (tokens.size() < order) return out;
  out.reserve(tokens.size() - order + 1);
  for (size_t i = 0; i + order <= tokens.size(); ++i) {
    std::string gram = tokens[i];
    for (size_t j = 1; j < order; ++j) {
      gram.push_back(' ');
      gram.append(tokens[i + j]);
    }
    out.push_back(std::move(gram));
  }
  return out;
}

TokenStream ExtractSubwordNgrams(std::string_view word, int nmin, int nmax) {
  if (nmin < 1 || nmax < nmin) {
    throw std::invalid_argument("invalid subword range " +
                                std::to_string(nmin) + "-" +
                                std::to_string(nmax));
  }
  if (word.empty()) throw std::invalid_argument("empty word");
  std::string wrapped;
  wrapped.reserve(word.size() + 2);
  wrapped.push_back('<');
  wrapped.append(word);
  wrapped.push_back('>');
  const std::vector<size_t> offsets = utf8::Boundaries(wrapped);
  const size_t chars = offsets.size() - 1;

  TokenStream out;
  for (size_t n = static_cast<size_t>(nmin);
       n <= static_cast<size_t>(nmax) && n <= chars; ++n) {
    for (size_t i = 0; i + n <= chars; ++i) {
      out.push_back(wrapped.substr(offsets[i], offsets[i + n] - offsets[i]));
    }
  }
  return out;
}

}  // namespace subtok
