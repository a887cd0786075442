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

#include "subtok/utf8.h"

#include <unicode/utf8.h>

#include <cstdint>

namespace subtok::utf8 {

bool IsValid(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

size_t Length(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  size_t count = 0;
  while (i < length) {
    U8_FWD_1(s, i, length);
    ++count;
  }
  return count;
}

std::vector<size_t> Boundaries(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  std::vector<size_t> offsets;
  offsets.reserve(text.size() + 1);
  int32_t i = 0;
  offsets.push_back(0);
  while (i < length) {
    U8_FWD_1(s, i, length);
    offsets.push_back(static_cast<size_t>(i));
  }
  return offsets;
}

std::vector<std::string> Chars(std::string_view text) {
  const std::vector<size_t> offsets = Boundaries(text);
  std::vector<std::string> chars;
  chars.reserve(offsets.size() - 1);
  for (size_t i = 0; i + 1 < offsets.size(); ++i) {
    chars.emplace_back(text.substr(offsets[i], offsets[i + 1] - offsets[i]));
  }
  return chars;
}

}  // namespace subtok::utf8
