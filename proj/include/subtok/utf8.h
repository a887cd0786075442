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

#ifndef SUBTOK_UTF8_H_
#define SUBTOK_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace subtok::utf8 {

bool IsValid(std::string_view text);

// Number of Unicode scalar values. Input must be valid UTF-8.
size_t Length(std::string_view text);

// Byte offsets of every scalar boundary, including 0 and text.size().
std::vector<size_t> Boundaries(std::string_view text);

// One string per scalar value.
std::vector<std::string> Chars(std::string_view text);

}  // namespace subtok::utf8

#endif  // SUBTOK_UTF8_H_
