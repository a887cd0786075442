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

#include "subtok/corpus.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "subtok/rng.h"
#include "subtok/utf8.h"

namespace subtok {

void LabeledDataset::Add(std::string text, std::string_view label) {
  int id = LabelId(label);
  if (id < 0) {
    id = static_cast<int>(labels_.size());
    labels_.emplace_back(label);
  }
  Document doc;
  doc.id = static_cast<int64_t>(documents_.size());
  doc.text = std::move(text);
  doc.label = id;
  documents_.push_back(std::move(doc));
}

int LabeledDataset::LabelId(std::string_view label) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int64_t> LabeledDataset::ClassCounts() const {
  std::vector<int64_t> counts(labels_.size(), 0);
  for (const Document& doc : documents_) ++counts[doc.label];
  return counts;
}

namespace {

const icu::Normalizer2& Nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || nfc == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *nfc;
}

icu::UnicodeString NfcNormalize(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = Nfc().normalize(s, status);
  if (U_FAILURE(status)) throw std::runtime_error("NFC normalization failed");
  return out;
}

bool IsWordChar(UChar32 c) { return c == '_' || u_isalnum(c); }

bool StartsWith(const std::vector<UChar32>& cps, size_t pos,
                std::string_view ascii) {
  if (pos + ascii.size() > cps.size()) return false;
  for (size_t i = 0; i < ascii.size(); ++i) {
    if (cps[pos + i] != static_cast<UChar32>(ascii[i])) return false;
  }
  return true;
}

void AppendAscii(std::vector<UChar32>& out, std::string_view ascii) {
  for (char c : ascii) out.push_back(static_cast<UChar32>(c));
}

// Input has no whitespace other than single spaces.
std::vector<UChar32> ReplaceTweetEntities(const std::vector<UChar32>& in) {
  std::vector<UChar32> out;
  out.reserve(in.size());
  size_t i = 0;
  while (i < in.size()) {
    size_t scheme = 0;
    if (StartsWith(in, i, "https://")) {
      scheme = 8;
    } else if (StartsWith(in, i, "http://")) {
      scheme = 7;
    }
    if (scheme > 0 && i + scheme < in.size() && in[i + scheme] != ' ') {
      size_t j = i + scheme;
      while (j < in.size() && in[j] != ' ') ++j;
      AppendAscii(out, kUrlToken);
      i = j;
      continue;
    }
    if (in[i] == '@' && i + 1 < in.size() && IsWordChar(in[i + 1])) {
      size_t j = i + 1;
      while (j < in.size() && IsWordChar(in[j])) ++j;
      AppendAscii(out, kUserToken);
      i = j;
      continue;
    }
    out.push_back(in[i++]);
  }
  return out;
}

}  // namespace

std::string NormalizeText(std::string_view text, bool tweet_mode) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s = NfcNormalize(s);
  s.toLower(icu::Locale::getRoot());
  s = NfcNormalize(s);

  std::vector<UChar32> cps;
  cps.reserve(static_cast<size_t>(s.length()));
  bool pending_space = false;
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) {
    const UChar32 c = s.char32At(i);
    if (u_isUWhiteSpace(c)) {
      pending_space = !cps.empty();
      continue;
    }
    if (pending_space) {
      cps.push_back(' ');
      pending_space = false;
    }
    cps.push_back(c);
  }
  if (tweet_mode) cps = ReplaceTweetEntities(cps);

  icu::UnicodeString result =
      icu::UnicodeString::fromUTF32(cps.data(), static_cast<int32_t>(cps.size()));
  std::string out;
  result.toUTF8String(out);
  return out;
}

LabeledDataset ParseDataset(std::istream& in, const LoadOptions& options) {
  LabeledDataset dataset;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_number == 1 && options.has_header) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": expected text<TAB>label");
    }
    std::string_view text(line.data(), tab);
    std::string_view label(line.data() + tab + 1, line.size() - tab - 1);
    if (const size_t extra = label.find('\t'); extra != std::string_view::npos) {
      label = label.substr(0, extra);
    }
    if (!utf8::IsValid(line)) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": invalid UTF-8");
    }
    if (label.empty()) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": empty label");
    }
    std::string normalized = NormalizeText(text, options.tweet_mode);
    if (normalized.empty()) {
      throw std::runtime_error("line " + std::to_string(line_number) +
                               ": text is empty after normalization");
    }
    dataset.Add(std::move(normalized), label);
  }
  if (in.bad()) throw std::runtime_error("read error");
  if (dataset.size() == 0) throw std::runtime_error("no documents");
  return dataset;
}

LabeledDataset LoadDataset(const std::filesystem::path& path,
                           const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset " + path.string());
  try {
    return ParseDataset(in, options);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

SplitSpec StratifiedKFold(const LabeledDataset& dataset, int k, uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (static_cast<size_t>(k) > dataset.size()) {
    throw std::invalid_argument("k=" + std::to_string(k) + " exceeds the " +
                                std::to_string(dataset.size()) + " documents");
  }
  std::vector<std::vector<int64_t>> by_class(dataset.num_classes());
  for (const Document& doc : dataset.documents()) {
    by_class[doc.label].push_back(doc.id);
  }

  SplitSpec splits;
  splits.k = k;
  splits.seed = seed;
  splits.folds.resize(k);
  Rng rng(seed);
  size_t next_fold = 0;
  for (std::vector<int64_t>& ids : by_class) {
    Shuffle(std::span<int64_t>(ids), rng);
    for (int64_t id : ids) {
      splits.folds[next_fold].push_back(id);
      next_fold = (next_fold + 1) % static_cast<size_t>(k);
    }
  }
  for (auto& fold : splits.folds) std::sort(fold.begin(), fold.end());
  return splits;
}

void WriteSplits(const SplitSpec& splits, std::ostream& out) {
  out << "k=" << splits.k << " seed=" << splits.seed << "\n";
  for (const auto& fold : splits.folds) {
    for (size_t i = 0; i < fold.size(); ++i) {
      if (i > 0) out << ',';
      out << fold[i];
    }
    out << "\n";
  }
}

SplitSpec ReadSplits(std::istream& in) {
  SplitSpec splits;
  std::string header;
  if (!std::getline(in, header) ||
      std::sscanf(header.c_str(), "k=%d seed=%" SCNu64, &splits.k,
                  &splits.seed) != 2) {
    throw std::runtime_error("split file: bad header");
  }
  std::string line;
  while (std::getline(in, line)) {
    std::vector<int64_t> fold;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      if (!field.empty()) fold.push_back(std::stoll(field));
    }
    splits.folds.push_back(std::move(fold));
  }
  if (static_cast<int>(splits.folds.size()) != splits.k) {
    throw std::runtime_error("split file: expected " +
                             std::to_string(splits.k) + " folds");
  }
  return splits;
}

}  // namespace subtok
