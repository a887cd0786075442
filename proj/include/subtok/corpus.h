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

#ifndef SUBTOK_CORPUS_H_
#define SUBTOK_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace subtok {

struct Document {
  int64_t id = 0;     // Position in the source file, 0-based.
  std::string text;   // Normalized, non-empty.
  int label = 0;      // Index into LabeledDataset::labels.
};

class LabeledDataset {
 public:
  LabeledDataset() = default;

  // Appends a document, registering its label on first appearance. The
  // document id is its position in the dataset.
  void Add(std::string text, std::string_view label);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<std::string>& labels() const { return labels_; }
  size_t size() const { return documents_.size(); }
  size_t num_classes() const { return labels_.size(); }

  // Returns -1 when the label is unknown.
  int LabelId(std::string_view label) const;

  // Number of documents per class id.
  std::vector<int64_t> ClassCounts() const;

 private:
  std::vector<Document> documents_;
  std::vector<std::string> labels_;
};

struct LoadOptions {
  bool has_header = false;
  bool tweet_mode = false;
};

// Reads a `text<TAB>label` file. Text is normalized on load; lines whose text
// normalizes to nothing are rejected. Throws std::runtime_error naming the
// offending line.
LabeledDataset LoadDataset(const std::filesystem::path& path,
                           const LoadOptions& options = {});
LabeledDataset ParseDataset(std::istream& in, const LoadOptions& options = {});

// NFC, lowercase, whitespace collapsed and trimmed. In tweet mode, URLs
// become `<url>` and @-mentions become `<user>`. Invalid UTF-8 sequences are
// replaced with U+FFFD.
std::string NormalizeText(std::string_view text, bool tweet_mode = false);

inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kUserToken = "<user>";

struct SplitSpec {
  int k = 0;
  uint64_t seed = 0;
  std::vector<std::vector<int64_t>> folds;  // Document ids, ascending.
};

// Per class, ids are shuffled (xoshiro256** seeded via splitmix64,
// Fisher-Yates) and dealt round-robin over the folds. The dealing position
// carries over from one class to the next so that fold sizes stay balanced.
SplitSpec StratifiedKFold(const LabeledDataset& dataset, int k, uint64_t seed);

// Split file: header `k=<k> seed=<seed>`, then one comma-separated line of
// document ids per fold.
void WriteSplits(const SplitSpec& splits, std::ostream& out);
SplitSpec ReadSplits(std::istream& in);

}  // namespace subtok

#endif  // SUBTOK_CORPUS_H_
