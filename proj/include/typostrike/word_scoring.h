// Copyright 2026 The TypoStrike Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Per-class word scores for choosing attack targets.
//
// For a word w and a class t, with every other class pooled into "rest":
//
//   score(w, t) = ln P(w | t) - ln P(w | rest)
//   P(w | t)    = (freq_t(w) + 1) / (N_t + V)
//   P(w | rest) = (freq_rest(w) + 1) / (N_rest + V)
//
// where N_t is the number of retained word tokens in class t and V is the
// number of distinct retained words in the whole corpus. Stop words and words
// rarer than `min_freq` are dropped before anything is counted, and V is
// shared by every one-vs-rest comparison so that the binary case is exactly
// antisymmetric.

#ifndef TYPOSTRIKE_WORD_SCORING_H_
#define TYPOSTRIKE_WORD_SCORING_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "typostrike/corpus.h"
#include "typostrike/text.h"

namespace typostrike {

inline constexpr int kDefaultMinFreq = 5;

class ClassFrequencyTable {
 public:
  // word -> count per class.
  using Counts = std::map<std::string, std::vector<int64_t>, std::less<>>;

  // Builds a table from explicit counts. `totals` gives N per class and may
  // exceed the sum of `counts`; `vocab_size` must be at least 1.
  static absl::StatusOr<ClassFrequencyTable> FromCounts(
      Counts counts, std::vector<int64_t> totals, int64_t vocab_size);

  int num_classes() const { return static_cast<int>(totals_.size()); }
  bool Contains(std::string_view word) const;
  // Zero for words not in the table.
  int64_t Frequency(std::string_view word, int label) const;
  int64_t TotalTokens(int label) const { return totals_.at(label); }
  int64_t VocabularySize() const { return vocab_size_; }
  const Counts& counts() const { return counts_; }
  const std::vector<int64_t>& totals() const { return totals_; }

 private:
  ClassFrequencyTable(Counts counts, std::vector<int64_t> totals,
                      int64_t vocab_size)
      : counts_(std::move(counts)),
        totals_(std::move(totals)),
        vocab_size_(vocab_size) {}

  Counts counts_;
  std::vector<int64_t> totals_;
  int64_t vocab_size_ = 0;
};

// Counts ScoringKey() forms of every word in the corpus. Fails with
// FailedPrecondition when some class retains no tokens after filtering.
absl::StatusOr<ClassFrequencyTable> CountFrequencies(
    const LabeledCorpus& corpus, const StopWordSet& stopwords, int min_freq);

// Natural-log one-vs-rest score. NotFound for words outside the table.
absl::StatusOr<double> WordScore(std::string_view word,
                                 const ClassFrequencyTable& table,
                                 int target_class);

class WordScoreTable {
 public:
  using Scores = std::map<std::string, std::vector<double>, std::less<>>;

  WordScoreTable() = default;
  WordScoreTable(std::vector<std::string> class_names, Scores scores,
                 int min_freq, std::string stopword_hash,
                 std::string corpus_fingerprint);

  // Null when the word has no score.
  const std::vector<double>* Find(std::string_view word) const;

  int num_classes() const { return static_cast<int>(class_names_.size()); }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const Scores& scores() const { return scores_; }
  int min_freq() const { return min_freq_; }
  const std::string& stopword_hash() const { return stopword_hash_; }
  const std::string& corpus_fingerprint() const { return corpus_fingerprint_; }
  // Digest of (min_freq, stopword_hash).
  std::string ConfigHash() const;

  // JSON object with `classes`, `min_freq`, `stopword_hash`,
  // `corpus_fingerprint`, `config_hash` and `scores` (word -> array).
  // Keys are sorted, so equal tables serialize to equal bytes.
  std::string ToJson() const;
  static absl::StatusOr<WordScoreTable> FromJson(std::string_view json);
  static absl::StatusOr<WordScoreTable> Load(const std::string& path);

 private:
  std::vector<std::string> class_names_;
  Scores scores_;
  int min_freq_ = kDefaultMinFreq;
  std::string stopword_hash_;
  std::string corpus_fingerprint_;
};

absl::StatusOr<WordScoreTable> BuildScoreTable(const LabeledCorpus& corpus,
                                               const StopWordSet& stopwords,
                                               int min_freq);

}  // namespace typostrike

#endif  // TYPOSTRIKE_WORD_SCORING_H_
