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


// Reference implementations used only by tests. They are deliberately
// naive and share no code with the library beyond plain data types.

#ifndef TYPOSTRIKE_TESTS_TESTING_ORACLES_H_
#define TYPOSTRIKE_TESTS_TESTING_ORACLES_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "typostrike/classifier.h"
#include "typostrike/corpus.h"
#include "typostrike/perturbation.h"

namespace typostrike::testing {

// Scores every retained word of an ASCII, space-separated corpus by
// recounting from scratch: drop stop words, drop words below min_freq,
// then evaluate the one-vs-rest smoothed log ratio for each class.
std::map<std::string, std::vector<double>> BruteForceScores(
    const std::vector<std::pair<std::string, int>>& samples, int num_classes,
    const std::set<std::string>& stopwords, int min_freq);

// Optimal string alignment distance (restricted Damerau-Levenshtein).
int OsaDistance(std::u32string_view a, std::u32string_view b);

// Number of legal single edits of `word` for the character kinds in
// `kinds` (whitespace kinds are ignored). Substitution uses `neighbors`.
int64_t CountCharEdits(std::u32string_view word, const KindSet& kinds,
                       const std::map<char32_t, std::u32string>& neighbors);

struct ReviewOptions {
  int min_own = 4;
  int max_own = 6;
  int min_opposite = 1;
  int max_opposite = 2;
  int min_filler = 6;
  int max_filler = 12;
};

// Binary sentiment reviews built from disjoint positive, negative and
// neutral word lists. Classes are ["neg", "pos"].
LabeledCorpus SyntheticReviews(size_t n, uint64_t seed,
                               const ReviewOptions& options = {});

// Two-class victim whose belief in class 0 grows with the number of intact
// occurrences of `keyword`: p0 = min(0.99, base + step * count). Words are
// split on ASCII spaces only.
class KeywordClassifier : public Classifier {
 public:
  explicit KeywordClassifier(std::string keyword, double base = 0.3,
                             double step = 0.3)
      : keyword_(std::move(keyword)), base_(base), step_(step) {}

  absl::StatusOr<std::vector<ClassDistribution>> Predict(
      std::span<const std::string> texts) const override;
  std::vector<std::string> class_names() const override {
    return {"pos", "neg"};
  }

 private:
  std::string keyword_;
  double base_;
  double step_;
};

// Always fails with Unavailable.
class FailingClassifier : public Classifier {
 public:
  absl::StatusOr<std::vector<ClassDistribution>> Predict(
      std::span<const std::string>) const override {
    return absl::UnavailableError("victim is down");
  }
  std::vector<std::string> class_names() const override { return {"a", "b"}; }
};

}  // namespace typostrike::testing

#endif  // TYPOSTRIKE_TESTS_TESTING_ORACLES_H_
