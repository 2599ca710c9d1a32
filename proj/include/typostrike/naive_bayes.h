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

#ifndef TYPOSTRIKE_NAIVE_BAYES_H_
#define TYPOSTRIKE_NAIVE_BAYES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "typostrike/classifier.h"
#include "typostrike/corpus.h"

namespace typostrike {

// Multinomial Naive Bayes over ScoringKey() word forms with add-one
// smoothing:
//
//   log P(c | text) ~ log prior(c) + sum_w log((freq_c(w) + 1) / (N_c + V))
//
// The vocabulary is every word seen in training (no stop words, no frequency
// cutoff). Words outside the vocabulary contribute nothing, so a text made
// only of unknown words gets the class priors back.
class NaiveBayesModel : public Classifier {
 public:
  // An uninitialized model; Predict() fails with FailedPrecondition.
  NaiveBayesModel() = default;

  static absl::StatusOr<NaiveBayesModel> Train(const LabeledCorpus& corpus);

  // Model files hold the raw counts; probabilities are re-derived on load.
  std::string ToJson() const;
  static absl::StatusOr<NaiveBayesModel> FromJson(std::string_view json);
  static absl::StatusOr<NaiveBayesModel> Load(const std::string& path);

  absl::StatusOr<std::vector<ClassDistribution>> Predict(
      std::span<const std::string> texts) const override;
  std::vector<std::string> class_names() const override {
    return class_names_;
  }

  bool initialized() const { return !class_names_.empty(); }
  double LogPrior(int label) const { return log_priors_.at(label); }
  // log P(word | label); nullopt for words outside the vocabulary.
  std::optional<double> LogLikelihood(std::string_view word, int label) const;
  size_t vocabulary_size() const { return token_counts_.size(); }

 private:
  using Counts = std::map<std::string, std::vector<int64_t>, std::less<>>;

  NaiveBayesModel(std::vector<std::string> class_names,
                  std::vector<int64_t> doc_counts, Counts token_counts);

  std::vector<double> LogScores(const std::string& text) const;

  std::vector<std::string> class_names_;
  std::vector<int64_t> doc_counts_;
  Counts token_counts_;
  std::vector<double> log_priors_;
  std::map<std::string, std::vector<double>, std::less<>> log_likelihoods_;
};

}  // namespace typostrike

#endif  // TYPOSTRIKE_NAIVE_BAYES_H_
