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

#ifndef TYPOSTRIKE_CLASSIFIER_H_
#define TYPOSTRIKE_CLASSIFIER_H_

#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace typostrike {

// A probability vector over classes plus its argmax. Ties go to the lowest
// class index.
struct ClassDistribution {
  std::vector<double> probs;
  int predicted = 0;

  // Normalizes `probs` to sum to one. Fails on negative or non-finite
  // entries, or an all-zero vector.
  static absl::StatusOr<ClassDistribution> FromProbabilities(
      std::vector<double> probs);
  // Softmax of unnormalized log scores.
  static ClassDistribution FromLogScores(const std::vector<double>& logits);

  double confidence(int label) const { return probs.at(label); }
};

// The black-box victim. Implementations must be safe for concurrent Predict()
// calls.
class Classifier {
 public:
  virtual ~Classifier() = default;

  // One distribution per text, in input order. `texts` must be non-empty.
  virtual absl::StatusOr<std::vector<ClassDistribution>> Predict(
      std::span<const std::string> texts) const = 0;
  virtual std::vector<std::string> class_names() const = 0;

  absl::StatusOr<ClassDistribution> PredictOne(const std::string& text) const;
};

// Counts victim queries. One text is one query, so a batch of k costs k.
// Thread-safe.
class QueryLedger {
 public:
  explicit QueryLedger(std::optional<int64_t> budget_limit = std::nullopt)
      : budget_limit_(budget_limit) {}

  QueryLedger(const QueryLedger&) = delete;
  QueryLedger& operator=(const QueryLedger&) = delete;

  // Adds `n` queries to the total and to the current sample. Fails with
  // ResourceExhausted, charging nothing, if the total would pass the limit.
  absl::Status Charge(int64_t n);

  // Two-phase form of Charge() for calls that may fail in transit: Reserve()
  // holds budget for `n` queries, then exactly one of Commit() or Release()
  // settles the reservation. Only committed queries are counted.
  absl::Status Reserve(int64_t n);
  void Commit(int64_t n);
  void Release(int64_t n);
  // Opens a new per-sample slot; later charges land there.
  void BeginSample();

  int64_t total() const;
  std::vector<int64_t> per_sample() const;
  std::optional<int64_t> budget_limit() const { return budget_limit_; }

 private:
  const std::optional<int64_t> budget_limit_;
  mutable std::mutex mu_;
  int64_t total_ = 0;
  int64_t reserved_ = 0;
  std::vector<int64_t> per_sample_;
};

// Charges every successfully predicted text to a ledger. Calls that would
// pass the ledger's budget are rejected without reaching the wrapped
// classifier. Neither is owned.
class CountingClassifier : public Classifier {
 public:
  CountingClassifier(const Classifier& inner, QueryLedger& ledger)
      : inner_(inner), ledger_(ledger) {}

  absl::StatusOr<std::vector<ClassDistribution>> Predict(
      std::span<const std::string> texts) const override;
  std::vector<std::string> class_names() const override {
    return inner_.class_names();
  }

  QueryLedger& ledger() const { return ledger_; }

 private:
  const Classifier& inner_;
  QueryLedger& ledger_;
};

}  // namespace typostrike

#endif  // TYPOSTRIKE_CLASSIFIER_H_
