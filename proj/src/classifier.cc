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

#include "typostrike/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace typostrike {
namespace {

int ArgMax(const std::vector<double>& values) {
  return static_cast<int>(std::max_element(values.begin(), values.end()) -
                          values.begin());
}

}  // namespace

absl::StatusOr<ClassDistribution> ClassDistribution::FromProbabilities(
    std::vector<double> probs) {
  if (probs.empty()) return absl::InvalidArgumentError("empty distribution");
  double sum = 0.0;
  for (const double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("invalid probability ", p));
    }
    sum += p;
  }
  if (sum <= 0.0) return absl::InvalidArgumentError("probabilities sum to 0");
  for (double& p : probs) p /= sum;
  const int predicted = ArgMax(probs);
  return ClassDistribution{std::move(probs), predicted};
}

ClassDistribution ClassDistribution::FromLogScores(
    const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - top);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  // Argmax on the logits so that exact ties resolve identically however the
  // exponentials round.
  return ClassDistribution{std::move(probs), ArgMax(logits)};
}

absl::StatusOr<ClassDistribution> Classifier::PredictOne(
    const std::string& text) const {
  absl::StatusOr<std::vector<ClassDistribution>> out =
      Predict(std::span<const std::string>(&text, 1));
  if (!out.ok()) return out.status();
  if (out->size() != 1) {
    return absl::InternalError("classifier returned the wrong row count");
  }
  return std::move(out->front());
}

absl::Status QueryLedger::Charge(int64_t n) {
  if (absl::Status s = Reserve(n); !s.ok()) return s;
  Commit(n);
  return absl::OkStatus();
}

absl::Status QueryLedger::Reserve(int64_t n) {
  std::lock_guard<std::mutex> lock(mu_);
  if (budget_limit_.has_value() && total_ + reserved_ + n > *budget_limit_) {
    return absl::ResourceExhaustedError(
        absl::StrCat("query budget of ", *budget_limit_, " exhausted"));
  }
  reserved_ += n;
  return absl::OkStatus();
}

void QueryLedger::Commit(int64_t n) {
  std::lock_guard<std::mutex> lock(mu_);
  reserved_ -= n;
  if (per_sample_.empty()) per_sample_.push_back(0);
  total_ += n;
  per_sample_.back() += n;
}

void QueryLedger::Release(int64_t n) {
  std::lock_guard<std::mutex> lock(mu_);
  reserved_ -= n;
}

void QueryLedger::BeginSample() {
  std::lock_guard<std::mutex> lock(mu_);
  per_sample_.push_back(0);
}

int64_t QueryLedger::total() const {
  std::lock_guard<std::mutex> lock(mu_);
  return total_;
}

std::vector<int64_t> QueryLedger::per_sample() const {
  std::lock_guard<std::mutex> lock(mu_);
  return per_sample_;
}

absl::StatusOr<std::vector<ClassDistribution>> CountingClassifier::Predict(
    std::span<const std::string> texts) const {
  const auto n = static_cast<int64_t>(texts.size());
  if (absl::Status s = ledger_.Reserve(n); !s.ok()) return s;
  absl::StatusOr<std::vector<ClassDistribution>> out = inner_.Predict(texts);
  if (out.ok()) {
    ledger_.Commit(n);
  } else {
    ledger_.Release(n);
  }
  return out;
}

}  // namespace typostrike
