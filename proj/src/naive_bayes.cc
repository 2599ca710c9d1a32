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

#include "typostrike/naive_bayes.h"

#include <cmath>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "typostrike/text.h"

namespace typostrike {

using json = nlohmann::json;

NaiveBayesModel::NaiveBayesModel(std::vector<std::string> class_names,
                                 std::vector<int64_t> doc_counts,
                                 Counts token_counts)
    : class_names_(std::move(class_names)),
      doc_counts_(std::move(doc_counts)),
      token_counts_(std::move(token_counts)) {
  const size_t k = class_names_.size();
  int64_t docs = 0;
  for (const int64_t d : doc_counts_) docs += d;
  std::vector<int64_t> totals(k, 0);
  for (const auto& [word, per_class] : token_counts_) {
    for (size_t c = 0; c < k; ++c) totals[c] += per_class[c];
  }
  const auto v = static_cast<double>(token_counts_.size());
  log_priors_.resize(k);
  for (size_t c = 0; c < k; ++c) {
    log_priors_[c] = std::log(static_cast<double>(doc_counts_[c]) /
                              static_cast<double>(docs));
  }
  for (const auto& [word, per_class] : token_counts_) {
    std::vector<double>& row = log_likelihoods_[word];
    row.resize(k);
    for (size_t c = 0; c < k; ++c) {
      row[c] = std::log((static_cast<double>(per_class[c]) + 1.0) /
                        (static_cast<double>(totals[c]) + v));
    }
  }
}

absl::StatusOr<NaiveBayesModel> NaiveBayesModel::Train(
    const LabeledCorpus& corpus) {
  if (absl::Status s = corpus.CheckEveryClassPresent(); !s.ok()) return s;
  const int k = corpus.num_classes();
  std::vector<int64_t> doc_counts(k, 0);
  Counts counts;
  for (const Sample& sample : corpus.samples()) {
    ++doc_counts[sample.label];
    for (const WordSpan& word : TokenizeWords(DecodeUtf8(sample.text))) {
      std::string key = ScoringKey(word.text);
      if (key.empty()) continue;
      auto [it, inserted] = counts.try_emplace(std::move(key));
      if (inserted) it->second.assign(k, 0);
      ++it->second[sample.label];
    }
  }
  if (counts.empty()) {
    return absl::FailedPreconditionError("training corpus has no words");
  }
  return NaiveBayesModel(corpus.class_names(), std::move(doc_counts),
                         std::move(counts));
}

std::string NaiveBayesModel::ToJson() const {
  json tokens = json::object();
  for (const auto& [word, per_class] : token_counts_) tokens[word] = per_class;
  const json doc = {{"classes", class_names_},
                    {"doc_counts", doc_counts_},
                    {"token_counts", std::move(tokens)}};
  return doc.dump() + "\n";
}

absl::StatusOr<NaiveBayesModel> NaiveBayesModel::FromJson(
    std::string_view text) {
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("model file is not a JSON object");
  }
  try {
    auto classes = doc.at("classes").get<std::vector<std::string>>();
    auto doc_counts = doc.at("doc_counts").get<std::vector<int64_t>>();
    if (classes.size() < 2 || doc_counts.size() != classes.size()) {
      return absl::InvalidArgumentError("model classes/doc_counts mismatch");
    }
    for (const int64_t d : doc_counts) {
      if (d <= 0) return absl::InvalidArgumentError("class without documents");
    }
    Counts counts;
    for (const auto& [word, per_class] : doc.at("token_counts").items()) {
      auto row = per_class.get<std::vector<int64_t>>();
      if (row.size() != classes.size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("count row for '", word, "' has the wrong arity"));
      }
      counts.emplace(word, std::move(row));
    }
    if (counts.empty()) return absl::InvalidArgumentError("empty vocabulary");
    return NaiveBayesModel(std::move(classes), std::move(doc_counts),
                           std::move(counts));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed model file: ", e.what()));
  }
}

absl::StatusOr<NaiveBayesModel> NaiveBayesModel::Load(const std::string& path) {
  absl::StatusOr<std::string> contents = ReadFile(path);
  if (!contents.ok()) return contents.status();
  return FromJson(*contents);
}

std::optional<double> NaiveBayesModel::LogLikelihood(std::string_view word,
                                                     int label) const {
  const auto it = log_likelihoods_.find(word);
  if (it == log_likelihoods_.end()) return std::nullopt;
  return it->second.at(label);
}

std::vector<double> NaiveBayesModel::LogScores(const std::string& text) const {
  std::vector<double> scores = log_priors_;
  for (const WordSpan& word : TokenizeWords(DecodeUtf8(text))) {
    const auto it = log_likelihoods_.find(ScoringKey(word.text));
    if (it == log_likelihoods_.end()) continue;
    for (size_t c = 0; c < scores.size(); ++c) scores[c] += it->second[c];
  }
  return scores;
}

absl::StatusOr<std::vector<ClassDistribution>> NaiveBayesModel::Predict(
    std::span<const std::string> texts) const {
  if (!initialized()) {
    return absl::FailedPreconditionError("model is not trained");
  }
  if (texts.empty()) return absl::InvalidArgumentError("no texts to predict");
  std::vector<ClassDistribution> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    out.push_back(ClassDistribution::FromLogScores(LogScores(text)));
  }
  return out;
}

}  // namespace typostrike
