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

#include "typostrike/word_scoring.h"

#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "string_view_compat.h"

namespace typostrike {

using json = nlohmann::json;

absl::StatusOr<ClassFrequencyTable> ClassFrequencyTable::FromCounts(
    Counts counts, std::vector<int64_t> totals, int64_t vocab_size) {
  if (totals.size() < 2) {
    return absl::InvalidArgumentError("need at least two classes");
  }
  if (vocab_size < 1) {
    return absl::InvalidArgumentError("vocabulary size must be at least 1");
  }
  for (const int64_t n : totals) {
    if (n < 0) return absl::InvalidArgumentError("negative class total");
  }
  for (const auto& [word, per_class] : counts) {
    if (per_class.size() != totals.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("counts for '", word, "' have the wrong arity"));
    }
    for (const int64_t f : per_class) {
      if (f < 0) return absl::InvalidArgumentError("negative frequency");
    }
  }
  return ClassFrequencyTable(std::move(counts), std::move(totals), vocab_size);
}

bool ClassFrequencyTable::Contains(std::string_view word) const {
  return counts_.find(word) != counts_.end();
}

int64_t ClassFrequencyTable::Frequency(std::string_view word,
                                       int label) const {
  const auto it = counts_.find(word);
  return it == counts_.end() ? 0 : it->second.at(label);
}

absl::StatusOr<ClassFrequencyTable> CountFrequencies(
    const LabeledCorpus& corpus, const StopWordSet& stopwords, int min_freq) {
  if (min_freq < 1) {
    return absl::InvalidArgumentError("min_freq must be at least 1");
  }
  const int num_classes = corpus.num_classes();
  ClassFrequencyTable::Counts counts;
  for (const Sample& sample : corpus.samples()) {
    for (const WordSpan& word : TokenizeWords(DecodeUtf8(sample.text))) {
      std::string key = ScoringKey(word.text);
      if (key.empty() || stopwords.Contains(key)) continue;
      auto [it, inserted] = counts.try_emplace(std::move(key));
      if (inserted) it->second.assign(num_classes, 0);
      ++it->second[sample.label];
    }
  }

  std::vector<int64_t> totals(num_classes, 0);
  for (auto it = counts.begin(); it != counts.end();) {
    const std::vector<int64_t>& per_class = it->second;
    if (std::accumulate(per_class.begin(), per_class.end(), int64_t{0}) <
        min_freq) {
      it = counts.erase(it);
      continue;
    }
    for (int c = 0; c < num_classes; ++c) totals[c] += per_class[c];
    ++it;
  }
  for (int c = 0; c < num_classes; ++c) {
    if (totals[c] == 0) {
      return absl::FailedPreconditionError(
          absl::StrCat("class '", corpus.class_names()[c],
                       "' has no tokens left after filtering"));
    }
  }
  const auto vocab_size = static_cast<int64_t>(counts.size());
  return ClassFrequencyTable::FromCounts(std::move(counts), std::move(totals),
                                         vocab_size);
}

absl::StatusOr<double> WordScore(std::string_view word,
                                 const ClassFrequencyTable& table,
                                 int target_class) {
  if (target_class < 0 || target_class >= table.num_classes()) {
    return absl::InvalidArgumentError(
        absl::StrCat("class ", target_class, " out of range"));
  }
  const auto it = table.counts().find(word);
  if (it == table.counts().end()) {
    return absl::NotFoundError(absl::StrCat("'", Absl(word), "' is not scored"));
  }
  const std::vector<int64_t>& freq = it->second;
  int64_t freq_rest = 0;
  int64_t total_rest = 0;
  for (int c = 0; c < table.num_classes(); ++c) {
    if (c == target_class) continue;
    freq_rest += freq[c];
    total_rest += table.TotalTokens(c);
  }
  const auto v = static_cast<double>(table.VocabularySize());
  const double p_target =
      (static_cast<double>(freq[target_class]) + 1.0) /
      (static_cast<double>(table.TotalTokens(target_class)) + v);
  const double p_rest = (static_cast<double>(freq_rest) + 1.0) /
                        (static_cast<double>(total_rest) + v);
  return std::log(p_target) - std::log(p_rest);
}

WordScoreTable::WordScoreTable(std::vector<std::string> class_names,
                               Scores scores, int min_freq,
                               std::string stopword_hash,
                               std::string corpus_fingerprint)
    : class_names_(std::move(class_names)),
      scores_(std::move(scores)),
      min_freq_(min_freq),
      stopword_hash_(std::move(stopword_hash)),
      corpus_fingerprint_(std::move(corpus_fingerprint)) {}

const std::vector<double>* WordScoreTable::Find(std::string_view word) const {
  const auto it = scores_.find(word);
  return it == scores_.end() ? nullptr : &it->second;
}

std::string WordScoreTable::ConfigHash() const {
  return Fnv1aHex(absl::StrCat("min_freq=", min_freq_,
                               ";stopwords=", stopword_hash_));
}

std::string WordScoreTable::ToJson() const {
  json scores = json::object();
  for (const auto& [word, per_class] : scores_) scores[word] = per_class;
  const json doc = {
      {"classes", class_names_},
      {"min_freq", min_freq_},
      {"stopword_hash", stopword_hash_},
      {"corpus_fingerprint", corpus_fingerprint_},
      {"config_hash", ConfigHash()},
      {"scores", std::move(scores)},
  };
  return doc.dump() + "\n";
}

absl::StatusOr<WordScoreTable> WordScoreTable::FromJson(std::string_view text) {
  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("score table is not a JSON object");
  }
  try {
    auto class_names = doc.at("classes").get<std::vector<std::string>>();
    Scores scores;
    for (const auto& [word, per_class] : doc.at("scores").items()) {
      auto values = per_class.get<std::vector<double>>();
      if (values.size() != class_names.size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("score row for '", word, "' has the wrong arity"));
      }
      scores.emplace(word, std::move(values));
    }
    return WordScoreTable(std::move(class_names), std::move(scores),
                          doc.at("min_freq").get<int>(),
                          doc.at("stopword_hash").get<std::string>(),
                          doc.value("corpus_fingerprint", std::string()));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed score table: ", e.what()));
  }
}

absl::StatusOr<WordScoreTable> WordScoreTable::Load(const std::string& path) {
  absl::StatusOr<std::string> contents = ReadFile(path);
  if (!contents.ok()) return contents.status();
  return FromJson(*contents);
}

absl::StatusOr<WordScoreTable> BuildScoreTable(const LabeledCorpus& corpus,
                                               const StopWordSet& stopwords,
                                               int min_freq) {
  absl::StatusOr<ClassFrequencyTable> table =
      CountFrequencies(corpus, stopwords, min_freq);
  if (!table.ok()) return table.status();
  WordScoreTable::Scores scores;
  for (const auto& [word, unused] : table->counts()) {
    std::vector<double>& row = scores[word];
    row.reserve(table->num_classes());
    for (int c = 0; c < table->num_classes(); ++c) {
      absl::StatusOr<double> s = WordScore(word, *table, c);
      if (!s.ok()) return s.status();
      row.push_back(*s);
    }
  }
  return WordScoreTable(corpus.class_names(), std::move(scores), min_freq,
                        stopwords.Fingerprint(), corpus.Fingerprint());
}

}  // namespace typostrike
