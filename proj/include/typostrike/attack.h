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

// Black-box misspelling attacks.
//
// WordScoreAttack ranks the words of a text by their score for the class the
// victim currently predicts and perturbs them in that order. Each targeted
// word gets up to `max_tries_per_token` distinct random edits, each followed
// by one victim query on the whole text, and the attack stops at the first
// query whose prediction differs from the original class. When a word's tries
// run out:
//
//   * normal mode keeps the try that lowered the original class's
//     probability the most, provided it is strictly below the probability
//     before this word, and moves on with it in place;
//   * forgetful mode restores the word, so a successful attack always
//     carries exactly one edit.
//
// A text therefore costs at most max_tokens_to_perturb * max_tries_per_token
// queries. The initial prediction is supplied by the caller and is not
// charged to that budget.
//
// ExhaustiveAttack tries every single edit of every word in order and stops
// at the first flip.

#ifndef TYPOSTRIKE_ATTACK_H_
#define TYPOSTRIKE_ATTACK_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "typostrike/classifier.h"
#include "typostrike/perturbation.h"
#include "typostrike/text.h"
#include "typostrike/word_scoring.h"

namespace typostrike {

struct AttackBudget {
  int max_tokens_to_perturb = 10;
  int max_tries_per_token = 4;

  int64_t MaxQueries() const {
    return int64_t{max_tokens_to_perturb} * max_tries_per_token;
  }
};

enum class AttackMode { kNormal, kForgetful, kExhaustive };

std::string_view ModeName(AttackMode mode);
absl::StatusOr<AttackMode> ParseMode(std::string_view name);

struct TargetEntry {
  size_t word_index = 0;
  std::string word;  // Scoring key of the word.
  double score = 0.0;

  friend bool operator==(const TargetEntry&, const TargetEntry&) = default;
};

// Scored words of `text`, highest score for `predicted_class` first, ties by
// position, truncated to the budget. Repeated words are separate entries;
// stop words and unscored words are left out.
std::vector<TargetEntry> PlanTargets(std::u32string_view text,
                                     const WordScoreTable& scores,
                                     int predicted_class,
                                     const AttackBudget& budget,
                                     const StopWordSet& stopwords);

struct AttackStep {
  size_t word_index = 0;  // Into the original text's words.
  std::string word;       // Surface form before the edit.
  Perturbation perturbation;
  double confidence = 0.0;  // Original class probability after the edit.
  int predicted = 0;
  bool retained = false;  // Part of the final text.
};

struct AttackOutcome {
  std::string original_text;
  std::string final_text;
  int original_class = 0;
  int final_class = 0;
  bool success = false;
  int64_t queries_used = 0;
  std::vector<AttackStep> steps;
  AttackMode mode = AttackMode::kNormal;
};

void to_json(nlohmann::json& j, const AttackStep& step);
void from_json(const nlohmann::json& j, AttackStep& step);
void to_json(nlohmann::json& j, const AttackOutcome& outcome);
void from_json(const nlohmann::json& j, AttackOutcome& outcome);

struct AttackOptions {
  AttackBudget budget;
  KindSet kinds = DefaultAttackKinds();
  AttackMode mode = AttackMode::kNormal;
  const StopWordSet* stopwords = &StopWordSet::English();
  const QwertyMap* qwerty = &QwertyMap::Default();
};

// `original` must be the victim's prediction for `text`. Running out of
// ledger budget ends the attack unsuccessfully; other victim errors are
// returned.
absl::StatusOr<AttackOutcome> WordScoreAttack(std::string_view text,
                                              const ClassDistribution& original,
                                              const Classifier& victim,
                                              const WordScoreTable& scores,
                                              const AttackOptions& options,
                                              std::mt19937_64& rng);

absl::StatusOr<AttackOutcome> ExhaustiveAttack(
    std::string_view text, const ClassDistribution& original,
    const Classifier& victim, const KindSet& kinds = ExhaustiveKinds(),
    const QwertyMap& qwerty = QwertyMap::Default());

std::vector<Perturbation> RetainedPerturbations(const AttackOutcome& outcome);

// Re-applies the retained steps to the original text.
absl::StatusOr<std::string> ReplayOutcome(
    const AttackOutcome& outcome,
    const QwertyMap& qwerty = QwertyMap::Default());

}  // namespace typostrike

#endif  // TYPOSTRIKE_ATTACK_H_
