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

#include "typostrike/attack.h"

#include <algorithm>
#include <optional>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "string_view_compat.h"

namespace typostrike {
namespace {

using json = nlohmann::json;

struct Query {
  ClassDistribution dist;
  bool out_of_budget = false;
};

absl::StatusOr<Query> Ask(const Classifier& victim, const std::string& text) {
  absl::StatusOr<ClassDistribution> dist = victim.PredictOne(text);
  if (dist.ok()) return Query{*std::move(dist), false};
  if (absl::IsResourceExhausted(dist.status())) return Query{{}, true};
  return dist.status();
}

}  // namespace

std::string_view ModeName(AttackMode mode) {
  switch (mode) {
    case AttackMode::kNormal:
      return "normal";
    case AttackMode::kForgetful:
      return "forgetful";
    case AttackMode::kExhaustive:
      return "exhaustive";
  }
  return "unknown";
}

absl::StatusOr<AttackMode> ParseMode(std::string_view name) {
  for (const AttackMode mode :
       {AttackMode::kNormal, AttackMode::kForgetful, AttackMode::kExhaustive}) {
    if (ModeName(mode) == name) return mode;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown attack mode '", Absl(name), "'"));
}

std::vector<TargetEntry> PlanTargets(std::u32string_view text,
                                     const WordScoreTable& scores,
                                     int predicted_class,
                                     const AttackBudget& budget,
                                     const StopWordSet& stopwords) {
  std::vector<TargetEntry> plan;
  if (predicted_class < 0 || predicted_class >= scores.num_classes()) {
    return plan;
  }
  const std::vector<WordSpan> words = TokenizeWords(text);
  for (size_t i = 0; i < words.size(); ++i) {
    std::string key = ScoringKey(words[i].text);
    if (key.empty() || stopwords.Contains(key)) continue;
    const std::vector<double>* row = scores.Find(key);
    if (row == nullptr) continue;
    const double score = (*row)[predicted_class];
    plan.push_back(TargetEntry{i, std::move(key), score});
  }
  std::stable_sort(plan.begin(), plan.end(),
                   [](const TargetEntry& a, const TargetEntry& b) {
                     return a.score > b.score;
                   });
  const auto limit =
      static_cast<size_t>(std::max(0, budget.max_tokens_to_perturb));
  if (plan.size() > limit) plan.resize(limit);
  return plan;
}

absl::StatusOr<AttackOutcome> WordScoreAttack(std::string_view text,
                                              const ClassDistribution& original,
                                              const Classifier& victim,
                                              const WordScoreTable& scores,
                                              const AttackOptions& options,
                                              std::mt19937_64& rng) {
  if (options.mode == AttackMode::kExhaustive) {
    return absl::InvalidArgumentError(
        "use ExhaustiveAttack for the exhaustive mode");
  }
  if (options.budget.max_tokens_to_perturb < 1 ||
      options.budget.max_tries_per_token < 1) {
    return absl::InvalidArgumentError("budget values must be at least 1");
  }
  const int target = original.predicted;
  const std::u32string source = DecodeUtf8(text);
  const std::vector<WordSpan> words = TokenizeWords(source);

  AttackOutcome outcome;
  outcome.original_text = std::string(text);
  outcome.final_text = outcome.original_text;
  outcome.original_class = target;
  outcome.final_class = target;
  outcome.mode = options.mode;

  std::vector<Perturbation> retained;
  std::vector<bool> touched(words.size(), false);
  double current_confidence = original.confidence(target);

  auto finish = [&]() -> absl::StatusOr<AttackOutcome> {
    absl::StatusOr<std::u32string> final_text =
        ApplyAll(source, retained, *options.qwerty);
    if (!final_text.ok()) return final_text.status();
    outcome.final_text = EncodeUtf8(*final_text);
    return outcome;
  };

  for (const TargetEntry& entry :
       PlanTargets(source, scores, target, options.budget,
                   *options.stopwords)) {
    const size_t i = entry.word_index;
    if (touched[i]) continue;
    std::set<Perturbation> exclude;
    if (i + 1 < words.size() && touched[i + 1]) {
      exclude.insert({PerturbationKind::kMergeWords, i, 0, std::nullopt});
    }
    std::optional<size_t> best_step;
    double best_confidence = current_confidence;

    for (int t = 0; t < options.budget.max_tries_per_token; ++t) {
      std::optional<Perturbation> p = SamplePerturbation(
          source, i, options.kinds, rng, exclude, *options.qwerty);
      if (!p.has_value()) break;
      exclude.insert(*p);

      std::vector<Perturbation> edits = retained;
      edits.push_back(*p);
      absl::StatusOr<std::u32string> candidate =
          ApplyAll(source, std::move(edits), *options.qwerty);
      if (!candidate.ok()) return candidate.status();
      const std::string candidate_text = EncodeUtf8(*candidate);

      absl::StatusOr<Query> query = Ask(victim, candidate_text);
      if (!query.ok()) return query.status();
      if (query->out_of_budget) return finish();
      ++outcome.queries_used;

      const double confidence = query->dist.confidence(target);
      outcome.steps.push_back(AttackStep{i, EncodeUtf8(words[i].text), *p,
                                         confidence, query->dist.predicted,
                                         false});
      if (query->dist.predicted != target) {
        outcome.steps.back().retained = true;
        retained.push_back(*p);
        outcome.success = true;
        outcome.final_class = query->dist.predicted;
        outcome.final_text = candidate_text;
        return outcome;
      }
      if (confidence < best_confidence) {
        best_confidence = confidence;
        best_step = outcome.steps.size() - 1;
      }
    }

    if (options.mode == AttackMode::kNormal && best_step.has_value()) {
      AttackStep& kept = outcome.steps[*best_step];
      kept.retained = true;
      retained.push_back(kept.perturbation);
      touched[i] = true;
      if (kept.perturbation.kind == PerturbationKind::kMergeWords) {
        touched[i + 1] = true;
      }
      current_confidence = best_confidence;
    }
  }
  return finish();
}

absl::StatusOr<AttackOutcome> ExhaustiveAttack(
    std::string_view text, const ClassDistribution& original,
    const Classifier& victim, const KindSet& kinds, const QwertyMap& qwerty) {
  const int target = original.predicted;
  const std::u32string source = DecodeUtf8(text);
  const std::vector<WordSpan> words = TokenizeWords(source);

  AttackOutcome outcome;
  outcome.original_text = std::string(text);
  outcome.final_text = outcome.original_text;
  outcome.original_class = target;
  outcome.final_class = target;
  outcome.mode = AttackMode::kExhaustive;

  for (size_t i = 0; i < words.size(); ++i) {
    for (const Perturbation& p :
         ApplicablePerturbations(source, i, kinds, qwerty)) {
      absl::StatusOr<std::u32string> candidate = Apply(source, p, qwerty);
      if (!candidate.ok()) return candidate.status();
      const std::string candidate_text = EncodeUtf8(*candidate);
      absl::StatusOr<Query> query = Ask(victim, candidate_text);
      if (!query.ok()) return query.status();
      if (query->out_of_budget) return outcome;
      ++outcome.queries_used;
      const bool flipped = query->dist.predicted != target;
      outcome.steps.push_back(AttackStep{i, EncodeUtf8(words[i].text), p,
                                         query->dist.confidence(target),
                                         query->dist.predicted, flipped});
      if (flipped) {
        outcome.success = true;
        outcome.final_class = query->dist.predicted;
        outcome.final_text = candidate_text;
        return outcome;
      }
    }
  }
  return outcome;
}

std::vector<Perturbation> RetainedPerturbations(const AttackOutcome& outcome) {
  std::vector<Perturbation> out;
  for (const AttackStep& step : outcome.steps) {
    if (step.retained) out.push_back(step.perturbation);
  }
  return out;
}

absl::StatusOr<std::string> ReplayOutcome(const AttackOutcome& outcome,
                                          const QwertyMap& qwerty) {
  absl::StatusOr<std::u32string> replayed =
      ApplyAll(DecodeUtf8(outcome.original_text),
               RetainedPerturbations(outcome), qwerty);
  if (!replayed.ok()) return replayed.status();
  return EncodeUtf8(*replayed);
}

void to_json(json& j, const AttackStep& step) {
  j = json{{"word_index", step.word_index},
           {"word", step.word},
           {"perturbation", step.perturbation},
           {"confidence", step.confidence},
           {"predicted", step.predicted},
           {"retained", step.retained}};
}

void from_json(const json& j, AttackStep& step) {
  step.word_index = j.at("word_index").get<size_t>();
  step.word = j.at("word").get<std::string>();
  step.perturbation = j.at("perturbation").get<Perturbation>();
  step.confidence = j.at("confidence").get<double>();
  step.predicted = j.at("predicted").get<int>();
  step.retained = j.at("retained").get<bool>();
}

void to_json(json& j, const AttackOutcome& outcome) {
  j = json{{"original_text", outcome.original_text},
           {"final_text", outcome.final_text},
           {"original_class", outcome.original_class},
           {"final_class", outcome.final_class},
           {"success", outcome.success},
           {"queries_used", outcome.queries_used},
           {"steps", outcome.steps},
           {"mode", ModeName(outcome.mode)}};
}

void from_json(const json& j, AttackOutcome& outcome) {
  outcome.original_text = j.at("original_text").get<std::string>();
  outcome.final_text = j.at("final_text").get<std::string>();
  outcome.original_class = j.at("original_class").get<int>();
  outcome.final_class = j.at("final_class").get<int>();
  outcome.success = j.at("success").get<bool>();
  outcome.queries_used = j.at("queries_used").get<int64_t>();
  outcome.steps = j.at("steps").get<std::vector<AttackStep>>();
  absl::StatusOr<AttackMode> mode = ParseMode(j.at("mode").get<std::string>());
  if (!mode.ok()) {
    throw json::other_error::create(501, std::string(mode.status().message()),
                                    &j);
  }
  outcome.mode = *mode;
}

}  // namespace typostrike
