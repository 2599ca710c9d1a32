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

// Budget-grid attack experiments.
//
// A run samples the test set once, asks the victim for its prediction on
// every sampled text, then for every (mode, max_tokens, max_tries) cell
// attacks each text the victim got right. Cells are independent. Every
// sample draws its perturbations from a stream seeded by (seed, sample
// index) alone, so cells that differ only in budget replay the same attack
// prefix.
//
// Per cell:
//   orig_acc     correct / sampled
//   final_acc    (correct - flipped) / sampled
//   success_pct  flipped / correct
//   avg_queries  attack queries / correct
// plus success_pct_all = flipped / sampled as an auxiliary column. The
// initial predictions are counted separately in `initial_queries`.

#ifndef TYPOSTRIKE_EXPERIMENT_H_
#define TYPOSTRIKE_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "typostrike/attack.h"
#include "typostrike/classifier.h"
#include "typostrike/corpus.h"
#include "typostrike/perturbation.h"
#include "typostrike/text.h"
#include "typostrike/word_scoring.h"

namespace typostrike {

inline constexpr uint64_t kDefaultSeed = 20230601;

// Uniform sample without replacement, kept in corpus order.
absl::StatusOr<LabeledCorpus> SampleTestSet(const LabeledCorpus& corpus,
                                            size_t n, uint64_t seed);

struct ExperimentConfig {
  std::string train_corpus;
  std::string test_corpus;
  // Score table file; built from the training corpus when empty.
  std::string scores;
  // Stop-word file; the built-in English list when empty.
  std::string stopwords;
  int min_freq = kDefaultMinFreq;
  // Remote victim; wins over `victim_model` when set.
  std::string victim_url;
  // Naive Bayes model file; trained on the training corpus when empty.
  std::string victim_model;
  std::vector<int> max_tokens = {10};
  std::vector<int> max_tries = {4};
  KindSet kinds = DefaultAttackKinds();
  KindSet exhaustive_kinds = ExhaustiveKinds();
  std::vector<AttackMode> modes = {AttackMode::kNormal};
  size_t sample_size = 500;
  uint64_t seed = kDefaultSeed;
  int jobs = 1;
  // Reports and per-cell checkpoints go here when set.
  std::string output_dir;

  absl::Status Validate() const;
  // Everything that affects results; excludes jobs and output_dir.
  nlohmann::json ToJson() const;
  std::string Hash() const;
};

struct CellResult {
  AttackMode mode = AttackMode::kNormal;
  // Both 0 for the exhaustive mode, which has no budget.
  int max_tokens = 0;
  int max_tries = 0;
  int64_t sampled = 0;
  int64_t correct = 0;
  int64_t flipped = 0;
  int64_t queries = 0;

  double orig_acc() const;
  double final_acc() const;
  double success_rate() const;
  double success_rate_all() const;
  double avg_queries() const;
};

void to_json(nlohmann::json& j, const CellResult& cell);
void from_json(const nlohmann::json& j, CellResult& cell);

struct ExperimentReport {
  std::string config_hash;
  uint64_t seed = 0;
  int64_t sample_size = 0;
  int64_t initial_queries = 0;
  std::vector<CellResult> cells;
  // Empty when every cell completed.
  std::string failure;
};

// Inputs shared by every cell of a run.
struct CellInputs {
  const std::vector<Sample>* samples = nullptr;  // Normalized texts.
  const std::vector<ClassDistribution>* initial = nullptr;
  const Classifier* victim = nullptr;
  const WordScoreTable* scores = nullptr;
  const StopWordSet* stopwords = &StopWordSet::English();
  uint64_t seed = kDefaultSeed;
  int jobs = 1;
};

struct CellSpec {
  AttackMode mode = AttackMode::kNormal;
  AttackBudget budget;
  KindSet kinds = DefaultAttackKinds();
};

// Attacks every originally-correct sample once. Each sample gets its own
// ledger; `queries` is their sum.
absl::StatusOr<CellResult> RunCell(const CellInputs& inputs,
                                   const CellSpec& spec,
                                   std::vector<AttackOutcome>* outcomes =
                                       nullptr);

// The stream used for sample `index`.
std::mt19937_64 SampleRng(uint64_t seed, uint64_t index);

// The cells a config expands to, in report order: modes in config order,
// then max_tokens, then max_tries. Exhaustive contributes one cell.
std::vector<CellSpec> ExpandGrid(const ExperimentConfig& config);

// Loads everything named by `config`, runs the grid and, when output_dir is
// set, writes report.{json,csv,md} there. Completed cells are checkpointed
// and skipped on a rerun with the same config. A victim failure stops the
// run and is recorded in `failure`; the cells finished so far are kept.
absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config);

// Runs the grid against an already-built victim and score table.
absl::StatusOr<ExperimentReport> RunGrid(const ExperimentConfig& config,
                                         const LabeledCorpus& test_sample,
                                         const Classifier& victim,
                                         const WordScoreTable& scores,
                                         const StopWordSet& stopwords);

enum class ReportFormat { kCsv, kJson, kMarkdown };

// Columns: mode, max_tokens, max_tries, orig_acc, final_acc, success_pct,
// avg_queries, success_pct_all. Accuracies and rates are percentages; floats
// have four decimals.
std::string RenderReport(const ExperimentReport& report, ReportFormat format);

absl::Status WriteReports(const ExperimentReport& report,
                          const std::string& output_dir);

}  // namespace typostrike

#endif  // TYPOSTRIKE_EXPERIMENT_H_
