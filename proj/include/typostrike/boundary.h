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

// Character-level subword boundary labels for training a tokenizer that
// mimics WordPiece.
//
// A character is a boundary when it is the last character of a WordPiece
// piece. When a labeled text is perturbed the labels are carried over rather
// than recomputed:
//
//   insert      new character is not a boundary; later labels shift right
//   delete      a deleted boundary moves to the preceding character, unless
//               that one is already a boundary, in which case the token is
//               dropped and token_count falls by one
//   swap        labels stay at their positions
//   substitute  labels unchanged
//   split       the character before the new space becomes a boundary
//   merge       whitespace removed; every label kept
//
// Relabeled output is intentionally not the same as labeling the perturbed
// text from scratch.

#ifndef TYPOSTRIKE_BOUNDARY_H_
#define TYPOSTRIKE_BOUNDARY_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "typostrike/perturbation.h"

namespace typostrike {

class WordPieceVocab {
 public:
  static constexpr size_t kMaxInputCharsPerWord = 100;

  WordPieceVocab() = default;
  WordPieceVocab(const std::vector<std::string>& tokens,
                 std::string unk_token = "[UNK]");

  // One token per line, BERT vocab.txt style.
  static absl::StatusOr<WordPieceVocab> Parse(std::string_view contents,
                                              std::string unk_token = "[UNK]");
  static absl::StatusOr<WordPieceVocab> Load(const std::string& path,
                                             std::string unk_token = "[UNK]");

  bool Contains(std::u32string_view token) const;
  const std::u32string& unk_token() const { return unk_token_; }
  size_t size() const { return tokens_.size(); }

  // Fails unless every character of `alphabet` is present both as a word
  // start and as a "##" continuation, so no word over it maps to unk.
  absl::Status CheckCovers(std::u32string_view alphabet) const;

 private:
  std::unordered_set<std::u32string> tokens_;
  std::u32string unk_token_;
};

// Greedy longest-match-first. Continuation pieces carry a "##" prefix. A
// word that cannot be fully segmented, or is longer than
// kMaxInputCharsPerWord, becomes a single unk token.
std::vector<std::u32string> WordPieceTokenize(std::u32string_view word,
                                              const WordPieceVocab& vocab);

struct BoundaryLabeledText {
  std::u32string chars;
  std::vector<bool> boundary;
  int token_count = 0;

  std::vector<size_t> BoundaryIndices() const;
  // Checks the structural invariants: one flag per character, no boundary
  // on whitespace, every word ends on a boundary, token_count matches.
  absl::Status Validate() const;
};

BoundaryLabeledText LabelBoundaries(std::u32string_view text,
                                    const WordPieceVocab& vocab);

// Applies `p` to `labeled.chars` and carries the labels over as described
// above. InvalidArgument if `p` is illegal for the text.
absl::StatusOr<BoundaryLabeledText> PerturbWithRelabel(
    const BoundaryLabeledText& labeled, const Perturbation& p,
    const QwertyMap& qwerty = QwertyMap::Default());

struct AugmentationPolicy {
  // Chance that a sentence is perturbed at all.
  double probability = 0.5;
  // Edits attempted per perturbed sentence, each on a different word.
  int edits_per_sentence = 1;
  // Relative weight per kind; kinds with weight 0 are never drawn.
  std::map<PerturbationKind, double> kind_weights = {
      {PerturbationKind::kInsertChar, 1.0},
      {PerturbationKind::kDeleteChar, 1.0},
      {PerturbationKind::kSwapAdjacent, 1.0},
      {PerturbationKind::kSplitWord, 1.0},
      {PerturbationKind::kMergeWords, 1.0},
  };

  absl::Status Validate() const;
};

struct AugmentedRecord {
  BoundaryLabeledText labeled;
  // In application order. Word indices refer to the text as it was when
  // each edit was applied.
  std::vector<Perturbation> perturbations;
};

// `{"chars": "...", "boundaries": [i0, i1, ...], "perturbations": [...]}`.
nlohmann::json RecordToJson(const AugmentedRecord& record);

// Labels one normalized sentence and perturbs it according to `policy`.
AugmentedRecord AugmentSentence(std::u32string_view text,
                                const WordPieceVocab& vocab,
                                const AugmentationPolicy& policy,
                                std::mt19937_64& rng,
                                const QwertyMap& qwerty = QwertyMap::Default());

// Random stream for sentence `index` under `seed`. Independent of how the
// work is split across threads.
std::mt19937_64 SentenceRng(uint64_t seed, uint64_t index);

// Normalizes each text and writes one JSON line per text to `out`, in input
// order. Output depends only on the inputs and `seed`, not on `jobs`.
absl::Status EmitAugmentedDataset(std::span<const std::string> texts,
                                  const WordPieceVocab& vocab,
                                  const AugmentationPolicy& policy,
                                  uint64_t seed, std::ostream& out,
                                  int jobs = 1);

}  // namespace typostrike

#endif  // TYPOSTRIKE_BOUNDARY_H_
