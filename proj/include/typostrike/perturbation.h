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

// Single-edit misspellings.
//
// Character edits (insert, delete, swap, keyboard substitution) only touch
// internal letters: the first and last characters of a word never change and
// the edited character must be a letter. Whitespace edits split a long word
// in two or fuse a word with its right neighbor. Every perturbation edits a
// single word (a merge edits the pair it fuses).
//
//   kind                 min word length   char_offset range
//   kInsertChar          3                 [1, len-2], lands before offset
//   kDeleteChar          3                 [1, len-2]
//   kSwapAdjacent        4                 [1, len-3], swaps offset, offset+1
//   kSubstituteKeyboard  3                 [1, len-2]
//   kSplitWord           6                 [1, len-1], space before offset
//   kMergeWords          -                 always 0; needs a right neighbor

#ifndef TYPOSTRIKE_PERTURBATION_H_
#define TYPOSTRIKE_PERTURBATION_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "typostrike/text.h"

namespace typostrike {

enum class PerturbationKind {
  kInsertChar,
  kDeleteChar,
  kSwapAdjacent,
  kSubstituteKeyboard,
  kSplitWord,
  kMergeWords,
};

using KindSet = std::set<PerturbationKind>;

// "insert", "delete", "swap", "substitute", "split", "merge".
std::string_view KindName(PerturbationKind kind);
absl::StatusOr<PerturbationKind> ParseKind(std::string_view name);
// Comma separated names. Also accepts the group names "chars" (insert,
// delete, swap), "whitespace" (split, merge) and "all".
absl::StatusOr<KindSet> ParseKinds(std::string_view names);
std::string FormatKinds(const KindSet& kinds);
bool IsWhitespaceKind(PerturbationKind kind);

// insert, delete, swap, split, merge.
KindSet DefaultAttackKinds();
// insert, delete, swap, substitute.
KindSet ExhaustiveKinds();

struct Perturbation {
  PerturbationKind kind = PerturbationKind::kInsertChar;
  size_t word_index = 0;
  size_t char_offset = 0;
  std::optional<char32_t> payload;  // Insert and substitute only.

  friend auto operator<=>(const Perturbation&, const Perturbation&) = default;
};

void to_json(nlohmann::json& j, const Perturbation& p);
void from_json(const nlohmann::json& j, Perturbation& p);

// Letter adjacency on a physical keyboard. Symmetric by construction check.
class QwertyMap {
 public:
  static const QwertyMap& Default();
  // Lines of the form `s: adewxz`; `#` starts a comment.
  static absl::StatusOr<QwertyMap> Parse(std::string_view contents);
  static absl::StatusOr<QwertyMap> Load(const std::string& path);

  // Sorted neighbors; empty for characters not on the layout.
  const std::u32string& Neighbors(char32_t c) const;
  const std::map<char32_t, std::u32string>& adjacency() const {
    return adjacency_;
  }

 private:
  std::map<char32_t, std::u32string> adjacency_;
};

// Every legal perturbation of the requested kinds for one word, ordered by
// (kind, char_offset, payload). Empty for an out-of-range word index.
std::vector<Perturbation> ApplicablePerturbations(
    std::u32string_view text, size_t word_index, const KindSet& kinds,
    const QwertyMap& qwerty = QwertyMap::Default());

// InvalidArgument when `p` is not legal for `text`.
absl::Status CheckLegal(std::u32string_view text, const Perturbation& p,
                        const QwertyMap& qwerty = QwertyMap::Default());

// Applies one edit. Everything outside the edited word (or, for a merge, the
// removed whitespace gap) is left untouched. A split inserts one space.
absl::StatusOr<std::u32string> Apply(
    std::u32string_view text, const Perturbation& p,
    const QwertyMap& qwerty = QwertyMap::Default());

// Applies several edits whose word indices all refer to `text`. Each word may
// be edited at most once and a merge also claims its right neighbor. Edits
// are applied from the rightmost word leftward so indices stay valid.
absl::StatusOr<std::u32string> ApplyAll(
    std::u32string_view text, std::vector<Perturbation> edits,
    const QwertyMap& qwerty = QwertyMap::Default());

// Uniform draw from ApplicablePerturbations() minus `exclude`. Nullopt when
// nothing is left.
std::optional<Perturbation> SamplePerturbation(
    std::u32string_view text, size_t word_index, const KindSet& kinds,
    std::mt19937_64& rng, const std::set<Perturbation>& exclude,
    const QwertyMap& qwerty = QwertyMap::Default());

}  // namespace typostrike

#endif  // TYPOSTRIKE_PERTURBATION_H_
