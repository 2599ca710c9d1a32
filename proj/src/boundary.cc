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

#include "typostrike/boundary.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "typostrike/text.h"
#include "string_view_compat.h"

namespace typostrike {
namespace {

using json = nlohmann::json;

constexpr std::u32string_view kContinuation = U"##";

}  // namespace

WordPieceVocab::WordPieceVocab(const std::vector<std::string>& tokens,
                               std::string unk_token)
    : unk_token_(DecodeUtf8(unk_token)) {
  for (const std::string& t : tokens) tokens_.insert(DecodeUtf8(t));
}

absl::StatusOr<WordPieceVocab> WordPieceVocab::Parse(std::string_view contents,
                                                     std::string unk_token) {
  std::vector<std::string> tokens;
  for (const absl::string_view piece : absl::StrSplit(Absl(contents), '\n')) {
    std::string_view line = Std(piece);
    line = Std(absl::StripTrailingAsciiWhitespace(Absl(line)));
    if (!line.empty()) tokens.emplace_back(line);
  }
  if (tokens.empty()) return absl::InvalidArgumentError("empty vocabulary");
  return WordPieceVocab(tokens, std::move(unk_token));
}

absl::StatusOr<WordPieceVocab> WordPieceVocab::Load(const std::string& path,
                                                    std::string unk_token) {
  absl::StatusOr<std::string> contents = ReadFile(path);
  if (!contents.ok()) return contents.status();
  return Parse(*contents, std::move(unk_token));
}

bool WordPieceVocab::Contains(std::u32string_view token) const {
  return tokens_.contains(std::u32string(token));
}

absl::Status WordPieceVocab::CheckCovers(std::u32string_view alphabet) const {
  for (const char32_t c : alphabet) {
    const std::u32string single(1, c);
    if (!Contains(single) ||
        !Contains(std::u32string(kContinuation) + single)) {
      return absl::FailedPreconditionError(
          absl::StrCat("vocabulary lacks '", EncodeUtf8(single), "' or '##",
                       EncodeUtf8(single), "'"));
    }
  }
  return absl::OkStatus();
}

std::vector<std::u32string> WordPieceTokenize(std::u32string_view word,
                                              const WordPieceVocab& vocab) {
  if (word.size() > WordPieceVocab::kMaxInputCharsPerWord) {
    return {vocab.unk_token()};
  }
  std::vector<std::u32string> pieces;
  size_t start = 0;
  while (start < word.size()) {
    std::u32string match;
    for (size_t end = word.size(); end > start; --end) {
      std::u32string candidate(word.substr(start, end - start));
      if (start > 0) candidate.insert(0, kContinuation);
      if (vocab.Contains(candidate)) {
        match = std::move(candidate);
        start = end;
        break;
      }
    }
    if (match.empty()) return {vocab.unk_token()};
    pieces.push_back(std::move(match));
  }
  return pieces;
}

std::vector<size_t> BoundaryLabeledText::BoundaryIndices() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < boundary.size(); ++i) {
    if (boundary[i]) out.push_back(i);
  }
  return out;
}

absl::Status BoundaryLabeledText::Validate() const {
  if (boundary.size() != chars.size()) {
    return absl::InternalError("one boundary flag per character required");
  }
  int count = 0;
  for (size_t i = 0; i < chars.size(); ++i) {
    if (!boundary[i]) continue;
    ++count;
    if (IsWhitespace(chars[i])) {
      return absl::InternalError(
          absl::StrCat("boundary on whitespace at ", i));
    }
  }
  if (count != token_count) {
    return absl::InternalError(absl::StrCat(
        "token_count ", token_count, " but ", count, " boundaries"));
  }
  for (const WordSpan& w : TokenizeWords(chars)) {
    if (!boundary[w.end - 1]) {
      return absl::InternalError(
          absl::StrCat("word ending at ", w.end - 1, " has no boundary"));
    }
  }
  return absl::OkStatus();
}

BoundaryLabeledText LabelBoundaries(std::u32string_view text,
                                    const WordPieceVocab& vocab) {
  BoundaryLabeledText out;
  out.chars = std::u32string(text);
  out.boundary.assign(text.size(), false);
  for (const WordSpan& word : TokenizeWords(text)) {
    size_t pos = word.start;
    bool first = true;
    for (const std::u32string& piece : WordPieceTokenize(word.text, vocab)) {
      if (piece == vocab.unk_token()) {
        pos = word.end;
      } else {
        pos += first ? piece.size() : piece.size() - kContinuation.size();
      }
      first = false;
      out.boundary[pos - 1] = true;
      ++out.token_count;
    }
  }
  return out;
}

absl::StatusOr<BoundaryLabeledText> PerturbWithRelabel(
    const BoundaryLabeledText& labeled, const Perturbation& p,
    const QwertyMap& qwerty) {
  if (labeled.boundary.size() != labeled.chars.size()) {
    return absl::InvalidArgumentError("labels do not match the text");
  }
  if (absl::Status legal = CheckLegal(labeled.chars, p, qwerty); !legal.ok()) {
    return legal;
  }
  const std::vector<WordSpan> words = TokenizeWords(labeled.chars);
  const WordSpan& word = words[p.word_index];
  const size_t at = word.start + p.char_offset;

  BoundaryLabeledText out = labeled;
  switch (p.kind) {
    case PerturbationKind::kInsertChar:
      out.chars.insert(out.chars.begin() + at, *p.payload);
      out.boundary.insert(out.boundary.begin() + at, false);
      break;
    case PerturbationKind::kDeleteChar:
      if (out.boundary[at]) {
        // `at` is internal, so its predecessor lies in the same word.
        if (out.boundary[at - 1]) {
          --out.token_count;
        } else {
          out.boundary[at - 1] = true;
        }
      }
      out.chars.erase(at, 1);
      out.boundary.erase(out.boundary.begin() + at);
      break;
    case PerturbationKind::kSwapAdjacent:
      std::swap(out.chars[at], out.chars[at + 1]);
      break;
    case PerturbationKind::kSubstituteKeyboard:
      out.chars[at] = *p.payload;
      break;
    case PerturbationKind::kSplitWord:
      if (!out.boundary[at - 1]) {
        out.boundary[at - 1] = true;
        ++out.token_count;
      }
      out.chars.insert(out.chars.begin() + at, U' ');
      out.boundary.insert(out.boundary.begin() + at, false);
      break;
    case PerturbationKind::kMergeWords: {
      const size_t gap_end = words[p.word_index + 1].start;
      out.chars.erase(word.end, gap_end - word.end);
      out.boundary.erase(out.boundary.begin() + word.end,
                         out.boundary.begin() + gap_end);
      break;
    }
  }
  return out;
}

absl::Status AugmentationPolicy::Validate() const {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    return absl::InvalidArgumentError("probability must be in [0, 1]");
  }
  if (edits_per_sentence < 1) {
    return absl::InvalidArgumentError("edits_per_sentence must be at least 1");
  }
  double total = 0.0;
  for (const auto& [kind, weight] : kind_weights) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      return absl::InvalidArgumentError("kind weights must be non-negative");
    }
    total += weight;
  }
  if (probability > 0.0 && total <= 0.0) {
    return absl::InvalidArgumentError("no perturbation kind has weight");
  }
  return absl::OkStatus();
}

json RecordToJson(const AugmentedRecord& record) {
  return json{{"chars", EncodeUtf8(record.labeled.chars)},
              {"boundaries", record.labeled.BoundaryIndices()},
              {"perturbations", record.perturbations}};
}

AugmentedRecord AugmentSentence(std::u32string_view text,
                                const WordPieceVocab& vocab,
                                const AugmentationPolicy& policy,
                                std::mt19937_64& rng,
                                const QwertyMap& qwerty) {
  AugmentedRecord record{LabelBoundaries(text, vocab), {}};
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (!(coin(rng) < policy.probability)) return record;

  std::vector<PerturbationKind> kinds;
  std::vector<double> weights;
  for (const auto& [kind, weight] : policy.kind_weights) {
    if (weight > 0.0) {
      kinds.push_back(kind);
      weights.push_back(weight);
    }
  }
  if (kinds.empty()) return record;
  std::discrete_distribution<size_t> pick_kind(weights.begin(), weights.end());

  const std::vector<WordSpan> words = TokenizeWords(text);
  std::vector<bool> claimed(words.size(), false);
  std::vector<Perturbation> chosen;
  for (int e = 0; e < policy.edits_per_sentence; ++e) {
    const PerturbationKind kind = kinds[pick_kind(rng)];
    const bool merge = kind == PerturbationKind::kMergeWords;
    std::vector<size_t> eligible;
    for (size_t j = 0; j < words.size(); ++j) {
      if (claimed[j]) continue;
      if (merge && (j + 1 >= words.size() || claimed[j + 1])) continue;
      if (!ApplicablePerturbations(text, j, {kind}, qwerty).empty()) {
        eligible.push_back(j);
      }
    }
    if (eligible.empty()) continue;
    std::uniform_int_distribution<size_t> pick_word(0, eligible.size() - 1);
    const size_t j = eligible[pick_word(rng)];
    std::optional<Perturbation> p =
        SamplePerturbation(text, j, {kind}, rng, {}, qwerty);
    if (!p.has_value()) continue;
    chosen.push_back(*p);
    claimed[j] = true;
    if (merge) claimed[j + 1] = true;
  }

  // Right to left, so every edit's word index is still valid when applied.
  std::sort(chosen.begin(), chosen.end(),
            [](const Perturbation& a, const Perturbation& b) {
              return a.word_index > b.word_index;
            });
  for (const Perturbation& p : chosen) {
    absl::StatusOr<BoundaryLabeledText> next =
        PerturbWithRelabel(record.labeled, p, qwerty);
    if (!next.ok()) continue;
    record.labeled = *std::move(next);
    record.perturbations.push_back(p);
  }
  return record;
}

std::mt19937_64 SentenceRng(uint64_t seed, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(index),
                    static_cast<uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

absl::Status EmitAugmentedDataset(std::span<const std::string> texts,
                                  const WordPieceVocab& vocab,
                                  const AugmentationPolicy& policy,
                                  uint64_t seed, std::ostream& out, int jobs) {
  if (absl::Status s = policy.Validate(); !s.ok()) return s;
  std::vector<std::string> lines(texts.size());
  auto work = [&](size_t begin, size_t step) {
    for (size_t i = begin; i < texts.size(); i += step) {
      std::mt19937_64 rng = SentenceRng(seed, i);
      lines[i] = RecordToJson(AugmentSentence(Normalize(DecodeUtf8(texts[i])),
                                              vocab, policy, rng))
                     .dump();
    }
  };
  const auto workers = static_cast<size_t>(std::max(1, jobs));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  for (const std::string& line : lines) out << line << '\n';
  if (!out) return absl::DataLossError("failed writing the dataset");
  return absl::OkStatus();
}

}  // namespace typostrike
