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

#include "typostrike/perturbation.h"

#include <algorithm>
#include <array>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "string_view_compat.h"

namespace typostrike {
namespace {

constexpr std::string_view kDefaultQwerty =
#include "qwerty.inc"
    ;

constexpr std::array<std::pair<PerturbationKind, std::string_view>, 6>
    kKindNames = {{
        {PerturbationKind::kInsertChar, "insert"},
        {PerturbationKind::kDeleteChar, "delete"},
        {PerturbationKind::kSwapAdjacent, "swap"},
        {PerturbationKind::kSubstituteKeyboard, "substitute"},
        {PerturbationKind::kSplitWord, "split"},
        {PerturbationKind::kMergeWords, "merge"},
    }};

constexpr size_t kMinCharEditLength = 3;
constexpr size_t kMinSwapLength = 4;
constexpr size_t kMinSplitLength = 6;

absl::Status Illegal(const Perturbation& p, std::string_view why) {
  return absl::InvalidArgumentError(
      absl::StrCat("illegal ", Absl(KindName(p.kind)), " on word ", p.word_index,
                   " at offset ", p.char_offset, ": ", Absl(why)));
}

absl::Status CheckLegalOnWords(const std::vector<WordSpan>& words,
                               const Perturbation& p,
                               const QwertyMap& qwerty) {
  if (p.word_index >= words.size()) return Illegal(p, "no such word");
  const std::u32string& w = words[p.word_index].text;
  const size_t len = w.size();
  const size_t off = p.char_offset;
  const bool wants_payload = p.kind == PerturbationKind::kInsertChar ||
                             p.kind == PerturbationKind::kSubstituteKeyboard;
  if (wants_payload != p.payload.has_value()) {
    return Illegal(p, wants_payload ? "missing payload" : "unexpected payload");
  }
  switch (p.kind) {
    case PerturbationKind::kInsertChar:
    case PerturbationKind::kDeleteChar:
    case PerturbationKind::kSubstituteKeyboard:
      if (len < kMinCharEditLength || off < 1 || off > len - 2) {
        return Illegal(p, "offset is not an internal character");
      }
      if (!IsLetter(w[off])) return Illegal(p, "target is not a letter");
      if (p.kind == PerturbationKind::kInsertChar &&
          (*p.payload < U'a' || *p.payload > U'z')) {
        return Illegal(p, "inserted character must be in a-z");
      }
      if (p.kind == PerturbationKind::kSubstituteKeyboard &&
          qwerty.Neighbors(w[off]).find(*p.payload) == std::u32string::npos) {
        return Illegal(p, "replacement is not a keyboard neighbor");
      }
      return absl::OkStatus();
    case PerturbationKind::kSwapAdjacent:
      if (len < kMinSwapLength || off < 1 || off > len - 3) {
        return Illegal(p, "swap must stay inside the word");
      }
      if (!IsLetter(w[off]) || !IsLetter(w[off + 1])) {
        return Illegal(p, "swapped characters must be letters");
      }
      if (w[off] == w[off + 1]) return Illegal(p, "swap would be a no-op");
      return absl::OkStatus();
    case PerturbationKind::kSplitWord:
      if (len < kMinSplitLength || off < 1 || off > len - 1) {
        return Illegal(p, "split point out of range");
      }
      if (!IsLetter(w[off - 1]) || !IsLetter(w[off])) {
        return Illegal(p, "split point must be between two letters");
      }
      return absl::OkStatus();
    case PerturbationKind::kMergeWords:
      if (off != 0) return Illegal(p, "merge takes no offset");
      if (p.word_index + 1 >= words.size()) {
        return Illegal(p, "no right neighbor to merge with");
      }
      return absl::OkStatus();
  }
  return Illegal(p, "unknown kind");
}

std::u32string ApplyUnchecked(std::u32string_view text,
                              const std::vector<WordSpan>& words,
                              const Perturbation& p) {
  std::u32string out(text);
  const WordSpan& word = words[p.word_index];
  const size_t at = word.start + p.char_offset;
  switch (p.kind) {
    case PerturbationKind::kInsertChar:
      out.insert(out.begin() + at, *p.payload);
      break;
    case PerturbationKind::kDeleteChar:
      out.erase(at, 1);
      break;
    case PerturbationKind::kSwapAdjacent:
      std::swap(out[at], out[at + 1]);
      break;
    case PerturbationKind::kSubstituteKeyboard:
      out[at] = *p.payload;
      break;
    case PerturbationKind::kSplitWord:
      out.insert(out.begin() + at, U' ');
      break;
    case PerturbationKind::kMergeWords: {
      const WordSpan& next = words[p.word_index + 1];
      out.erase(word.end, next.start - word.end);
      break;
    }
  }
  return out;
}

}  // namespace

std::string_view KindName(PerturbationKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

absl::StatusOr<PerturbationKind> ParseKind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown perturbation kind '", Absl(name), "'"));
}

absl::StatusOr<KindSet> ParseKinds(std::string_view names) {
  KindSet kinds;
  for (const absl::string_view piece : absl::StrSplit(Absl(names), ',')) {
    std::string_view name = Std(piece);
    name = Std(absl::StripAsciiWhitespace(Absl(name)));
    if (name.empty()) continue;
    if (name == "chars") {
      kinds.insert({PerturbationKind::kInsertChar,
                    PerturbationKind::kDeleteChar,
                    PerturbationKind::kSwapAdjacent});
    } else if (name == "whitespace") {
      kinds.insert({PerturbationKind::kSplitWord,
                    PerturbationKind::kMergeWords});
    } else if (name == "all") {
      for (const auto& [k, unused] : kKindNames) kinds.insert(k);
    } else {
      absl::StatusOr<PerturbationKind> kind = ParseKind(name);
      if (!kind.ok()) return kind.status();
      kinds.insert(*kind);
    }
  }
  if (kinds.empty()) return absl::InvalidArgumentError("no kinds given");
  return kinds;
}

std::string FormatKinds(const KindSet& kinds) {
  return absl::StrJoin(kinds, ",", [](std::string* out, PerturbationKind k) {
    absl::StrAppend(out, Absl(KindName(k)));
  });
}

bool IsWhitespaceKind(PerturbationKind kind) {
  return kind == PerturbationKind::kSplitWord ||
         kind == PerturbationKind::kMergeWords;
}

KindSet DefaultAttackKinds() {
  return {PerturbationKind::kInsertChar, PerturbationKind::kDeleteChar,
          PerturbationKind::kSwapAdjacent, PerturbationKind::kSplitWord,
          PerturbationKind::kMergeWords};
}

KindSet ExhaustiveKinds() {
  return {PerturbationKind::kInsertChar, PerturbationKind::kDeleteChar,
          PerturbationKind::kSwapAdjacent,
          PerturbationKind::kSubstituteKeyboard};
}

void to_json(nlohmann::json& j, const Perturbation& p) {
  j = nlohmann::json{{"kind", KindName(p.kind)},
                     {"word_index", p.word_index},
                     {"char_offset", p.char_offset}};
  j["payload"] = p.payload.has_value()
                     ? nlohmann::json(EncodeUtf8(std::u32string(1, *p.payload)))
                     : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, Perturbation& p) {
  absl::StatusOr<PerturbationKind> kind =
      ParseKind(j.at("kind").get<std::string>());
  if (!kind.ok()) {
    throw nlohmann::json::other_error::create(
        501, std::string(kind.status().message()), &j);
  }
  p.kind = *kind;
  p.word_index = j.at("word_index").get<size_t>();
  p.char_offset = j.at("char_offset").get<size_t>();
  p.payload.reset();
  if (const auto it = j.find("payload"); it != j.end() && !it->is_null()) {
    const std::u32string payload = DecodeUtf8(it->get<std::string>());
    if (payload.size() != 1) {
      throw nlohmann::json::other_error::create(
          501, "payload must be a single character", &j);
    }
    p.payload = payload.front();
  }
}

const QwertyMap& QwertyMap::Default() {
  static const QwertyMap* const layout = [] {
    absl::StatusOr<QwertyMap> parsed = Parse(kDefaultQwerty);
    return new QwertyMap(parsed.ok() ? *std::move(parsed) : QwertyMap());
  }();
  return *layout;
}

absl::StatusOr<QwertyMap> QwertyMap::Parse(std::string_view contents) {
  QwertyMap layout;
  int line_number = 0;
  for (const absl::string_view piece : absl::StrSplit(Absl(contents), '\n')) {
    std::string_view line = Std(piece);
    ++line_number;
    if (const size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Std(absl::StripAsciiWhitespace(Absl(line)));
    if (line.empty()) continue;
    const std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(Absl(line), absl::MaxSplits(':', 1));
    const std::u32string key =
        Normalize(DecodeUtf8(Std(absl::StripAsciiWhitespace(kv.first))));
    std::u32string neighbors =
        Normalize(DecodeUtf8(Std(absl::StripAsciiWhitespace(kv.second))));
    if (key.size() != 1 || !IsLetter(key[0])) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_number, ": key must be one letter"));
    }
    for (const char32_t c : neighbors) {
      if (!IsLetter(c) || c == key[0]) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_number, ": neighbors must be other letters"));
      }
    }
    std::sort(neighbors.begin(), neighbors.end());
    neighbors.erase(std::unique(neighbors.begin(), neighbors.end()),
                    neighbors.end());
    layout.adjacency_[key[0]] = std::move(neighbors);
  }
  for (const auto& [key, neighbors] : layout.adjacency_) {
    for (const char32_t n : neighbors) {
      if (layout.Neighbors(n).find(key) == std::u32string::npos) {
        return absl::InvalidArgumentError(
            absl::StrCat("keyboard adjacency is not symmetric: ",
                         EncodeUtf8(std::u32string{key, U'/', n})));
      }
    }
  }
  return layout;
}

absl::StatusOr<QwertyMap> QwertyMap::Load(const std::string& path) {
  absl::StatusOr<std::string> contents = ReadFile(path);
  if (!contents.ok()) return contents.status();
  return Parse(*contents);
}

const std::u32string& QwertyMap::Neighbors(char32_t c) const {
  static const std::u32string* const kNone = new std::u32string();
  const auto it = adjacency_.find(c);
  return it == adjacency_.end() ? *kNone : it->second;
}

std::vector<Perturbation> ApplicablePerturbations(std::u32string_view text,
                                                  size_t word_index,
                                                  const KindSet& kinds,
                                                  const QwertyMap& qwerty) {
  std::vector<Perturbation> out;
  const std::vector<WordSpan> words = TokenizeWords(text);
  if (word_index >= words.size()) return out;
  const std::u32string& w = words[word_index].text;
  const size_t len = w.size();

  auto keep_if_legal = [&](Perturbation p) {
    if (CheckLegalOnWords(words, p, qwerty).ok()) out.push_back(p);
  };
  // KindSet iterates in enum order, which fixes the (kind, offset, payload)
  // ordering.
  for (const PerturbationKind kind : kinds) {
    switch (kind) {
      case PerturbationKind::kInsertChar:
        for (size_t off = 1; off + 1 < len; ++off) {
          for (char32_t c = U'a'; c <= U'z'; ++c) {
            keep_if_legal({kind, word_index, off, c});
          }
        }
        break;
      case PerturbationKind::kSubstituteKeyboard:
        for (size_t off = 1; off + 1 < len; ++off) {
          for (const char32_t c : qwerty.Neighbors(w[off])) {
            keep_if_legal({kind, word_index, off, c});
          }
        }
        break;
      case PerturbationKind::kDeleteChar:
      case PerturbationKind::kSwapAdjacent:
      case PerturbationKind::kSplitWord:
        for (size_t off = 1; off < len; ++off) {
          keep_if_legal({kind, word_index, off, std::nullopt});
        }
        break;
      case PerturbationKind::kMergeWords:
        keep_if_legal({kind, word_index, 0, std::nullopt});
        break;
    }
  }
  return out;
}

absl::Status CheckLegal(std::u32string_view text, const Perturbation& p,
                        const QwertyMap& qwerty) {
  return CheckLegalOnWords(TokenizeWords(text), p, qwerty);
}

absl::StatusOr<std::u32string> Apply(std::u32string_view text,
                                     const Perturbation& p,
                                     const QwertyMap& qwerty) {
  const std::vector<WordSpan> words = TokenizeWords(text);
  if (absl::Status legal = CheckLegalOnWords(words, p, qwerty); !legal.ok()) {
    return legal;
  }
  return ApplyUnchecked(text, words, p);
}

absl::StatusOr<std::u32string> ApplyAll(std::u32string_view text,
                                        std::vector<Perturbation> edits,
                                        const QwertyMap& qwerty) {
  std::sort(edits.begin(), edits.end(),
            [](const Perturbation& a, const Perturbation& b) {
              return a.word_index > b.word_index;
            });
  std::set<size_t> claimed;
  for (const Perturbation& p : edits) {
    const bool fresh = claimed.insert(p.word_index).second;
    const bool neighbor_fresh = p.kind != PerturbationKind::kMergeWords ||
                                claimed.insert(p.word_index + 1).second;
    if (!fresh || !neighbor_fresh) {
      return absl::InvalidArgumentError(
          absl::StrCat("word ", p.word_index, " is edited more than once"));
    }
  }
  std::u32string current(text);
  for (const Perturbation& p : edits) {
    absl::StatusOr<std::u32string> next = Apply(current, p, qwerty);
    if (!next.ok()) return next.status();
    current = *std::move(next);
  }
  return current;
}

std::optional<Perturbation> SamplePerturbation(
    std::u32string_view text, size_t word_index, const KindSet& kinds,
    std::mt19937_64& rng, const std::set<Perturbation>& exclude,
    const QwertyMap& qwerty) {
  std::vector<Perturbation> candidates =
      ApplicablePerturbations(text, word_index, kinds, qwerty);
  std::erase_if(candidates,
                [&](const Perturbation& p) { return exclude.contains(p); });
  if (candidates.empty()) return std::nullopt;
  std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
  return candidates[pick(rng)];
}

}  // namespace typostrike
