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

#ifndef TYPOSTRIKE_TEXT_H_
#define TYPOSTRIKE_TEXT_H_

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace typostrike {

// Text is handled as a sequence of Unicode code points. All character
// offsets in this library index into a std::u32string, never into UTF-8
// bytes. UTF-8 is only used at I/O boundaries.

std::u32string DecodeUtf8(std::string_view utf8);
std::string EncodeUtf8(std::u32string_view text);

// Unicode White_Space property.
bool IsWhitespace(char32_t c);
bool IsLetter(char32_t c);
bool IsAlphanumeric(char32_t c);
char32_t ToLower(char32_t c);

// Lowercases every character. Nothing else is touched: punctuation, markup
// and whitespace runs survive verbatim.
std::u32string Normalize(std::u32string_view raw);
std::string Normalize(std::string_view raw_utf8);

// A maximal run of non-whitespace characters, with its [start, end) offsets
// into the source text.
struct WordSpan {
  std::u32string text;
  size_t start = 0;
  size_t end = 0;

  size_t size() const { return end - start; }
  friend bool operator==(const WordSpan&, const WordSpan&) = default;
};

std::vector<WordSpan> TokenizeWords(std::u32string_view text);

// Drops leading and trailing non-alphanumeric characters. Interior
// punctuation ("can't") is kept. May return an empty string.
std::u32string StripPunctuation(std::u32string_view word);

// The key under which a surface word is counted and scored: normalized and
// punctuation-stripped, as UTF-8.
std::string ScoringKey(std::u32string_view word);

class StopWordSet {
 public:
  using Words = std::set<std::string, std::less<>>;

  StopWordSet() = default;
  explicit StopWordSet(Words words);

  // The built-in English list. Identical to data/stopwords_en.txt.
  static const StopWordSet& English();

  // One word per line, `#` starts a comment, blank lines ignored. Entries
  // are normalized on load; an entry containing whitespace is an error.
  static absl::StatusOr<StopWordSet> Parse(std::string_view contents);
  static absl::StatusOr<StopWordSet> Load(const std::string& path);

  bool Contains(std::string_view word) const;
  const Words& words() const { return words_; }
  size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  // Stable 64-bit FNV-1a over the sorted entries, as 16 hex digits.
  std::string Fingerprint() const;

 private:
  Words words_;
};

// Stable FNV-1a 64-bit digest rendered as 16 lowercase hex digits. Used for
// provenance fields that must not change between builds or platforms.
std::string Fnv1aHex(std::string_view data);

absl::StatusOr<std::string> ReadFile(const std::string& path);

}  // namespace typostrike

#endif  // TYPOSTRIKE_TEXT_H_
